use num_traits::Signed;
use std::collections::{HashMap, VecDeque};

use super::linalg::{LinForm, Mat, RatVec};
use super::root_system::RootSystem;
use crate::error::{ChambrierError, Result};

/// Element of the finite Weyl group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Mat,
    pub inverse: Mat,
    /// Reduced word over the simple generators (descent-following, smallest index first).
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Action on vectors.
pub fn act(w: &WeylElement, x: &RatVec) -> Result<RatVec> {
    if x.dim() != w.matrix.cols {
        return Err(ChambrierError::DimensionMismatch { expected: w.matrix.cols, got: x.dim() });
    }
    Ok(RatVec(w.matrix.apply(&x.0)))
}

/// Action on forms: `alpha -> alpha o w^-1`.
pub fn act_form(w: &WeylElement, a: &LinForm) -> Result<LinForm> {
    if a.dim() != w.matrix.cols {
        return Err(ChambrierError::DimensionMismatch { expected: w.matrix.cols, got: a.dim() });
    }
    Ok(LinForm::new(w.inverse.left_apply(&a.coeffs)))
}

/// Acts on a form by a matrix given through its inverse.
pub fn form_by_inverse(inv: &Mat, a: &LinForm) -> LinForm {
    LinForm::new(inv.left_apply(&a.coeffs))
}

/// Reduced word by descent-following.
pub fn reduced_word(rs: &RootSystem, m: &Mat) -> Vec<usize> {
    let mut w = m.clone();
    let mut letters = Vec::new();
    loop {
        let winv = w.inverse().unwrap();
        let descent = (0..rs.rank).find(|&i| {
            let img = winv.left_apply(&rs.simple_roots[i].coeffs);
            LinForm::new(img).eval(&rs.rho_point.0).is_negative()
        });
        match descent {
            Some(i) => {
                letters.push(i);
                w = w.mul(&rs.simple_reflections[i]);
            }
            None => break,
        }
    }
    letters.reverse();
    letters
}

/// Breadth-first closure of a set of generator matrices.
pub fn generate_group(n: usize, gens: &[Mat]) -> Vec<Mat> {
    let mut seen: HashMap<Mat, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([Mat::identity(n)]);
    seen.insert(Mat::identity(n), ());
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = m.mul(g);
            if !seen.contains_key(&p) {
                seen.insert(p.clone(), ());
                queue.push_back(p);
            }
        }
        out.push(m);
    }
    out
}

/// All elements of the Weyl group, identity first, in breadth-first order.
pub fn enumerate_weyl(rs: &RootSystem) -> Vec<WeylElement> {
    generate_group(rs.rank, &rs.simple_reflections)
        .into_iter()
        .map(|m| {
            let inverse = m.inverse().unwrap();
            let word = reduced_word(rs, &m);
            WeylElement { matrix: m, inverse, word }
        })
        .collect()
}

/// Matrix of a word, multiplied left to right.
pub fn word_matrix(rs: &RootSystem, word: &[usize]) -> Mat {
    word.iter()
        .fold(Mat::identity(rs.rank), |acc, &i| acc.mul(&rs.simple_reflections[i]))
}

/// Standard parabolic subgroup generated by the given simple reflections.
pub fn parabolic_subgroup(rs: &RootSystem, gens: &[usize]) -> Vec<Mat> {
    let mats: Vec<Mat> = gens.iter().map(|&i| rs.simple_reflections[i].clone()).collect();
    generate_group(rs.rank, &mats)
}
