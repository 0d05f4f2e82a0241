use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashSet;

use super::linalg::{dot, primitive_int, q, LinForm, Mat, Q, RatVec};
use crate::error::{ChambrierError, Result};

/// Supported root system labels.
pub const SUPPORTED_TYPES: [&str; 8] = ["A1", "A2", "A3", "B2", "C2", "G2", "A1xA1", "A1xA2"];

/// Sign of a linear form at a point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Neg,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Pos,
}

impl Sign {
    pub fn of(x: &Q) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

/// Crystallographic root system with data expressed in the simple-coroot basis.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub label: String,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<LinForm>,
    pub simple_coroots: Vec<RatVec>,
    /// Inner product on coroot coordinates (symmetrized Cartan matrix).
    pub gram: Mat,
    pub positive_roots: Vec<LinForm>,
    pub simple_reflections: Vec<Mat>,
    /// Squared lengths of the simple roots.
    pub root_lengths: Vec<Q>,
    /// Point with every simple root equal to 1; positive roots are positive there.
    pub rho_point: RatVec,
    /// Irreducible components as sets of simple indices.
    pub components: Vec<Vec<usize>>,
}

fn block_diag(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut m = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    m
}

fn cartan_block(name: &str) -> Option<Vec<Vec<i64>>> {
    Some(match name {
        "A1" => vec![vec![2]],
        "A2" => vec![vec![2, -1], vec![-1, 2]],
        "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        "B2" => vec![vec![2, -1], vec![-2, 2]],
        "C2" => vec![vec![2, -2], vec![-1, 2]],
        "G2" => vec![vec![2, -3], vec![-1, 2]],
        _ => return None,
    })
}

/// Cartan matrix for a supported label.
pub fn cartan_matrix(label: &str) -> Result<Vec<Vec<i64>>> {
    if !SUPPORTED_TYPES.contains(&label) {
        return Err(ChambrierError::UnsupportedType(label.to_string()));
    }
    let blocks: Option<Vec<_>> = label.split('x').map(cartan_block).collect();
    blocks
        .map(|b| block_diag(&b))
        .ok_or_else(|| ChambrierError::UnsupportedType(label.to_string()))
}

/// Connected components of the Dynkin diagram of a Cartan matrix.
pub fn diagram_components(cartan: &[Vec<i64>], subset: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut comps = Vec::new();
    for &s in subset {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        seen.insert(s);
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for &b in subset {
                if !seen.contains(&b) && cartan[a][b] != 0 {
                    seen.insert(b);
                    comp.push(b);
                }
            }
            k += 1;
        }
        comp.sort();
        comps.push(comp);
    }
    comps.sort();
    comps
}

impl RootSystem {
    pub fn new(label: &str) -> Result<RootSystem> {
        let cartan = cartan_matrix(label)?;
        let n = cartan.len();
        let all: Vec<usize> = (0..n).collect();
        let components = diagram_components(&cartan, &all);

        // Squared lengths: a[i][j] |a_i|^2 = a[j][i] |a_j|^2, shortest root of each component has length 2.
        let mut lengths: Vec<Option<Q>> = vec![None; n];
        for comp in &components {
            lengths[comp[0]] = Some(q(1));
            let mut changed = true;
            while changed {
                changed = false;
                for &i in comp {
                    for &j in comp {
                        if cartan[i][j] != 0 && lengths[i].is_some() && lengths[j].is_none() {
                            let li = lengths[i].clone().unwrap();
                            lengths[j] = Some(li * q(cartan[i][j]) / q(cartan[j][i]));
                            changed = true;
                        }
                    }
                }
            }
            let min = comp.iter().map(|&i| lengths[i].clone().unwrap()).min().unwrap();
            for &i in comp {
                let v = lengths[i].clone().unwrap() * q(2) / &min;
                lengths[i] = Some(v);
            }
        }
        let root_lengths: Vec<Q> = lengths.into_iter().map(|x| x.unwrap()).collect();

        let mut gram = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, q(cartan[i][j]) * q(2) / &root_lengths[j]);
            }
        }
        let simple_roots: Vec<LinForm> = (0..n)
            .map(|j| LinForm::new((0..n).map(|i| q(cartan[i][j])).collect()))
            .collect();
        let simple_coroots: Vec<RatVec> = (0..n)
            .map(|i| {
                let mut v = RatVec::zeros(n);
                v.0[i] = Q::one();
                v
            })
            .collect();
        let simple_reflections: Vec<Mat> = (0..n)
            .map(|i| {
                let mut m = Mat::identity(n);
                for k in 0..n {
                    let v = m.get(i, k) - &simple_roots[i].coeffs[k];
                    m.set(i, k, v);
                }
                m
            })
            .collect();

        // rho_point solves alpha_j(x) = 1 for every simple j.
        let a = Mat::from_rows(
            &simple_roots.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(),
            n,
        );
        let rho = a
            .solve(&vec![Q::one(); n])
            .ok_or_else(|| ChambrierError::Invariant("singular Cartan matrix".into()))?;

        // Closure of the simple roots under simple reflections.
        let mut roots: Vec<LinForm> = simple_roots.clone();
        let mut seen: HashSet<Vec<Q>> = roots.iter().map(|r| r.coeffs.clone()).collect();
        let mut k = 0;
        while k < roots.len() {
            let r = roots[k].clone();
            for s in &simple_reflections {
                // s is an involution, so acting on forms is r * s.
                let img = LinForm::new(s.left_apply(&r.coeffs));
                if seen.insert(img.coeffs.clone()) {
                    roots.push(img);
                }
            }
            k += 1;
        }
        let mut positive: Vec<LinForm> = roots
            .into_iter()
            .filter(|r| dot(&r.coeffs, &rho).is_positive())
            .collect();
        // Order by height, then by simple-root coefficients in decreasing lexicographic order.
        let ainv = a.transpose().inverse().unwrap();
        let key = |r: &LinForm| {
            let c = ainv.apply(&r.coeffs);
            let h: Q = c.iter().fold(Q::zero(), |acc, x| acc + x);
            let neg: Vec<Q> = c.iter().map(|x| -x).collect();
            (h, neg)
        };
        positive.sort_by_key(key);

        Ok(RootSystem {
            label: label.to_string(),
            rank: n,
            cartan,
            simple_roots,
            simple_coroots,
            gram,
            positive_roots: positive,
            simple_reflections,
            root_lengths,
            rho_point: RatVec(rho),
            components,
        })
    }

    /// Coefficients of a root in the simple-root basis.
    pub fn simple_root_coords(&self, r: &LinForm) -> Vec<Q> {
        let a = Mat::from_rows(
            &self.simple_roots.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(),
            self.rank,
        );
        a.transpose().solve(&r.coeffs).expect("simple roots form a basis")
    }

    pub fn height(&self, r: &LinForm) -> Q {
        self.simple_root_coords(r).iter().fold(Q::zero(), |acc, x| acc + x)
    }

    /// Whether a root form is positive (evaluated at the rho point).
    pub fn is_positive_root(&self, r: &LinForm) -> bool {
        r.eval(&self.rho_point.0).is_positive()
    }

    /// Every root, positive roots first then their negatives.
    pub fn all_roots(&self) -> Vec<LinForm> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| r.neg()));
        v
    }

    /// Component index of each simple generator.
    pub fn component_of(&self, i: usize) -> usize {
        self.components.iter().position(|c| c.contains(&i)).unwrap()
    }

    /// Highest root of an irreducible component.
    pub fn highest_root(&self, comp: usize) -> LinForm {
        let members = &self.components[comp];
        self.positive_roots
            .iter()
            .filter(|r| {
                let c = self.simple_root_coords(r);
                (0..self.rank).all(|i| members.contains(&i) || c[i].is_zero())
            })
            .max_by_key(|r| self.height(r))
            .unwrap()
            .clone()
    }

    /// Sign vector of `x` over the positive roots.
    pub fn weyl_facet_of(&self, x: &RatVec) -> Result<Vec<Sign>> {
        if x.dim() != self.rank {
            return Err(ChambrierError::DimensionMismatch { expected: self.rank, got: x.dim() });
        }
        Ok(self.positive_roots.iter().map(|r| Sign::of(&r.eval(&x.0))).collect())
    }

    /// Reflection across the kernel of a linear form, orthogonal for the gram.
    pub fn reflection_of(&self, form: &LinForm) -> Mat {
        reflection_matrix(&self.gram, form)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<Vec<String>> = self
            .positive_roots
            .iter()
            .map(|r| primitive_int(&r.coeffs, false).iter().map(|x| x.to_string()).collect())
            .collect();
        let roots: Vec<Vec<i64>> = roots
            .iter()
            .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
            .collect();
        serde_json::json!({
            "schema": "chambrier/1",
            "label": self.label,
            "rank": self.rank,
            "cartan": self.cartan,
            "positive_roots": roots,
        })
    }
}

/// Gram-orthogonal reflection `x -> x - 2 c(x) / (c G^-1 c^T) G^-1 c^T`.
pub fn reflection_matrix(gram: &Mat, form: &LinForm) -> Mat {
    let n = gram.rows;
    let ginv = gram.inverse().expect("gram is positive definite");
    let v = ginv.apply(&form.coeffs);
    let norm = dot(&form.coeffs, &v);
    let mut m = Mat::identity(n);
    for i in 0..n {
        for j in 0..n {
            let val = m.get(i, j) - q(2) * &v[i] * &form.coeffs[j] / &norm;
            m.set(i, j, val);
        }
    }
    m
}
