use serde::Serialize;

use crate::exact_geometry::linalg::{LinForm, RatVec};
use crate::exact_geometry::root_system::Sign;
use crate::polyhedra::System;

/// Nonempty sign stratum of a hyperplane arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignFace {
    pub signs: Vec<Sign>,
    pub witness: RatVec,
}

fn push_sign(s: &mut System, f: &LinForm, sign: Sign) {
    match sign {
        Sign::Pos => s.gt(f),
        Sign::Zero => s.eq(f),
        Sign::Neg => s.lt(f),
    };
}

/// All nonempty sign strata, by recursive sign assignment with exact feasibility pruning.
pub fn arrangement_faces(dim: usize, forms: &[LinForm]) -> Vec<SignFace> {
    if forms.is_empty() {
        return vec![SignFace { signs: Vec::new(), witness: RatVec::zeros(dim) }];
    }
    let mut out = Vec::new();
    let mut signs = Vec::with_capacity(forms.len());
    recurse(dim, forms, &mut signs, &mut out);
    out
}

fn recurse(dim: usize, forms: &[LinForm], signs: &mut Vec<Sign>, out: &mut Vec<SignFace>) {
    let k = signs.len();
    for sign in [Sign::Neg, Sign::Zero, Sign::Pos] {
        signs.push(sign);
        let mut s = System::new(dim);
        for (f, &sg) in forms.iter().zip(signs.iter()) {
            push_sign(&mut s, f, sg);
        }
        if let Some(x) = s.solve() {
            if k + 1 == forms.len() {
                out.push(SignFace { signs: signs.clone(), witness: RatVec(x) });
            } else {
                recurse(dim, forms, signs, out);
            }
        }
        signs.pop();
    }
}

/// Sign vector of a point over a list of forms.
pub fn signs_at(forms: &[LinForm], x: &[crate::exact_geometry::Q]) -> Vec<Sign> {
    forms.iter().map(|f| Sign::of(&f.eval(x))).collect()
}
