use num_bigint::BigInt;
use num_traits::Zero;
use sha2::{Digest, Sha256};
use std::cmp::Ordering;

use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{primitive_int, row_space_basis, LinForm, Mat, Q};
use crate::polyhedra::System;

/// Relatively open rational polyhedral cone in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub dim: usize,
    /// Primitive integer rows of the reduced echelon basis of the equalities.
    pub eq: Vec<Vec<BigInt>>,
    /// Irredundant strict forms, reduced modulo the equalities, primitive and sorted.
    pub gt: Vec<Vec<BigInt>>,
    pub span_dim: usize,
    pub id: String,
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.span_dim, &self.eq, &self.gt).cmp(&(other.span_dim, &other.eq, &other.gt))
    }
}

fn reduce_mod(basis: &[Vec<Q>], pivots: &[usize], v: &[Q]) -> Vec<Q> {
    let mut v = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for k in 0..v.len() {
            let x = &v[k] - &f * &row[k];
            v[k] = x;
        }
    }
    v
}

fn stable_id(dim: usize, eq: &[Vec<BigInt>], gt: &[Vec<BigInt>]) -> String {
    let fmt = |rows: &[Vec<BigInt>]| {
        rows.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    };
    let text = format!("d{}|eq:{}|gt:{}", dim, fmt(eq), fmt(gt));
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl Cone {
    /// Canonical form of `{eq = 0, gt > 0}`.
    pub fn canonicalize(dim: usize, raw_eq: &[LinForm], raw_gt: &[LinForm]) -> Result<Cone> {
        for f in raw_eq.iter().chain(raw_gt) {
            if f.dim() != dim {
                return Err(ChambrierError::DimensionMismatch { expected: dim, got: f.dim() });
            }
        }
        let eq_rows: Vec<Vec<Q>> = raw_eq.iter().map(|f| f.coeffs.clone()).collect();
        let basis = row_space_basis(&eq_rows, dim);
        let pivots: Vec<usize> = basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect();
        let eq: Vec<Vec<BigInt>> = basis.iter().map(|r| primitive_int(r, true)).collect();

        let mut gt: Vec<Vec<BigInt>> = Vec::new();
        for f in raw_gt {
            let red = reduce_mod(&basis, &pivots, &f.coeffs);
            if red.iter().all(|x| x.is_zero()) {
                return Err(ChambrierError::EmptyCone);
            }
            let p = primitive_int(&red, false);
            if !gt.contains(&p) {
                gt.push(p);
            }
        }
        gt.sort();

        let eq_forms: Vec<LinForm> = eq.iter().map(|r| LinForm::from_ints(r)).collect();
        let mut sys = System::new(dim);
        eq_forms.iter().for_each(|f| {
            sys.eq(f);
        });
        gt.iter().for_each(|r| {
            sys.gt(&LinForm::from_ints(r));
        });
        if !sys.is_feasible() {
            return Err(ChambrierError::EmptyCone);
        }

        // Drop redundant strict forms one at a time.
        let mut k = 0;
        while k < gt.len() {
            let mut s = System::new(dim);
            eq_forms.iter().for_each(|f| {
                s.eq(f);
            });
            for (i, r) in gt.iter().enumerate() {
                if i != k {
                    s.gt(&LinForm::from_ints(r));
                }
            }
            s.le(&LinForm::from_ints(&gt[k]));
            if s.is_feasible() {
                k += 1;
            } else {
                gt.remove(k);
            }
        }
        let span_dim = dim - eq.len();
        let id = stable_id(dim, &eq, &gt);
        Ok(Cone { dim, eq, gt, span_dim, id })
    }

    /// The whole ambient space.
    pub fn whole(dim: usize) -> Cone {
        Cone::canonicalize(dim, &[], &[]).unwrap()
    }

    pub fn eq_forms(&self) -> Vec<LinForm> {
        self.eq.iter().map(|r| LinForm::from_ints(r)).collect()
    }

    pub fn gt_forms(&self) -> Vec<LinForm> {
        self.gt.iter().map(|r| LinForm::from_ints(r)).collect()
    }

    /// Adds this cone's constraints to a system.
    pub fn push_open(&self, s: &mut System) {
        for f in self.eq_forms() {
            s.eq(&f);
        }
        for f in self.gt_forms() {
            s.gt(&f);
        }
    }

    /// Adds the constraints of the closure.
    pub fn push_closed(&self, s: &mut System) {
        for f in self.eq_forms() {
            s.eq(&f);
        }
        for f in self.gt_forms() {
            s.ge(&f);
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let mut s = System::new(self.dim);
        self.push_open(&mut s);
        s.holds(x)
    }

    pub fn closure_contains(&self, x: &[Q]) -> bool {
        let mut s = System::new(self.dim);
        self.push_closed(&mut s);
        s.holds(x)
    }

    /// A rational point of the cone.
    pub fn witness(&self) -> Vec<Q> {
        let mut s = System::new(self.dim);
        self.push_open(&mut s);
        s.solve().expect("canonical cones are feasible")
    }

    /// Image under a linear map given by its inverse matrix (forms pull back through it).
    pub fn transform_by_inverse(&self, inv: &Mat) -> Result<Cone> {
        let eq: Vec<LinForm> = self.eq_forms().iter().map(|f| LinForm::new(inv.left_apply(&f.coeffs))).collect();
        let gt: Vec<LinForm> = self.gt_forms().iter().map(|f| LinForm::new(inv.left_apply(&f.coeffs))).collect();
        Cone::canonicalize(self.dim, &eq, &gt)
    }

    /// Basis of `Vect(cone)`.
    pub fn span_basis(&self) -> Vec<Vec<Q>> {
        if self.eq.is_empty() {
            return Mat::identity(self.dim).col_vecs();
        }
        let rows: Vec<Vec<Q>> = self.eq_forms().into_iter().map(|f| f.coeffs).collect();
        Mat::from_rows(&rows, self.dim).nullspace()
    }

    /// Whether a form vanishes identically on the cone.
    pub fn form_vanishes(&self, f: &LinForm) -> bool {
        self.span_basis().iter().all(|v| f.eval(v).is_zero())
    }

    /// Whether the cone meets the closure of `other`.
    pub fn meets_closure_of(&self, other: &Cone) -> bool {
        let mut s = System::new(self.dim);
        self.push_open(&mut s);
        other.push_closed(&mut s);
        s.is_feasible()
    }

    /// Whether the cone meets `other`.
    pub fn meets(&self, other: &Cone) -> bool {
        let mut s = System::new(self.dim);
        self.push_open(&mut s);
        other.push_open(&mut s);
        s.is_feasible()
    }

    /// Whether the cone lies in the closure of `other`.
    pub fn subset_of_closure(&self, other: &Cone) -> bool {
        for f in other.eq_forms() {
            if !self.form_vanishes(&f) {
                return false;
            }
        }
        for f in other.gt_forms() {
            let mut s = System::new(self.dim);
            self.push_open(&mut s);
            s.lt(&f);
            if s.is_feasible() {
                return false;
            }
        }
        true
    }

    /// Whether the cone lies in `other`.
    pub fn subset_of(&self, other: &Cone) -> bool {
        if !self.subset_of_closure(other) {
            return false;
        }
        for f in other.gt_forms() {
            let mut s = System::new(self.dim);
            self.push_open(&mut s);
            s.le(&f);
            if s.is_feasible() {
                return false;
            }
        }
        true
    }

    /// All canonical forms of the cone (equalities and stricts).
    pub fn all_forms(&self) -> Vec<LinForm> {
        let mut v = self.eq_forms();
        v.extend(self.gt_forms());
        v
    }

    pub fn eq_ints_i64(&self) -> Vec<Vec<i64>> {
        to_i64(&self.eq)
    }

    pub fn gt_ints_i64(&self) -> Vec<Vec<i64>> {
        to_i64(&self.gt)
    }
}

pub fn to_i64(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    use num_traits::ToPrimitive;
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("coefficient fits in i64")).collect())
        .collect()
}

/// Canonicalizes a cone given by integer rows.
pub fn canonicalize_cone(dim: usize, raw_eq: &[LinForm], raw_gt: &[LinForm]) -> Result<Cone> {
    Cone::canonicalize(dim, raw_eq, raw_gt)
}
