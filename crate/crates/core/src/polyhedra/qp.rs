use num_traits::Zero;

use super::fm::{Rel, Row, System};
use crate::exact_geometry::linalg::{dot, sub, Mat, Q};

/// Convex quadratic program `min (L u - d)^T G (L u - d)` over a polyhedron that may mix
/// strict and non-strict rows. Solved exactly by enumerating active sets.
#[derive(Clone, Debug)]
pub struct QuadProgram {
    pub system: System,
    /// `L`, shape `k x dim`.
    pub lin: Mat,
    pub target: Vec<Q>,
    /// Positive definite `k x k` weight.
    pub gram: Mat,
}

/// Outcome of a quadratic program.
#[derive(Clone, Debug)]
pub struct QpSolution {
    /// Minimum over the closure of the feasible set.
    pub min: Q,
    /// A minimizer in the closure.
    pub argmin: Vec<Q>,
    /// Whether the minimum is attained at a point of the (possibly open) feasible set.
    pub attained: bool,
}

impl QuadProgram {
    fn value(&self, u: &[Q]) -> Q {
        let r = sub(&self.lin.apply(u), &self.target);
        dot(&r, &self.gram.apply(&r))
    }

    /// `None` when the feasible set is empty.
    pub fn solve(&self) -> Option<QpSolution> {
        self.system.solve()?;
        let dim = self.system.dim;
        let eqs: Vec<&Row> = self.system.rows.iter().filter(|r| r.rel == Rel::Eq).collect();
        let ineqs: Vec<&Row> = self.system.rows.iter().filter(|r| r.rel != Rel::Eq).collect();
        let closed: Vec<Row> = self
            .system
            .rows
            .iter()
            .map(|r| Row::new(r.a.clone(), r.b.clone(), if r.rel == Rel::Gt { Rel::Ge } else { r.rel }))
            .collect();
        assert!(ineqs.len() <= 16, "active-set enumeration too large");

        let mut best: Option<(Q, Vec<Q>)> = None;
        for mask in 0u32..(1u32 << ineqs.len()) {
            let mut active: Vec<&Row> = eqs.clone();
            for (k, r) in ineqs.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    active.push(r);
                }
            }
            let Some(cand) = self.min_on_affine(dim, &active) else { continue };
            // Some closure point of this face must reach the same value of L u.
            let lu = self.lin.apply(&cand);
            let mut sys = System::new(dim);
            for r in &closed {
                sys.push(r.clone());
            }
            for r in &active {
                sys.push(Row::new(r.a.clone(), r.b.clone(), Rel::Eq));
            }
            for i in 0..self.lin.rows {
                sys.push(Row::new(self.lin.row(i), -lu[i].clone(), Rel::Eq));
            }
            let Some(pt) = sys.solve() else { continue };
            let v = self.value(&pt);
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, pt));
            }
        }
        let (min, argmin) = best?;
        let lu = self.lin.apply(&argmin);
        let mut sys = self.system.clone();
        for i in 0..self.lin.rows {
            sys.push(Row::new(self.lin.row(i), -lu[i].clone(), Rel::Eq));
        }
        let attained = sys.is_feasible();
        Some(QpSolution { min, argmin, attained })
    }

    /// Least-squares minimizer on the affine subspace cut out by `active` (as equalities).
    fn min_on_affine(&self, dim: usize, active: &[&Row]) -> Option<Vec<Q>> {
        let a_rows: Vec<Vec<Q>> = active.iter().map(|r| r.a.clone()).collect();
        let rhs: Vec<Q> = active.iter().map(|r| -r.b.clone()).collect();
        let u0 = if active.is_empty() {
            vec![Q::zero(); dim]
        } else {
            Mat::from_rows(&a_rows, dim).solve(&rhs)?
        };
        let null = if active.is_empty() {
            Mat::identity(dim).col_vecs()
        } else {
            Mat::from_rows(&a_rows, dim).nullspace()
        };
        if null.is_empty() {
            return Some(u0);
        }
        let n = Mat::from_cols(&null, dim);
        let ln = self.lin.mul(&n);
        let lnt_g = ln.transpose().mul(&self.gram);
        let h = lnt_g.mul(&ln);
        let resid = sub(&self.target, &self.lin.apply(&u0));
        let rhs = lnt_g.apply(&resid);
        let t = h.solve(&rhs)?;
        let step = n.apply(&t);
        Some(u0.iter().zip(&step).map(|(a, b)| a + b).collect())
    }

    /// Whether some feasible point has objective at most `bound`.
    pub fn reaches(&self, bound: &Q) -> bool {
        match self.solve() {
            None => false,
            Some(s) => s.min < *bound || (s.min == *bound && s.attained),
        }
    }
}
