use num_traits::{One, Signed, Zero};
use std::collections::HashSet;

use crate::exact_geometry::linalg::{primitive_int, qi, LinForm, Q};

/// Relation of an affine row `a.x + b` to zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rel {
    Eq,
    Gt,
    Ge,
}

/// Affine constraint `a.x + b  rel  0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Row {
    pub a: Vec<Q>,
    pub b: Q,
    pub rel: Rel,
}

impl Row {
    pub fn new(a: Vec<Q>, b: Q, rel: Rel) -> Self {
        Row { a, b, rel }
    }
    pub fn homogeneous(f: &LinForm, rel: Rel) -> Self {
        Row { a: f.coeffs.clone(), b: Q::zero(), rel }
    }
    pub fn holds(&self, x: &[Q]) -> bool {
        let v = self.a.iter().zip(x).fold(self.b.clone(), |acc, (a, x)| acc + a * x);
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Gt => v.is_positive(),
            Rel::Ge => !v.is_negative(),
        }
    }
    /// Same constraint scaled to primitive integers by a positive factor.
    fn normalized(&self) -> Row {
        let mut all = self.a.clone();
        all.push(self.b.clone());
        let ints = primitive_int(&all, self.rel == Rel::Eq);
        let b = qi(ints.last().unwrap());
        let a = ints[..ints.len() - 1].iter().map(qi).collect();
        Row { a, b, rel: self.rel }
    }
}

/// System of affine constraints over `dim` rational variables.
#[derive(Clone, Debug, Default)]
pub struct System {
    pub dim: usize,
    pub rows: Vec<Row>,
}

impl System {
    pub fn new(dim: usize) -> Self {
        System { dim, rows: Vec::new() }
    }
    pub fn push(&mut self, row: Row) -> &mut Self {
        assert_eq!(row.a.len(), self.dim);
        self.rows.push(row);
        self
    }
    pub fn eq(&mut self, f: &LinForm) -> &mut Self {
        self.push(Row::homogeneous(f, Rel::Eq))
    }
    pub fn gt(&mut self, f: &LinForm) -> &mut Self {
        self.push(Row::homogeneous(f, Rel::Gt))
    }
    pub fn ge(&mut self, f: &LinForm) -> &mut Self {
        self.push(Row::homogeneous(f, Rel::Ge))
    }
    /// `f < 0`.
    pub fn lt(&mut self, f: &LinForm) -> &mut Self {
        self.push(Row::homogeneous(&f.neg(), Rel::Gt))
    }
    /// `f <= 0`.
    pub fn le(&mut self, f: &LinForm) -> &mut Self {
        self.push(Row::homogeneous(&f.neg(), Rel::Ge))
    }
    pub fn holds(&self, x: &[Q]) -> bool {
        self.rows.iter().all(|r| r.holds(x))
    }
    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }
    /// A rational point satisfying every row, if one exists.
    pub fn solve(&self) -> Option<Vec<Q>> {
        let x = solve_system(self.dim, &self.rows)?;
        debug_assert!(self.holds(&x), "witness fails its own system");
        Some(x)
    }
}

/// Gaussian elimination of equalities, then Fourier-Motzkin with strictness tracking
/// and back-substitution of a witness.
fn solve_system(dim: usize, rows: &[Row]) -> Option<Vec<Q>> {
    let mut eqs: Vec<Row> = Vec::new();
    let mut ineqs: Vec<Row> = Vec::new();
    for r in rows {
        if r.rel == Rel::Eq {
            eqs.push(r.clone());
        } else {
            ineqs.push(r.clone());
        }
    }

    // Equality phase: each pivot is recorded as (variable, row) for back-substitution.
    let mut subs: Vec<(usize, Row)> = Vec::new();
    while let Some(r) = eqs.pop() {
        let Some(j) = r.a.iter().position(|x| !x.is_zero()) else {
            if r.b.is_zero() {
                continue;
            }
            return None;
        };
        let eliminate = |row: &mut Row| {
            if row.a[j].is_zero() {
                return;
            }
            let f = &row.a[j] / &r.a[j];
            for k in 0..dim {
                let v = &row.a[k] - &f * &r.a[k];
                row.a[k] = v;
            }
            row.b = &row.b - &f * &r.b;
        };
        eqs.iter_mut().for_each(eliminate);
        ineqs.iter_mut().for_each(eliminate);
        subs.push((j, r));
    }
    let eliminated: HashSet<usize> = subs.iter().map(|(j, _)| *j).collect();

    // Fourier-Motzkin phase.
    let mut current = dedupe(ineqs)?;
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    for j in (0..dim).filter(|j| !eliminated.contains(j)) {
        let mut pos = Vec::new();
        let mut negs = Vec::new();
        let mut rest = Vec::new();
        for r in &current {
            if r.a[j].is_positive() {
                pos.push(r.clone());
            } else if r.a[j].is_negative() {
                negs.push(r.clone());
            } else {
                rest.push(r.clone());
            }
        }
        for p in &pos {
            for n in &negs {
                let cp = &p.a[j];
                let cn = -n.a[j].clone();
                let a: Vec<Q> = (0..dim).map(|k| cp * &n.a[k] + &cn * &p.a[k]).collect();
                let b = cp * &n.b + &cn * &p.b;
                let rel = if p.rel == Rel::Gt || n.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
                rest.push(Row { a, b, rel });
            }
        }
        stages.push((j, current));
        current = dedupe(rest)?;
    }
    // All remaining rows are constant and were checked by dedupe.
    let mut x = vec![Q::zero(); dim];
    for (j, stage) in stages.iter().rev() {
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for r in stage {
            if r.a[*j].is_zero() {
                continue;
            }
            let mut rest = r.b.clone();
            for k in 0..dim {
                if k != *j && !r.a[k].is_zero() {
                    rest += &r.a[k] * &x[k];
                }
            }
            let bound = -rest / &r.a[*j];
            let strict = r.rel == Rel::Gt;
            if r.a[*j].is_positive() {
                lo = Some(match lo {
                    None => (bound, strict),
                    Some((l, s)) => {
                        if bound > l {
                            (bound, strict)
                        } else if bound == l {
                            (l, s || strict)
                        } else {
                            (l, s)
                        }
                    }
                });
            } else {
                hi = Some(match hi {
                    None => (bound, strict),
                    Some((h, s)) => {
                        if bound < h {
                            (bound, strict)
                        } else if bound == h {
                            (h, s || strict)
                        } else {
                            (h, s)
                        }
                    }
                });
            }
        }
        x[*j] = match (lo, hi) {
            (None, None) => Q::zero(),
            (Some((l, s)), None) => {
                if s {
                    l.floor() + Q::one()
                } else {
                    l.ceil()
                }
            }
            (None, Some((h, s))) => {
                if s {
                    h.ceil() - Q::one()
                } else {
                    h.floor()
                }
            }
            (Some((l, ls)), Some((h, hs))) => {
                if l == h {
                    debug_assert!(!ls && !hs);
                    l
                } else {
                    pick_between(&l, ls, &h, hs)
                }
            }
        };
    }
    for (j, r) in subs.iter().rev() {
        let mut rest = r.b.clone();
        for k in 0..dim {
            if k != *j {
                rest += &r.a[k] * &x[k];
            }
        }
        x[*j] = -rest / &r.a[*j];
    }
    Some(x)
}

/// A simple rational in the interval, preferring integers.
fn pick_between(l: &Q, ls: bool, h: &Q, hs: bool) -> Q {
    let ok = |v: &Q| (if ls { v > l } else { v >= l }) && (if hs { v < h } else { v <= h });
    let c = l.floor() + Q::one();
    if ok(&c) {
        return c;
    }
    let c = l.ceil();
    if ok(&c) {
        return c;
    }
    (l + h) / Q::from_integer(2.into())
}

/// Normalizes, removes duplicates and checks constant rows. `None` if a constant row fails.
fn dedupe(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        if r.a.iter().all(|x| x.is_zero()) {
            let ok = match r.rel {
                Rel::Eq => r.b.is_zero(),
                Rel::Gt => r.b.is_positive(),
                Rel::Ge => !r.b.is_negative(),
            };
            if !ok {
                return None;
            }
            continue;
        }
        let n = r.normalized();
        // A strict row makes the non-strict copy with the same data redundant.
        if seen.insert(n.clone()) {
            out.push(n);
        }
    }
    let stricts: HashSet<(Vec<Q>, Q)> = out
        .iter()
        .filter(|r| r.rel == Rel::Gt)
        .map(|r| (r.a.clone(), r.b.clone()))
        .collect();
    out.retain(|r| r.rel == Rel::Gt || !stricts.contains(&(r.a.clone(), r.b.clone())));
    Some(out)
}

/// Homogeneous feasibility of `{eq = 0, gt > 0, ge >= 0}`.
pub fn feasible_point(dim: usize, eq: &[LinForm], gt: &[LinForm], ge: &[LinForm]) -> Option<Vec<Q>> {
    let mut s = System::new(dim);
    eq.iter().for_each(|f| {
        s.eq(f);
    });
    gt.iter().for_each(|f| {
        s.gt(f);
    });
    ge.iter().for_each(|f| {
        s.ge(f);
    });
    s.solve()
}
