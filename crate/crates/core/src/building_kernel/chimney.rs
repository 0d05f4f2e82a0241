//! Chimneys `Cl(c + f)` and tense galleries along rays.

use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

use super::window::{floor_i64, AlcoveWindow, Facet, GalleryWord};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{add, is_zero_vec, scale, Q};
use crate::exact_geometry::{q, Sign};
use crate::polyhedra::{Rel, Row, System};

/// Enclos of `c + f` for a facet `c` and a Weyl facet `f`, stored as one pair of optional
/// bounds `lo <= a <= hi` per positive root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chimney {
    pub base: Facet,
    pub direction: Vec<Sign>,
    pub bounds: Vec<(Option<i64>, Option<i64>)>,
}

/// Weyl facet with the given signs over the positive roots, as a constraint system.
fn weyl_facet_system(win: &AlcoveWindow, signs: &[Sign]) -> System {
    let mut s = System::new(win.dim());
    for (r, sg) in win.roots().iter().zip(signs) {
        match sg {
            Sign::Pos => s.gt(r),
            Sign::Neg => s.lt(r),
            Sign::Zero => s.eq(r),
        };
    }
    s
}

/// Chimney with base `c` and direction the Weyl facet of sign vector `direction`.
///
/// A half-apartment `a >= k` contains `c + f` iff `k <= inf_c a` and `a` is nonnegative on
/// `f`; the tightest such `k` is the floor of `inf_c a`, read off the code of `c`.
pub fn chimney(win: &AlcoveWindow, c: &Facet, direction: &[Sign]) -> Result<Chimney> {
    if direction.len() != win.roots().len() || c.code.len() != win.roots().len() {
        return Err(ChambrierError::DimensionMismatch { expected: win.roots().len(), got: direction.len() });
    }
    if !weyl_facet_system(win, direction).is_feasible() {
        return Err(ChambrierError::Validation("sign vector is not a Weyl facet".into()));
    }
    let bounds = AlcoveWindow::facet_bounds(c)
        .into_iter()
        .zip(direction)
        .map(|((lo, hi), sg)| match sg {
            Sign::Pos => (Some(lo), None),
            Sign::Neg => (None, Some(hi)),
            Sign::Zero => (Some(lo), Some(hi)),
        })
        .collect();
    Ok(Chimney { base: c.clone(), direction: direction.to_vec(), bounds })
}

impl Chimney {
    /// Closed constraint system.
    pub fn system(&self, win: &AlcoveWindow) -> System {
        let mut s = System::new(win.dim());
        for (r, (lo, hi)) in win.roots().iter().zip(&self.bounds) {
            if let Some(lo) = lo {
                s.push(Row::new(r.coeffs.clone(), q(-lo), Rel::Ge));
            }
            if let Some(hi) = hi {
                s.push(Row::new(r.neg().coeffs, q(*hi), Rel::Ge));
            }
        }
        s
    }

    pub fn contains_point(&self, win: &AlcoveWindow, x: &[Q]) -> bool {
        self.system(win).holds(x)
    }

    /// Whether a facet lies in the chimney.
    pub fn contains_facet(&self, f: &Facet) -> bool {
        AlcoveWindow::facet_bounds(f)
            .iter()
            .zip(&self.bounds)
            .all(|((a, b), (lo, hi))| lo.map_or(true, |lo| lo <= *a) && hi.map_or(true, |hi| *b <= hi))
    }

    /// Direction recovered from the chimney alone: the relative interior of its recession cone.
    pub fn recovered_direction(&self, win: &AlcoveWindow) -> Vec<Sign> {
        let mut rec = System::new(win.dim());
        for (r, (lo, hi)) in win.roots().iter().zip(&self.bounds) {
            if lo.is_some() {
                rec.ge(r);
            }
            if hi.is_some() {
                rec.le(r);
            }
        }
        win.roots()
            .iter()
            .map(|r| {
                let mut pos = rec.clone();
                pos.gt(r);
                let mut neg = rec.clone();
                neg.lt(r);
                match (pos.is_feasible(), neg.is_feasible()) {
                    (true, false) => Sign::Pos,
                    (false, true) => Sign::Neg,
                    (false, false) => Sign::Zero,
                    (true, true) => unreachable!("recession cone of a chimney is pointed along every root"),
                }
            })
            .collect()
    }

    /// Characteristic ray: origin in the base facet, direction in the Weyl facet.
    pub fn characteristic_ray(&self, win: &AlcoveWindow) -> Result<(Vec<Q>, Vec<Q>)> {
        let x = win.facet_point(&self.base)?;
        let v = weyl_facet_system(win, &self.direction).solve().ok_or(ChambrierError::EmptyCone)?;
        Ok((x, v))
    }
}

/// Enclos of the ray `s + t u`, `t >= 0`, as per-root bounds.
pub fn ray_enclos_bounds(win: &AlcoveWindow, s: &[Q], u: &[Q]) -> Vec<(Option<i64>, Option<i64>)> {
    win.roots()
        .iter()
        .map(|r| {
            let a = r.eval(s);
            let du = r.eval(u);
            let lo = floor_i64(&a);
            let hi = -floor_i64(&-a.clone());
            if du.is_positive() {
                (Some(lo), None)
            } else if du.is_negative() {
                (None, Some(hi))
            } else {
                (Some(lo), Some(hi))
            }
        })
        .collect()
}

/// Breakpoints `t > 0` where `s + t u` meets a wall not containing the ray, the first `count`.
fn breakpoints(win: &AlcoveWindow, s: &[Q], u: &[Q], count: usize) -> Vec<Q> {
    let mut ts: BTreeSet<Q> = BTreeSet::new();
    for r in win.roots() {
        let a = r.eval(s);
        let du = r.eval(u);
        if du.is_zero() {
            continue;
        }
        for i in 0..count as i64 {
            let level = if du.is_positive() { q(floor_i64(&a) + 1 + i) } else { q(-floor_i64(&-a.clone()) - 1 - i) };
            ts.insert((level - &a) / &du);
        }
    }
    ts.into_iter().take(count).collect()
}

/// Tense gallery starting at `c0` whose closure contains the first `segments` pieces of the
/// ray `s + t u`; each chamber of it has a closure meeting the ray.
///
/// The ray is cut at its wall crossings; each piece lies in a unique chamber on the side of
/// `c0` of every wall containing the ray, and consecutive chambers are joined by minimal galleries.
pub fn gallery_along_ray(win: &AlcoveWindow, c0: usize, s: &[Q], u: &[Q], segments: usize) -> Result<GalleryWord> {
    if s.len() != win.dim() || u.len() != win.dim() {
        return Err(ChambrierError::DimensionMismatch { expected: win.dim(), got: s.len().min(u.len()) });
    }
    if is_zero_vec(u) {
        return Err(ChambrierError::ZeroDirection);
    }
    let floors0 = &win.alcoves[c0].floors;
    let in_closure = win.roots().iter().zip(floors0).all(|(r, &k)| {
        let v = r.eval(s);
        q(k) <= v && v <= q(k + 1)
    });
    if !in_closure {
        return Err(ChambrierError::Validation("ray origin is not in the closure of the starting chamber".into()));
    }
    let ts = breakpoints(win, s, u, segments);
    let mut stops = vec![c0];
    let mut prev = q(0);
    for t in ts {
        let mid = add(s, &scale(u, &((&prev + &t) / q(2))));
        let floors: Vec<i64> = win
            .roots()
            .iter()
            .zip(floors0)
            .map(|(r, &k)| {
                let v = r.eval(&mid);
                if v.is_integer() && r.eval(u).is_zero() {
                    k
                } else {
                    floor_i64(&v)
                }
            })
            .collect();
        let idx = win
            .index_of_floors(&floors)
            .ok_or_else(|| ChambrierError::WindowExhausted("the ray leaves the window".into()))?;
        if *stops.last().unwrap() != idx {
            stops.push(idx);
        }
        prev = t;
    }
    let mut chambers = vec![c0];
    let mut types = Vec::new();
    for pair in stops.windows(2) {
        let g = win.minimal_gallery(pair[0], pair[1])?;
        chambers.extend_from_slice(&g.chambers[1..]);
        types.extend(g.types);
    }
    if !win.is_tense(&chambers) {
        return Err(ChambrierError::Invariant("gallery along a ray crosses a wall twice".into()));
    }
    for &c in &chambers {
        if !closure_meets_ray(win, c, s, u) {
            return Err(ChambrierError::Invariant(format!("alcove {c} of the gallery misses the ray")));
        }
    }
    Ok(GalleryWord { chambers, types })
}

/// Whether the closure of an alcove meets the ray `s + t u`, `t >= 0`.
pub fn closure_meets_ray(win: &AlcoveWindow, c: usize, s: &[Q], u: &[Q]) -> bool {
    let mut sys = System::new(1);
    sys.push(Row::new(vec![q(1)], q(0), Rel::Ge));
    for (r, &k) in win.roots().iter().zip(&win.alcoves[c].floors) {
        let a = r.eval(s);
        let du = r.eval(u);
        sys.push(Row::new(vec![du.clone()], a.clone() - q(k), Rel::Ge));
        sys.push(Row::new(vec![-du], q(k + 1) - a, Rel::Ge));
    }
    sys.is_feasible()
}
