//! Points of the compactified apartment: classes of affine cones with directions in a fan,
//! stored as a direction cone and facade coordinates.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::core_facade::{facade, Facade};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{add, is_zero_vec, scale, sub, Mat, RatVec, Q};
use crate::exact_geometry::q;
use crate::fan_kernel::hypotheses::check_h3;
use crate::fan_kernel::{Ambient, Fan};
use crate::polyhedra::{QuadProgram, Rel, Row, System};

/// Affine cone `vertex + direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCone {
    pub vertex: RatVec,
    pub direction: String,
}

/// Class of an affine cone: its direction and the facade coordinates of its vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApartmentPoint {
    #[serde(rename = "direction_cone_id")]
    pub direction: String,
    pub coords: RatVec,
}

/// Closed gram-ball neighborhood `base + U` with `U` of squared radius `radius_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub base: AffineCone,
    pub radius_sq: Q,
}

/// Affine Weyl element `x -> w x + translation`, with `w` an element of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylElement {
    pub linear: usize,
    pub translation: Vec<Q>,
}

/// A fan on the vectorial apartment together with the facades of its cones.
pub struct ApartmentModel {
    pub fan: Fan,
    pub amb: Ambient,
    facades: Vec<OnceLock<Facade>>,
}

impl ApartmentModel {
    /// Refuses fans whose cones may contain lines, since vertices are then not unique.
    pub fn new(fan: Fan, amb: Ambient) -> Result<ApartmentModel> {
        if let Some(w) = check_h3(&fan) {
            return Err(ChambrierError::hypothesis("H3", serde_json::to_string(&w).unwrap_or_default()));
        }
        let facades = (0..fan.len()).map(|_| OnceLock::new()).collect();
        Ok(ApartmentModel { fan, amb, facades })
    }

    pub fn dim(&self) -> usize {
        self.fan.dim
    }

    fn index(&self, id: &str) -> Result<usize> {
        self.fan
            .index_of(id)
            .ok_or_else(|| ChambrierError::Validation(format!("unknown cone id {id}")))
    }

    /// Facade of a cone, computed on first use.
    pub fn facade_of(&self, id: &str) -> Result<&Facade> {
        let i = self.index(id)?;
        if let Some(f) = self.facades[i].get() {
            return Ok(f);
        }
        let f = facade(&self.fan, &self.amb, i)?;
        Ok(self.facades[i].get_or_init(|| f))
    }

    fn check_dim(&self, x: &[Q]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(ChambrierError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// Class of an affine cone.
    pub fn classify(&self, f: &AffineCone) -> Result<ApartmentPoint> {
        self.check_dim(&f.vertex.0)?;
        let fac = self.facade_of(&f.direction)?;
        Ok(ApartmentPoint { direction: f.direction.clone(), coords: RatVec(fac.project(&f.vertex.0)) })
    }

    /// Interior point `x`, the class of `x + {0}`.
    pub fn interior(&self, x: &[Q]) -> Result<ApartmentPoint> {
        self.check_dim(x)?;
        let o = self.fan.origin_cone().expect("origin cone exists under H3");
        self.classify(&AffineCone { vertex: RatVec(x.to_vec()), direction: self.fan.cones[o].id.clone() })
    }

    /// A representative affine cone of a point, with vertex in the complement of its span.
    pub fn representative(&self, p: &ApartmentPoint) -> Result<AffineCone> {
        let fac = self.facade_of(&p.direction)?;
        Ok(AffineCone { vertex: RatVec(fac.lift(&p.coords.0)), direction: p.direction.clone() })
    }

    /// Limit of `x + n v` as `n` grows: the class of `x + g` for the cone `g` containing `v`.
    pub fn ray_limit(&self, x: &[Q], v: &[Q]) -> Result<ApartmentPoint> {
        self.check_dim(x)?;
        self.check_dim(v)?;
        if is_zero_vec(v) {
            return Err(ChambrierError::ZeroDirection);
        }
        let g = self.fan.cone_containing(v)?;
        self.classify(&AffineCone { vertex: RatVec(x.to_vec()), direction: self.fan.cones[g].id.clone() })
    }

    /// Whether two affine cones with the same direction intersect.
    pub fn cones_intersect(&self, a: &AffineCone, b: &AffineCone) -> Result<bool> {
        if a.direction != b.direction {
            return Ok(false);
        }
        let cone = &self.fan.cones[self.index(&a.direction)?];
        let mut s = System::new(self.dim());
        for v in [&a.vertex, &b.vertex] {
            for f in cone.eq_forms() {
                s.push(Row::new(f.coeffs.clone(), -f.eval(&v.0), Rel::Eq));
            }
            for f in cone.gt_forms() {
                s.push(Row::new(f.coeffs.clone(), -f.eval(&v.0), Rel::Gt));
            }
        }
        Ok(s.is_feasible())
    }

    /// Quadratic program for `min |q(z - y)|^2` over `z` in the affine cone `g`, where `q` is
    /// the orthogonal projection onto the complement of `Vect(f)`.
    fn distance_program(&self, y: &[Q], f: &str, g: &AffineCone) -> Result<QuadProgram> {
        let fac = self.facade_of(f)?;
        let gc = &self.fan.cones[self.index(&g.direction)?];
        let mut s = System::new(self.dim());
        for c in gc.eq_forms() {
            s.push(Row::new(c.coeffs.clone(), -c.eval(&g.vertex.0), Rel::Eq));
        }
        for c in gc.gt_forms() {
            s.push(Row::new(c.coeffs.clone(), -c.eval(&g.vertex.0), Rel::Gt));
        }
        Ok(QuadProgram { system: s, lin: fac.projection.clone(), target: fac.project(y), gram: fac.gram.clone() })
    }

    /// Whether the point has a representative inside `base + U`.
    ///
    /// With `p = [y + f]` and `base = s + g`, a representative `z' + f` with
    /// `z' in y + Vect(f)` lies in `s + g + U` iff `f` is in the closure of `g` (the
    /// recession cone of `s + g + U`) and some `z in s + g` has `|q(z - y)| <= r`:
    /// given such `z`, the point `z' = z - q(z - y)` lies in `y + Vect(f)` within `r` of
    /// `z`, and `z' + f` lies in `z + f + U`, inside `s + g + U`. The minimum is computed exactly.
    pub fn in_neighborhood(&self, p: &ApartmentPoint, n: &Neighborhood) -> Result<bool> {
        let fi = self.index(&p.direction)?;
        let gi = self.index(&n.base.direction)?;
        if fi != gi && !self.fan.cones[fi].subset_of_closure(&self.fan.cones[gi]) {
            return Ok(false);
        }
        let y = self.representative(p)?.vertex;
        let qp = self.distance_program(&y.0, &p.direction, &n.base)?;
        Ok(qp.reaches(&n.radius_sq))
    }

    /// Squared distance from `y + Vect(f)` to the affine cone `g`, as an infimum.
    pub fn quotient_distance_sq(&self, p: &ApartmentPoint, g: &AffineCone) -> Result<Q> {
        let y = self.representative(p)?.vertex;
        let qp = self.distance_program(&y.0, &p.direction, g)?;
        Ok(qp.solve().map(|s| s.min).expect("affine cones are nonempty"))
    }

    /// Infimum of the squared distance between two affine cones.
    pub fn cone_distance_sq(&self, a: &AffineCone, b: &AffineCone) -> Result<Q> {
        let n = self.dim();
        let ca = &self.fan.cones[self.index(&a.direction)?];
        let cb = &self.fan.cones[self.index(&b.direction)?];
        // Variables (u, w) with u in ca, w in cb; minimize |a + u - b - w|^2.
        let mut s = System::new(2 * n);
        let pad = |c: &[Q], first: bool| {
            let mut v = vec![q(0); 2 * n];
            let off = if first { 0 } else { n };
            v[off..off + n].clone_from_slice(c);
            v
        };
        for (cone, first) in [(ca, true), (cb, false)] {
            for c in cone.eq_forms() {
                s.push(Row::new(pad(&c.coeffs, first), q(0), Rel::Eq));
            }
            for c in cone.gt_forms() {
                s.push(Row::new(pad(&c.coeffs, first), q(0), Rel::Gt));
            }
        }
        let mut lin = Mat::zeros(n, 2 * n);
        for i in 0..n {
            lin.set(i, i, q(1));
            lin.set(i, n + i, q(-1));
        }
        let qp = QuadProgram { system: s, lin, target: sub(&b.vertex.0, &a.vertex.0), gram: self.amb.gram.clone() };
        Ok(qp.solve().map(|s| s.min).expect("cones are nonempty"))
    }

    /// Neighborhoods of two distinct points that no point belongs to simultaneously.
    ///
    /// Same direction: radius below half the quotient distance. Different directions
    /// `f1 != f2` with witnesses `u1, u2`: the cones `y_i + l u_i + f_i` drift apart
    /// linearly in `l`, since `u1 - u2` is outside `cl(f2) - cl(f1)` (otherwise
    /// `f1` and `f2` would meet). Doubling `l` until their distance exceeds `2r` does it.
    pub fn separate(&self, p1: &ApartmentPoint, p2: &ApartmentPoint) -> Result<(Neighborhood, Neighborhood)> {
        if p1 == p2 {
            return Err(ChambrierError::Validation("points coincide".into()));
        }
        let a1 = self.representative(p1)?;
        let a2 = self.representative(p2)?;
        if p1.direction == p2.direction {
            let fac = self.facade_of(&p1.direction)?;
            let d = sub(&p1.coords.0, &p2.coords.0);
            let dist = crate::exact_geometry::linalg::gram_dot(&fac.gram, &d, &d);
            let r = dist / q(5);
            return Ok((
                Neighborhood { base: a1, radius_sq: r.clone() },
                Neighborhood { base: a2, radius_sq: r },
            ));
        }
        let u1 = self.fan.cones[self.index(&p1.direction)?].witness();
        let u2 = self.fan.cones[self.index(&p2.direction)?].witness();
        let r = q(1);
        let mut lambda = q(1);
        for _ in 0..64 {
            let b1 = AffineCone { vertex: RatVec(add(&a1.vertex.0, &scale(&u1, &lambda))), direction: p1.direction.clone() };
            let b2 = AffineCone { vertex: RatVec(add(&a2.vertex.0, &scale(&u2, &lambda))), direction: p2.direction.clone() };
            if self.cone_distance_sq(&b1, &b2)? > q(4) * &r {
                return Ok((
                    Neighborhood { base: b1, radius_sq: r.clone() },
                    Neighborhood { base: b2, radius_sq: r },
                ));
            }
            lambda *= q(2);
        }
        Err(ChambrierError::Invariant("separation did not converge".into()))
    }

    pub fn apply_affine(&self, w: &AffineWeylElement, x: &[Q]) -> Vec<Q> {
        add(&self.amb.group[w.linear].matrix.apply(x), &w.translation)
    }

    /// `[y + f] -> [w y + t + w f]`.
    pub fn extended_action(&self, w: &AffineWeylElement, p: &ApartmentPoint) -> Result<ApartmentPoint> {
        let rep = self.representative(p)?;
        let cone = &self.fan.cones[self.index(&p.direction)?];
        let image = cone.transform_by_inverse(&self.amb.group[w.linear].inverse)?;
        if self.fan.index_of(&image.id).is_none() {
            return Err(ChambrierError::hypothesis("H7", format!("image of {} is not a cone", cone.id)));
        }
        self.classify(&AffineCone { vertex: RatVec(self.apply_affine(w, &rep.vertex.0)), direction: image.id })
    }
}
