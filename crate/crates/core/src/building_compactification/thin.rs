//! Thin models: a single apartment with a fan. Building cones are the affine cones
//! themselves, and the bordered cones of a cone correspond to the facade fan.

use serde::Serialize;

use crate::apartment_compactification::{AffineCone, ApartmentModel, ApartmentPoint};
use crate::core_facade::{core, facade, facade_fan};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{LinForm, Mat, Q};
use crate::exact_geometry::{q, Sign};
use crate::fan_kernel::{Ambient, Fan};
use crate::polyhedra::{QuadProgram, Rel, Row, System};

fn index(model: &ApartmentModel, id: &str) -> Result<usize> {
    model.fan.index_of(id).ok_or_else(|| ChambrierError::Validation(format!("unknown cone id {id}")))
}

/// Equivalence of affine cones: same direction and a common point.
pub fn cone_equiv(model: &ApartmentModel, a: &AffineCone, b: &AffineCone) -> Result<bool> {
    index(model, &a.direction)?;
    index(model, &b.direction)?;
    model.cones_intersect(a, b)
}

/// Open star of the Weyl facet enclosing the core of a cone, as forms positive on it.
pub fn core_star(model: &ApartmentModel, direction: &str) -> Result<Vec<LinForm>> {
    let c = core(&model.fan, &model.amb, index(model, direction)?)?;
    Ok(model
        .amb
        .walls
        .iter()
        .zip(&c.enclosing_weyl_facet)
        .filter_map(|(w, s)| match s {
            Sign::Pos => Some(w.clone()),
            Sign::Neg => Some(w.neg()),
            Sign::Zero => None,
        })
        .collect())
}

/// Whether the point has a representative in `(base + U) ∩ (s + star)`, where `s` is the
/// vertex of `base`, `U` the closed ball of radius `r` and `star` the open star of the
/// Weyl facet enclosing the core of the base direction.
///
/// With `p = [y + h]` and `base = s + g`: a representative `z' + h`, `z' in y + Vect(h)`,
/// lies in `s + g + U` iff `h` is in the closure of `g` and `z'` is within `r` of `s + g`.
/// It lies in `s + star` iff every form `t` of the star is nonnegative on `h` and on
/// `z' - s`, strictly on `z' - s` when `t` vanishes on `h`. What remains is the quadratic
/// program `min |z' - z|^2` over `z' in y + Vect(h)` meeting these rows and `z in s + g`.
pub fn neighborhood_contains(model: &ApartmentModel, base: &AffineCone, r: &Q, p: &ApartmentPoint) -> Result<bool> {
    if r <= &q(0) {
        return Err(ChambrierError::Validation("neighborhood radius must be positive".into()));
    }
    let n = model.dim();
    let hi = index(model, &p.direction)?;
    let gi = index(model, &base.direction)?;
    let (h, g) = (&model.fan.cones[hi], &model.fan.cones[gi]);
    if hi != gi && !h.subset_of_closure(g) {
        return Ok(false);
    }
    let y = model.representative(p)?.vertex.0;
    let s = &base.vertex.0;
    let pad = |c: &[Q], first: bool| {
        let mut v = vec![q(0); 2 * n];
        let off = if first { 0 } else { n };
        v[off..off + n].clone_from_slice(c);
        v
    };
    let mut sys = System::new(2 * n);
    for e in h.eq_forms() {
        sys.push(Row::new(pad(&e.coeffs, true), -e.eval(&y), Rel::Eq));
    }
    for e in g.eq_forms() {
        sys.push(Row::new(pad(&e.coeffs, false), -e.eval(s), Rel::Eq));
    }
    for f in g.gt_forms() {
        sys.push(Row::new(pad(&f.coeffs, false), -f.eval(s), Rel::Gt));
    }
    for t in core_star(model, &base.direction)? {
        let mut neg = System::new(n);
        h.push_open(&mut neg);
        neg.lt(&t);
        if neg.is_feasible() {
            return Ok(false);
        }
        let rel = if h.form_vanishes(&t) { Rel::Gt } else { Rel::Ge };
        sys.push(Row::new(pad(&t.coeffs, true), -t.eval(s), rel));
    }
    let mut lin = Mat::zeros(n, 2 * n);
    for i in 0..n {
        lin.set(i, i, q(1));
        lin.set(i, n + i, q(-1));
    }
    let qp = QuadProgram { system: sys, lin, target: vec![q(0); n], gram: model.amb.gram.clone() };
    Ok(qp.reaches(&(r * r)))
}

/// Cones bordered by a cone, paired with the cones of its facade fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryFacadeSet {
    pub base: String,
    /// Cones whose closure contains the base, the base included.
    pub bordered: Vec<String>,
    /// `(g, chi(g))` with `chi(g)` the facade-fan cone projected from `g`.
    pub chi: Vec<(String, String)>,
    pub facade_dim: usize,
}

impl BoundaryFacadeSet {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "chambrier/1",
            "base": self.base,
            "bordered": self.bordered,
            "chi": self.chi.iter().map(|(g, c)| serde_json::json!({"cone": g, "facade_cone": c})).collect::<Vec<_>>(),
            "facade_dim": self.facade_dim,
        })
    }
}

/// Bordered cones of `fan.cones[idx]` with the projection onto its facade fan, after
/// checking that the projection is a bijection preserving the face order, sending the base
/// to the origin cone, whose own facade is the whole facade with the same group.
pub fn bordered_set(fan: &Fan, amb: &Ambient, idx: usize) -> Result<BoundaryFacadeSet> {
    let base = &fan.cones[idx];
    let bordered: Vec<usize> = (0..fan.len()).filter(|&g| g == idx || base.meets_closure_of(&fan.cones[g])).collect();
    let ff = facade_fan(fan, amb, idx)?;
    let mut from: Vec<usize> = ff.preimage.clone();
    from.sort_unstable();
    if from != bordered {
        return Err(ChambrierError::Invariant(format!("bordered cones of {} differ from the facade fan preimages", base.id)));
    }
    let chi_of = |g: usize| ff.preimage.iter().position(|&p| p == g).expect("bordered cone has an image");
    for &g in &bordered {
        for &h in &bordered {
            let below = h == g || fan.cones[h].subset_of_closure(&fan.cones[g]);
            let (ch, cg) = (&ff.fan.cones[chi_of(h)], &ff.fan.cones[chi_of(g)]);
            let below_img = chi_of(h) == chi_of(g) || ch.subset_of_closure(cg);
            if below != below_img {
                return Err(ChambrierError::Invariant(format!("face order of {} and {} is not preserved", fan.cones[h].id, fan.cones[g].id)));
            }
        }
    }
    let origin = chi_of(idx);
    if ff.fan.cones[origin].span_dim != 0 {
        return Err(ChambrierError::Invariant(format!("{} does not project to the origin", base.id)));
    }
    let stratum = facade(&ff.fan, &ff.facade.ambient(), origin)?;
    if stratum.dim != ff.facade.dim || stratum.group.len() != ff.facade.group.len() {
        return Err(ChambrierError::Invariant(format!("the stratum of {} is not mapped onto itself", base.id)));
    }
    Ok(BoundaryFacadeSet {
        base: base.id.clone(),
        bordered: bordered.iter().map(|&g| fan.cones[g].id.clone()).collect(),
        chi: bordered.iter().map(|&g| (fan.cones[g].id.clone(), ff.fan.cones[chi_of(g)].id.clone())).collect(),
        facade_dim: ff.facade.dim,
    })
}
