use num_traits::Zero;
use serde_json::json;
use std::collections::{BTreeSet, HashSet};

use super::core::{core, pointwise_fixator};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{fmt_q, LinForm, Mat, Q};
use crate::exact_geometry::root_system::reflection_matrix;
use crate::exact_geometry::weyl::generate_group;
use crate::exact_geometry::q;
use crate::fan_kernel::cone::{to_i64, Cone};
use crate::fan_kernel::{Ambient, Fan, GroupElement};

/// Quotient of the ambient space by `Vect(f)`, realized on the gram-orthogonal complement.
#[derive(Clone, Debug)]
pub struct Facade {
    pub base_cone_id: String,
    /// Dimension of the quotient.
    pub dim: usize,
    /// Columns span `Vect(f)`.
    pub span_basis: Mat,
    /// Columns span the orthogonal complement of `Vect(f)`.
    pub quotient_basis: Mat,
    /// Coordinates along `quotient_basis` of the projection parallel to `Vect(f)`.
    pub projection: Mat,
    pub gram: Mat,
    /// Restrictions of the walls containing the cone, canonical and distinct.
    pub walls: Vec<LinForm>,
    /// Restrictions of the stabilizer to the quotient, identity first.
    pub group: Vec<GroupElement>,
    /// Simple reflections of the stabilizer acting on `Vect(f)` and fixing its complement.
    pub i1: Vec<LinForm>,
    /// Simple reflections of the stabilizer fixing `Vect(f)` pointwise.
    pub i2: Vec<LinForm>,
    pub stabilizer_order: usize,
    pub label: String,
}

impl Facade {
    /// The quotient with its group and walls, usable with the fan kernel.
    pub fn ambient(&self) -> Ambient {
        Ambient {
            dim: self.dim,
            gram: self.gram.clone(),
            group: self.group.clone(),
            walls: self.walls.clone(),
            label: self.label.clone(),
        }
    }

    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        self.projection.apply(x)
    }

    /// Point of the orthogonal complement with the given quotient coordinates.
    pub fn lift(&self, y: &[Q]) -> Vec<Q> {
        self.quotient_basis.apply(y)
    }

    /// Form on the quotient obtained from an ambient form vanishing on `Vect(f)`.
    pub fn restrict_form(&self, f: &LinForm) -> LinForm {
        LinForm::new(self.quotient_basis.left_apply(&f.coeffs))
    }

    /// Ambient form `c o p` pulled back from a form on the quotient.
    pub fn pull_back_form(&self, c: &LinForm) -> LinForm {
        LinForm::new(self.projection.left_apply(&c.coeffs))
    }

    /// Affine walls `{c = k}` of the quotient with `|k| <= bound`, restricted from the
    /// affine walls of the ambient apartment whose direction contains the cone.
    pub fn affine_walls(&self, bound: i64) -> Vec<(LinForm, Q)> {
        let mut out = Vec::new();
        for w in &self.walls {
            for k in -bound..=bound {
                out.push((w.clone(), q(k)));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ints = |v: &[LinForm]| to_i64(&v.iter().map(|f| f.primitive_oriented()).collect::<Vec<_>>());
        let mat = |m: &Mat| -> Vec<Vec<String>> { m.row_vecs().iter().map(|r| r.iter().map(fmt_q).collect()).collect() };
        json!({
            "base_cone_id": self.base_cone_id,
            "dim": self.dim,
            "quotient_basis": mat(&self.quotient_basis.transpose()),
            "projection": mat(&self.projection),
            "walls": ints(&self.walls),
            "group": self.group.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            "I1": ints(&self.i1),
            "I2": ints(&self.i2),
            "stabilizer_order": self.stabilizer_order,
        })
    }
}

/// A point where none of the forms vanish, on the moment curve.
fn generic_point(dim: usize, forms: &[LinForm]) -> Vec<Q> {
    (2i64..)
        .map(|t| (0..dim).map(|i| Q::from_integer(t.into()).pow(i as i32)).collect::<Vec<Q>>())
        .find(|p| forms.iter().all(|f| !f.eval(p).is_zero()))
        .expect("finitely many forms vanish on finitely many points of the curve")
}

/// Simple roots of the reflection subgroup generated by the given walls.
pub fn simple_system(dim: usize, walls: &[LinForm]) -> Vec<LinForm> {
    if walls.is_empty() {
        return Vec::new();
    }
    let p = generic_point(dim, walls);
    let oriented: Vec<LinForm> = walls
        .iter()
        .map(|w| if w.eval(&p) > Q::zero() { w.clone() } else { w.neg() })
        .collect();
    Cone::canonicalize(dim, &[], &oriented).expect("a generic point witnesses the chamber").gt_forms()
}

/// Facade of the cone `fan.cones[idx]`.
pub fn facade(fan: &Fan, amb: &Ambient, idx: usize) -> Result<Facade> {
    let cone = &fan.cones[idx];
    let c = core(fan, amb, idx)?;
    let n = cone.dim;
    let bf_cols = cone.span_basis();
    let k = bf_cols.len();
    let constraints: Vec<Vec<Q>> = bf_cols.iter().map(|b| amb.gram.left_apply(b)).collect();
    let bp_cols = Mat::from_rows(&constraints, n).nullspace();
    let m = bp_cols.len();
    let span_basis = Mat::from_cols(&bf_cols, n);
    let quotient_basis = Mat::from_cols(&bp_cols, n);
    let mut all = bf_cols.clone();
    all.extend(bp_cols.iter().cloned());
    let inv = Mat::from_cols(&all, n).inverse().expect("complementary subspaces");
    let proj_rows: Vec<Vec<Q>> = (k..n).map(|i| inv.row(i)).collect();
    let projection = Mat::from_rows(&proj_rows, n);
    let gram = quotient_basis.transpose().mul(&amb.gram).mul(&quotient_basis);

    let mut wall_set: BTreeSet<Vec<num_bigint::BigInt>> = BTreeSet::new();
    for w in &amb.walls {
        if cone.form_vanishes(w) {
            wall_set.insert(LinForm::new(quotient_basis.left_apply(&w.coeffs)).canonical());
        }
    }
    let walls: Vec<LinForm> = wall_set.iter().map(|r| LinForm::from_ints(r)).collect();

    let mut seen: HashSet<Mat> = HashSet::new();
    let mut group = Vec::new();
    for &s in &c.stabilizer {
        let w = &amb.group[s];
        let mat = projection.mul(&w.matrix).mul(&quotient_basis);
        if seen.insert(mat.clone()) {
            let inverse = projection.mul(&w.inverse).mul(&quotient_basis);
            group.push(GroupElement { matrix: mat, inverse, name: w.name.clone() });
        }
    }

    let containing: Vec<LinForm> = amb.walls.iter().filter(|w| c.core_cone.form_vanishes(w)).cloned().collect();
    let mut i1 = Vec::new();
    let mut i2 = Vec::new();
    for beta in simple_system(n, &containing) {
        let s = reflection_matrix(&amb.gram, &beta);
        let fixes_complement = bp_cols.iter().all(|b| s.apply(b) == *b);
        let fixes_span = bf_cols.iter().all(|b| s.apply(b) == *b);
        match (fixes_complement, fixes_span) {
            (true, false) => i1.push(beta),
            (false, true) => i2.push(beta),
            _ => {
                return Err(ChambrierError::Invariant(format!(
                    "reflection in a wall containing the core of {} splits neither way",
                    cone.id
                )))
            }
        }
    }

    let fixator = pointwise_fixator(amb, &bf_cols);
    if group.len() != fixator.len() {
        return Err(ChambrierError::Invariant(format!(
            "facade group of {} has order {} but the pointwise fixator has order {}",
            cone.id,
            group.len(),
            fixator.len()
        )));
    }
    let i1_refl: Vec<Mat> = i1.iter().map(|b| reflection_matrix(&amb.gram, b)).collect();
    let i2_refl: Vec<Mat> = i2.iter().map(|b| reflection_matrix(&amb.gram, b)).collect();
    let w_i1 = generate_group(n, &i1_refl).len();
    if group.len() * w_i1 != c.stabilizer.len() {
        return Err(ChambrierError::Invariant(format!(
            "stabilizer of {} does not split: {} x {} != {}",
            cone.id,
            group.len(),
            w_i1,
            c.stabilizer.len()
        )));
    }
    for a in &i1_refl {
        for b in &i2_refl {
            if a.mul(b) != b.mul(a) {
                return Err(ChambrierError::Invariant(format!("I1 and I2 do not commute for {}", cone.id)));
            }
        }
    }

    Ok(Facade {
        base_cone_id: cone.id.clone(),
        dim: m,
        span_basis,
        quotient_basis,
        projection,
        gram,
        walls,
        group,
        i1,
        i2,
        stabilizer_order: c.stabilizer.len(),
        label: format!("{}/{}", amb.label, cone.id),
    })
}

/// Whether the fixed space of the I2 reflections is exactly `Vect(f)`.
pub fn is_essential(facade: &Facade) -> bool {
    if facade.i2.is_empty() {
        return facade.dim == 0;
    }
    let rows: Vec<Vec<Q>> = facade.i2.iter().map(|f| f.coeffs.clone()).collect();
    let n = rows[0].len();
    Mat::from_rows(&rows, n).rank() == facade.dim
}

/// Fan induced on the facade of a cone, with the cones it comes from.
#[derive(Clone, Debug)]
pub struct FacadeFan {
    pub facade: Facade,
    pub fan: Fan,
    /// `preimage[i]` is the index in the source fan of the cone projecting to `fan.cones[i]`.
    pub preimage: Vec<usize>,
}

/// Projection of a cone bordered by `f`, read off its inequality description: the
/// equalities of `g` and the strict forms of `g` vanishing on `f`, restricted to the quotient.
pub fn project_bordered(facade: &Facade, base: &Cone, g: &Cone) -> Result<Cone> {
    let eq: Vec<LinForm> = g.eq_forms().iter().map(|f| facade.restrict_form(f)).collect();
    let gt: Vec<LinForm> = g
        .gt_forms()
        .iter()
        .filter(|f| base.form_vanishes(f))
        .map(|f| facade.restrict_form(f))
        .collect();
    Cone::canonicalize(facade.dim, &eq, &gt)
}

/// Facade fan of `fan.cones[idx]`: projections of the cones whose closure contains it.
pub fn facade_fan(fan: &Fan, amb: &Ambient, idx: usize) -> Result<FacadeFan> {
    let fac = facade(fan, amb, idx)?;
    let base = &fan.cones[idx];
    let mut images: Vec<(Cone, usize)> = Vec::new();
    for (gi, g) in fan.cones.iter().enumerate() {
        if gi == idx || base.subset_of_closure(g) {
            let p = project_bordered(&fac, base, g)?;
            if let Some((_, other)) = images.iter().find(|(c, _)| c.id == p.id) {
                return Err(ChambrierError::Invariant(format!(
                    "cones {} and {} project to the same facade cone",
                    fan.cones[*other].id, g.id
                )));
            }
            images.push((p, gi));
        }
    }
    let out = Fan::new(&fac.label, &fan.j, fac.dim, images.iter().map(|(c, _)| c.clone()).collect());
    let preimage = out
        .cones
        .iter()
        .map(|c| images.iter().find(|(p, _)| p.id == c.id).map(|(_, gi)| *gi).unwrap())
        .collect();
    Ok(FacadeFan { facade: fac, fan: out, preimage })
}
