use serde_json::json;
use std::collections::HashSet;

use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{LinForm, Mat};
use crate::exact_geometry::root_system::{reflection_matrix, Sign};
use crate::exact_geometry::weyl::generate_group;
use crate::fan_kernel::cone::{to_i64, Cone};
use crate::fan_kernel::{Ambient, Fan};
use crate::polyhedra::System;

/// Core of a cone: the fixed points of its stabilizer inside it.
#[derive(Clone, Debug)]
pub struct Core {
    pub cone_id: String,
    pub core_cone: Cone,
    /// Indices into the ambient group of the elements stabilizing the cone.
    pub stabilizer: Vec<usize>,
    /// Walls meeting the cone; their reflections generate the stabilizer.
    pub stabilizer_gens: Vec<LinForm>,
    /// Signs of the ambient walls on the core.
    pub enclosing_weyl_facet: Vec<Sign>,
}

impl Core {
    pub fn to_json(&self, amb: &Ambient) -> serde_json::Value {
        let gens: Vec<Vec<num_bigint::BigInt>> = self.stabilizer_gens.iter().map(|f| f.canonical()).collect();
        json!({
            "cone_id": self.cone_id,
            "core_id": self.core_cone.id,
            "eq": self.core_cone.eq_ints_i64(),
            "gt": self.core_cone.gt_ints_i64(),
            "span_dim": self.core_cone.span_dim,
            "stabilizer": self.stabilizer.iter().map(|&i| amb.group[i].name.clone()).collect::<Vec<_>>(),
            "stabilizer_walls": to_i64(&gens),
            "enclosing_weyl_facet": self.enclosing_weyl_facet.iter().map(|s| s.symbol()).collect::<String>(),
        })
    }
}

/// Walls whose kernel meets the cone.
pub fn walls_meeting(cone: &Cone, amb: &Ambient) -> Vec<LinForm> {
    amb.walls
        .iter()
        .filter(|w| {
            let mut s = System::new(cone.dim);
            cone.push_open(&mut s);
            s.eq(w);
            s.is_feasible()
        })
        .cloned()
        .collect()
}

/// Elements of the group mapping the cone to itself, after checking that every image
/// is a cone of the fan.
pub fn stabilizer(fan: &Fan, amb: &Ambient, idx: usize) -> Result<Vec<usize>> {
    let cone = &fan.cones[idx];
    let mut stab = Vec::new();
    for (k, w) in amb.group.iter().enumerate() {
        let image = cone.transform_by_inverse(&w.inverse)?;
        if fan.index_of(&image.id).is_none() {
            let witness = json!({"cone": cone.id, "element": w.name, "image": image.id});
            return Err(ChambrierError::hypothesis("H7", witness.to_string()));
        }
        if image.id == cone.id {
            stab.push(k);
        }
    }
    Ok(stab)
}

fn matrix_set<'a>(it: impl Iterator<Item = &'a Mat>) -> HashSet<Mat> {
    it.cloned().collect()
}

/// Elements fixing every vector of `basis`.
pub fn pointwise_fixator(amb: &Ambient, basis: &[Vec<crate::exact_geometry::Q>]) -> Vec<usize> {
    (0..amb.group.len())
        .filter(|&k| basis.iter().all(|b| amb.group[k].matrix.apply(b) == *b))
        .collect()
}

/// Sign of each wall on a cone, verified constant across the cone.
pub fn wall_signs_on(cone: &Cone, walls: &[LinForm]) -> Result<Vec<Sign>> {
    let x = cone.witness();
    walls
        .iter()
        .map(|w| {
            let s = Sign::of(&w.eval(&x));
            let constant = match s {
                Sign::Zero => cone.form_vanishes(w),
                _ => {
                    let oriented = if s == Sign::Pos { w.clone() } else { w.neg() };
                    let mut sys = System::new(cone.dim);
                    cone.push_open(&mut sys);
                    sys.le(&oriented);
                    !sys.is_feasible()
                }
            };
            if constant {
                Ok(s)
            } else {
                Err(ChambrierError::Invariant(format!("wall changes sign on cone {}", cone.id)))
            }
        })
        .collect()
}

/// Core of the cone `fan.cones[idx]`, computed as the fixed points of the stabilizer and
/// as the intersection with the walls meeting the cone; the two must agree.
pub fn core(fan: &Fan, amb: &Ambient, idx: usize) -> Result<Core> {
    let cone = &fan.cones[idx];
    let stab = stabilizer(fan, amb, idx)?;
    let n = cone.dim;

    let mut eq_a = cone.eq_forms();
    for &k in &stab {
        let d = amb.group[k].matrix.sub(&Mat::identity(n));
        eq_a.extend(d.row_vecs().into_iter().map(LinForm::new).filter(|f| !f.is_zero()));
    }
    let by_fixed_points = Cone::canonicalize(n, &eq_a, &cone.gt_forms())?;

    let meeting = walls_meeting(cone, amb);
    let mut eq_b = cone.eq_forms();
    eq_b.extend(meeting.iter().cloned());
    let by_walls = Cone::canonicalize(n, &eq_b, &cone.gt_forms())?;

    if by_fixed_points.id != by_walls.id {
        return Err(ChambrierError::Invariant(format!(
            "core of {} differs between routes: {} vs {}",
            cone.id, by_fixed_points.id, by_walls.id
        )));
    }

    let enumerated = matrix_set(stab.iter().map(|&k| &amb.group[k].matrix));
    let refl: Vec<Mat> = meeting.iter().map(|w| reflection_matrix(&amb.gram, w)).collect();
    let generated: HashSet<Mat> = generate_group(n, &refl).into_iter().collect();
    let fixator = pointwise_fixator(amb, &by_walls.span_basis());
    let fixing = matrix_set(fixator.iter().map(|&k| &amb.group[k].matrix));
    if enumerated != generated || enumerated != fixing {
        return Err(ChambrierError::Invariant(format!(
            "stabilizer of {} disagrees: {} enumerated, {} generated, {} fixing the core",
            cone.id,
            enumerated.len(),
            generated.len(),
            fixing.len()
        )));
    }

    let enclosing_weyl_facet = wall_signs_on(&by_walls, &amb.walls)?;
    Ok(Core {
        cone_id: cone.id.clone(),
        core_cone: by_walls,
        stabilizer: stab,
        stabilizer_gens: meeting,
        enclosing_weyl_facet,
    })
}
