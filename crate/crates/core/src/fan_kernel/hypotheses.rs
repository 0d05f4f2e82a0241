use serde::Serialize;
use std::collections::HashSet;

use super::ambient::Ambient;
use super::arrangement::{arrangement_faces, SignFace};
use super::cone::Cone;
use super::fan::Fan;
use crate::exact_geometry::linalg::RatVec;
use crate::polyhedra::System;

/// Counterexample attached to a failing hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A stratum of the common refinement covered by `covering` cones instead of one.
    SignFace { face: SignFace, covering: Vec<String> },
    /// The origin is not a cone; `cone` is the cone containing it, if any.
    Origin { cone: Option<String> },
    Cone { cone: String, reason: String },
    ConePair { cone: String, other: String, reason: String },
    GroupImage { cone: String, element: String, image: String },
}

/// Status of one hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisStatus {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
}

/// Status of (H1)-(H7).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub statuses: Vec<HypothesisStatus>,
}

impl HypothesisReport {
    pub fn get(&self, name: &str) -> &HypothesisStatus {
        self.statuses.iter().find(|s| s.name == name).expect("known hypothesis")
    }
    pub fn passes(&self, name: &str) -> bool {
        self.get(name).pass
    }
    pub fn all_pass(&self) -> bool {
        self.statuses.iter().all(|s| s.pass)
    }
    /// All except the listed hypotheses pass.
    pub fn all_pass_except(&self, skip: &[&str]) -> bool {
        self.statuses.iter().all(|s| s.pass || skip.contains(&s.name.as_str()))
    }
    pub fn first_failure(&self) -> Option<&HypothesisStatus> {
        self.statuses.iter().find(|s| !s.pass)
    }
}

fn status(name: &str, witness: Option<Witness>) -> HypothesisStatus {
    HypothesisStatus { name: name.to_string(), pass: witness.is_none(), witness }
}

/// H1: every stratum of the common refinement lies in exactly one cone.
pub fn check_h1(fan: &Fan) -> Option<Witness> {
    for face in arrangement_faces(fan.dim, &fan.source_forms) {
        let covering = fan.cones_containing(&face.witness.0);
        if covering.len() != 1 {
            let covering = covering.iter().map(|&i| fan.cones[i].id.clone()).collect();
            return Some(Witness::SignFace { face, covering });
        }
    }
    None
}

/// H3: the origin is a cone.
pub fn check_h3(fan: &Fan) -> Option<Witness> {
    if fan.origin_cone().is_some() {
        return None;
    }
    let zero = RatVec::zeros(fan.dim);
    let cone = fan.cones_containing(&zero.0).first().map(|&i| fan.cones[i].id.clone());
    Some(Witness::Origin { cone })
}

/// H4: each cone is a feasible canonical system.
pub fn check_h4(fan: &Fan) -> Option<Witness> {
    for c in &fan.cones {
        match Cone::canonicalize(c.dim, &c.eq_forms(), &c.gt_forms()) {
            Ok(d) if d == *c => {}
            Ok(_) => {
                return Some(Witness::Cone { cone: c.id.clone(), reason: "not in canonical form".into() })
            }
            Err(_) => return Some(Witness::Cone { cone: c.id.clone(), reason: "infeasible".into() }),
        }
    }
    None
}

/// H5: a cone meeting the closure of `g` lies in its boundary.
pub fn check_h5(fan: &Fan) -> Option<Witness> {
    for g in &fan.cones {
        for h in &fan.cones {
            if h.id == g.id || !h.meets_closure_of(g) {
                continue;
            }
            if !h.subset_of_closure(g) || h.meets(g) {
                return Some(Witness::ConePair {
                    cone: g.id.clone(),
                    other: h.id.clone(),
                    reason: "meets the closure without lying in the boundary".into(),
                });
            }
        }
    }
    None
}

/// H6: for every face `f` of `g`, the closure of `f` equals `Vect(f)` intersected with the closure of `g`.
pub fn check_h6(fan: &Fan) -> Option<Witness> {
    for (gi, g) in fan.cones.iter().enumerate() {
        for &fi in &fan.faces[gi] {
            let f = &fan.cones[fi];
            for c in f.gt_forms() {
                let mut s = System::new(fan.dim);
                for e in f.eq_forms() {
                    s.eq(&e);
                }
                g.push_closed(&mut s);
                s.lt(&c);
                if s.is_feasible() {
                    return Some(Witness::ConePair {
                        cone: g.id.clone(),
                        other: f.id.clone(),
                        reason: "Vect(face) meets the closure outside the closure of the face".into(),
                    });
                }
            }
        }
    }
    None
}

/// H7: the fan is stable under the group.
pub fn check_h7(fan: &Fan, amb: &Ambient) -> Option<Witness> {
    let ids: HashSet<&str> = fan.cones.iter().map(|c| c.id.as_str()).collect();
    for c in &fan.cones {
        for w in &amb.group {
            let image = match c.transform_by_inverse(&w.inverse) {
                Ok(img) => img.id,
                Err(_) => "empty".to_string(),
            };
            if !ids.contains(image.as_str()) {
                return Some(Witness::GroupImage { cone: c.id.clone(), element: w.name.clone(), image });
            }
        }
    }
    None
}

/// Runs (H1)-(H7) against the given ambient.
pub fn check_hypotheses(fan: &Fan, amb: &Ambient) -> HypothesisReport {
    let statuses = vec![
        status("H1", check_h1(fan)),
        status("H2", None),
        status("H3", check_h3(fan)),
        status("H4", check_h4(fan)),
        status("H5", check_h5(fan)),
        status("H6", check_h6(fan)),
        status("H7", check_h7(fan, amb)),
    ];
    HypothesisReport { statuses }
}
