use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

use super::ambient::generator_name;
use super::arrangement::arrangement_faces;
use super::cone::Cone;
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{LinForm, Q};
use crate::exact_geometry::root_system::{RootSystem, Sign};

/// Finite set of cones together with its arrangement and face relation.
#[derive(Clone, Debug)]
pub struct Fan {
    pub label: String,
    pub j: Vec<usize>,
    pub dim: usize,
    pub cones: Vec<Cone>,
    /// Union of the canonical forms of all cones, sign-normalized.
    pub source_forms: Vec<LinForm>,
    /// `faces[g]` lists every other cone contained in the closure of cone `g`.
    pub faces: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl Fan {
    /// Builds a fan from cones; duplicates are merged and cones are sorted.
    pub fn new(label: &str, j: &[usize], dim: usize, cones: Vec<Cone>) -> Fan {
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        let cones: Vec<Cone> = set.into_iter().collect();
        let mut forms: BTreeSet<Vec<num_bigint::BigInt>> = BTreeSet::new();
        for c in &cones {
            for f in c.all_forms() {
                forms.insert(f.canonical());
            }
        }
        let source_forms: Vec<LinForm> = forms.iter().map(|r| LinForm::from_ints(r)).collect();
        let faces = cones
            .iter()
            .map(|g| {
                cones
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| h.id != g.id && h.span_dim <= g.span_dim && h.subset_of_closure(g))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let index = cones.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
        Fan { label: label.to_string(), j: j.to_vec(), dim, cones, source_forms, faces, index }
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn cone_by_id(&self, id: &str) -> Option<&Cone> {
        self.index_of(id).map(|i| &self.cones[i])
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Indices of the cones containing `x`.
    pub fn cones_containing(&self, x: &[Q]) -> Vec<usize> {
        self.cones
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the unique cone containing `x`.
    pub fn cone_containing(&self, x: &[Q]) -> Result<usize> {
        if x.len() != self.dim {
            return Err(ChambrierError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let found = self.cones_containing(x);
        if found.len() == 1 {
            Ok(found[0])
        } else {
            let pt: Vec<String> = x.iter().map(crate::exact_geometry::fmt_q).collect();
            Err(ChambrierError::hypothesis(
                "H1",
                format!("point ({}) lies in {} cones", pt.join(", "), found.len()),
            ))
        }
    }

    /// Index of the origin cone, if present.
    pub fn origin_cone(&self) -> Option<usize> {
        self.cones.iter().position(|c| c.span_dim == 0)
    }

    pub fn j_string(&self) -> String {
        self.j.iter().map(|&i| generator_name(i)).collect()
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            schema: "chambrier/1".to_string(),
            label: self.label.clone(),
            j: self.j_string(),
            dim: self.dim,
            cones: self
                .cones
                .iter()
                .enumerate()
                .map(|(i, c)| ConeJson {
                    id: c.id.clone(),
                    eq: c.eq_ints_i64(),
                    gt: c.gt_ints_i64(),
                    span_dim: c.span_dim,
                    faces: self.faces[i].iter().map(|&k| self.cones[k].id.clone()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a fan from JSON, re-canonicalizing every cone.
    pub fn from_json(f: &FanJson) -> Result<Fan> {
        let mut cones = Vec::new();
        for c in &f.cones {
            let eq: Vec<LinForm> = c.eq.iter().map(|r| LinForm::from_i64(r)).collect();
            let gt: Vec<LinForm> = c.gt.iter().map(|r| LinForm::from_i64(r)).collect();
            for r in c.eq.iter().chain(&c.gt) {
                if r.len() != f.dim {
                    return Err(ChambrierError::DimensionMismatch { expected: f.dim, got: r.len() });
                }
            }
            cones.push(Cone::canonicalize(f.dim, &eq, &gt)?);
        }
        let j = super::ambient::parse_generators(&f.j, f.dim)
            .ok_or_else(|| ChambrierError::Validation(format!("bad generator set {:?}", f.j)))?;
        Ok(Fan::new(&f.label, &j, f.dim, cones))
    }
}

/// Serialized cone.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConeJson {
    pub id: String,
    pub eq: Vec<Vec<i64>>,
    pub gt: Vec<Vec<i64>>,
    pub span_dim: usize,
    pub faces: Vec<String>,
}

/// Serialized fan.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FanJson {
    pub schema: String,
    pub label: String,
    #[serde(rename = "J")]
    pub j: String,
    pub dim: usize,
    pub cones: Vec<ConeJson>,
}

/// Cone of the sign stratum `signs` over `forms`.
pub fn cone_of_signs(dim: usize, forms: &[LinForm], signs: &[Sign]) -> Result<Cone> {
    let mut eq = Vec::new();
    let mut gt = Vec::new();
    for (f, s) in forms.iter().zip(signs) {
        match s {
            Sign::Zero => eq.push(f.clone()),
            Sign::Pos => gt.push(f.clone()),
            Sign::Neg => gt.push(f.neg()),
        }
    }
    Cone::canonicalize(dim, &eq, &gt)
}

/// Weyl facets of the root system, as cones.
pub fn weyl_facets(rs: &RootSystem) -> Vec<Cone> {
    arrangement_faces(rs.rank, &rs.positive_roots)
        .iter()
        .map(|f| cone_of_signs(rs.rank, &rs.positive_roots, &f.signs).expect("strata are nonempty"))
        .collect()
}

/// The fan of Weyl facets.
pub fn weyl_fan(rs: &RootSystem) -> Fan {
    Fan::new(&rs.label, &[], rs.rank, weyl_facets(rs))
}
