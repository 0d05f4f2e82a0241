//! Compactification of buildings by classes of cones, on the tree of type affine A1 and on
//! thin models: building cones, their equivalence, neighborhoods of boundary points,
//! extension of retractions to ends, facades and bordered cones.

pub mod thin;
pub mod tree;

use serde_json::{json, Value};

use crate::apartment_compactification::{AffineCone, ApartmentModel, ApartmentPoint};
use crate::building_kernel::TreeBuilding;
use crate::core_facade::facade;
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::Q;

pub use thin::{bordered_set, core_star, BoundaryFacadeSet};
pub use tree::{extend_retraction, reflect, LinePoint, TreeCone, TreePoint};

/// Model a building cone or point lives in.
#[derive(Clone, Copy)]
pub enum Model<'a> {
    Tree(&'a TreeBuilding),
    Thin(&'a ApartmentModel),
}

/// Building cone, determined by its core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildingCone {
    Tree(TreeCone),
    Thin(AffineCone),
}

/// Point of the compactified building: interior point or class of cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildingPoint {
    Tree(TreePoint),
    Thin(ApartmentPoint),
}

fn mismatch() -> ChambrierError {
    ChambrierError::ModelMismatch("tree and thin objects cannot be compared".into())
}

/// Building cone of a tree cone or of an affine cone of a thin model.
pub fn building_cone(model: Model, c: BuildingCone) -> Result<BuildingCone> {
    match (model, c) {
        (Model::Tree(t), BuildingCone::Tree(c)) => Ok(BuildingCone::Tree(tree::tree_cone(t, c)?)),
        (Model::Thin(m), BuildingCone::Thin(c)) => {
            m.classify(&c)?;
            Ok(BuildingCone::Thin(c))
        }
        _ => Err(mismatch()),
    }
}

pub fn cone_equiv(model: Model, a: &BuildingCone, b: &BuildingCone) -> Result<bool> {
    match (model, a, b) {
        (Model::Tree(t), BuildingCone::Tree(a), BuildingCone::Tree(b)) => tree::cone_equiv(t, a, b),
        (Model::Thin(m), BuildingCone::Thin(a), BuildingCone::Thin(b)) => thin::cone_equiv(m, a, b),
        _ => Err(mismatch()),
    }
}

/// Class of a building cone.
pub fn class_of(model: Model, c: &BuildingCone) -> Result<BuildingPoint> {
    match (model, c) {
        (Model::Tree(t), BuildingCone::Tree(c)) => Ok(BuildingPoint::Tree(tree::class_of(t, c)?)),
        (Model::Thin(m), BuildingCone::Thin(c)) => Ok(BuildingPoint::Thin(m.classify(c)?)),
        _ => Err(mismatch()),
    }
}

/// Whether `x` belongs to the neighborhood of the cone `c` fattened by radius `r`.
pub fn boundary_membership(model: Model, x: &BuildingPoint, c: &BuildingCone, r: &Q) -> Result<bool> {
    match (model, x, c) {
        (Model::Tree(t), BuildingPoint::Tree(x), BuildingCone::Tree(c)) => tree::neighborhood_contains(t, c, r, x),
        (Model::Thin(m), BuildingPoint::Thin(x), BuildingCone::Thin(c)) => thin::neighborhood_contains(m, c, r, x),
        _ => Err(mismatch()),
    }
}

/// Facade of a class, as a building.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacadeBuilding {
    Point,
    Apartment { dim: usize, group_order: usize, walls: usize, label: String },
}

pub fn facade_building(model: Model, c: &BuildingCone) -> Result<FacadeBuilding> {
    match (model, c) {
        (Model::Tree(t), BuildingCone::Tree(TreeCone::Ray(r))) => match tree::facade_classes(t, r)? {
            1 => Ok(FacadeBuilding::Point),
            n => Err(ChambrierError::Invariant(format!("{n} classes of rays parallel to a ray"))),
        },
        (Model::Tree(_), BuildingCone::Tree(TreeCone::Point(_))) => Err(ChambrierError::Validation(
            "the facade of an interior point is the tree itself".into(),
        )),
        (Model::Thin(m), BuildingCone::Thin(c)) => {
            let idx = m.fan.index_of(&c.direction).ok_or_else(|| ChambrierError::Validation(format!("unknown cone id {}", c.direction)))?;
            let f = facade(&m.fan, &m.amb, idx)?;
            if f.dim == 0 {
                return Ok(FacadeBuilding::Point);
            }
            Ok(FacadeBuilding::Apartment { dim: f.dim, group_order: f.group.len(), walls: f.walls.len(), label: f.label })
        }
        _ => Err(mismatch()),
    }
}

impl BuildingPoint {
    pub fn is_interior(&self, model: Model) -> Result<bool> {
        match (model, self) {
            (Model::Tree(_), BuildingPoint::Tree(x)) => Ok(x.is_interior()),
            (Model::Thin(m), BuildingPoint::Thin(p)) => {
                let o = m.fan.origin_cone().expect("origin cone exists in an apartment model");
                Ok(p.direction == m.fan.cones[o].id)
            }
            _ => Err(mismatch()),
        }
    }

    /// `{"kind": "interior" | "end", "data": ...}`.
    pub fn to_json(&self, model: Model) -> Result<Value> {
        let kind = if self.is_interior(model)? { "interior" } else { "end" };
        let data = match self {
            BuildingPoint::Tree(TreePoint::Vertex(v)) => json!({"vertex": v.name()}),
            BuildingPoint::Tree(TreePoint::Chamber(c)) => json!({"chamber": c.name()}),
            BuildingPoint::Tree(TreePoint::End(b)) => json!({"boundary_vertex": b.name()}),
            BuildingPoint::Thin(p) => serde_json::to_value(p).expect("apartment points serialize"),
        };
        Ok(json!({"kind": kind, "data": data}))
    }
}
