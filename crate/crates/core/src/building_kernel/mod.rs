//! Gallery machinery in thin affine apartments (alcove windows) and in the thick tree of
//! type affine A1: minimal galleries, enclos, projections, chimneys, retractions and
//! parallelism of rays.

pub mod chimney;
pub mod tree;
pub mod window;

pub use chimney::{chimney, closure_meets_ray, gallery_along_ray, ray_enclos_bounds, Chimney};
pub use tree::{chamber_distance, geodesic, median, vertex_distance, Chamber, LineEnd, TreeApartment, TreeBuilding, TreeRay, Vertex};
pub use window::{AffineMap, Alcove, AlcoveWindow, Facet, GalleryWord};
