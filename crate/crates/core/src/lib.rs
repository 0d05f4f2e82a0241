//! Exact polygonal compactification of affine Coxeter complexes and Bruhat-Tits trees.
//!
//! Every computation is carried out over the rationals: root systems and Weyl groups,
//! cone decompositions of the vectorial apartment and their hypothesis checks, cores and
//! facades of cones, compactified apartments, alcove windows, the regular tree with its
//! retractions and ends, and SVG rendering of planar fans.

pub mod apartment_compactification;
pub mod building_compactification;
pub mod building_kernel;
pub mod cli_io;
pub mod core_facade;
pub mod error;
pub mod exact_geometry;
pub mod fan_kernel;
pub mod polyhedra;

pub use error::{ChambrierError, Result};
