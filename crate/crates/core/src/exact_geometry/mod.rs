//! Exact rational linear algebra, root systems and finite Weyl groups.

pub mod linalg;
pub mod root_system;
pub mod weyl;

pub use linalg::{fmt_q, parse_q, q, qf, LinForm, Mat, RatVec, Q};
pub use root_system::{reflection_matrix, RootSystem, Sign, SUPPORTED_TYPES};
pub use weyl::{act, act_form, enumerate_weyl, WeylElement};

/// Builds a root system from its label.
pub fn build_root_system(label: &str) -> crate::error::Result<RootSystem> {
    RootSystem::new(label)
}
