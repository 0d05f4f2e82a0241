//! Canonical cones, arrangements, fans, the hypothesis checker and the merged Weyl fans.

pub mod ambient;
pub mod arrangement;
pub mod cone;
pub mod fan;
pub mod fj;
pub mod hypotheses;

pub use ambient::{parse_generators, Ambient, GroupElement};
pub use arrangement::{arrangement_faces, SignFace};
pub use cone::{canonicalize_cone, Cone};
pub use fan::{weyl_fan, Fan, FanJson};
pub use fj::{admissible_facets, build_fj};
pub use hypotheses::{check_hypotheses, HypothesisReport, Witness};
