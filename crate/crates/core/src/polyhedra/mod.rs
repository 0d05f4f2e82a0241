//! Exact feasibility (Fourier-Motzkin) and convex quadratic minimization over rational polyhedra.

pub mod fm;
pub mod qp;

pub use fm::{feasible_point, Rel, Row, System};
pub use qp::{QpSolution, QuadProgram};
