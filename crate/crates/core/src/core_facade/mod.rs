//! Cores of cones, their stabilizers, facades with the I1/I2 split, and facade fans.

pub mod core;
pub mod facade;

pub use self::core::{core, stabilizer, walls_meeting, Core};
pub use facade::{facade, facade_fan, is_essential, project_bordered, simple_system, Facade, FacadeFan};
