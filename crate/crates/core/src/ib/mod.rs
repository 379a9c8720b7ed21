//! Immersed-boundary coupling: regularized delta kernel, force spreading,
//! velocity interpolation and the fiber force laws.

mod coupling;
mod fibers;
pub mod geometry;
mod kernel;

pub use coupling::{interp, spread, wrap_position, ForceField, Grid};
pub use fibers::{
    beam_force, muscle_force, spring_force, target_force, Beam, LagrangianMesh, Point, Spring,
    Target,
};
pub use kernel::delta_phi;
