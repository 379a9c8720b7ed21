//! Incompressible Navier–Stokes on a periodic square, advanced with a
//! semi-implicit Fourier-space projection scheme.

mod diagnostics;
mod fft2;
mod solver;

pub use diagnostics::{divergence, kinetic_energy, max_speed, vorticity};
pub use solver::{ns_step, FluidParams, FluidSolver, FluidState};
