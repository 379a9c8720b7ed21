//! Convergence and cost studies for classic numerical methods.
//!
//! The crate bundles five numerical experiments (golden-ratio sequence,
//! composite trapezoid quadrature, forward Euler, secant/Newton root finding
//! and a 2D immersed-boundary swimmer) together with the shared harness used
//! to measure their error series, fitted rates and wall-clock cost.

pub mod error;
pub mod euler;
pub mod field;
pub mod fluid;
pub mod golden;
pub mod harness;
pub mod ib;
pub mod io;
pub mod jelly;
pub mod quadrature;
pub mod roots;

pub use error::{Error, Result};
pub use field::Field;
