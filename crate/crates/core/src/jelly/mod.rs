//! Jellyfish-like swimmer: bell construction, actuation, the coupled
//! simulation loop and swimming metrics.

mod bell;
mod config;
mod metrics;
mod output;
mod sim;

pub use bell::{activation, bell_center, build_bell, muscle_rest_length, wall_height, Swimmer, BEAM_SPAN};
pub use config::{reynolds, reynolds_from, SimConfig, MIN_STEPS_PER_CYCLE};
pub use metrics::{eulerian_error, swim_speed, thrust_error, Component, ThrustError};
pub use output::{swim_table, write_run, RunOutput};
pub use sim::{run_simulation, run_sweep, run_swimmer, Snapshot, SwimRecord};
