use std::time::Instant;

use super::bell::{build_bell, muscle_rest_length, Swimmer};
use super::config::SimConfig;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fluid::{FluidParams, FluidSolver, FluidState};
use crate::ib::{
    beam_force, interp, muscle_force, spread, spring_force, target_force, Grid, LagrangianMesh,
    Point,
};

/// Stored Eulerian and Lagrangian state at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub u: Field,
    pub v: Field,
    pub p: Field,
    pub positions: Vec<Point>,
}

/// Time series and snapshots from one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SwimRecord {
    pub n: usize,
    pub side: f64,
    pub freq: f64,
    pub ds: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub bell_top_x: Vec<f64>,
    pub bell_top_y: Vec<f64>,
    pub bell_top_speed: Vec<f64>,
    /// Mean over body nodes of the downward part of the vertical force
    /// density each node applies to the fluid.
    pub thrust: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    /// Seconds spent in the time-stepping loop.
    pub wall_time: f64,
}

impl SwimRecord {
    /// Apex height change from the first to the last sample.
    pub fn displacement(&self) -> f64 {
        match (self.bell_top_y.first(), self.bell_top_y.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Largest horizontal excursion of the apex from its start.
    pub fn max_x_drift(&self) -> f64 {
        let x0 = self.bell_top_x.first().copied().unwrap_or(0.0);
        self.bell_top_x.iter().map(|x| (x - x0).abs()).fold(0.0, f64::max)
    }

    /// Snapshot closest to `time`, if one lies within half an output interval.
    pub fn snapshot_near(&self, time: f64) -> Option<&Snapshot> {
        let interval = match self.snapshots.as_slice() {
            [a, b, ..] => b.time - a.time,
            [_] => self.dt,
            [] => return None,
        };
        self.snapshots
            .iter()
            .min_by(|a, b| (a.time - time).abs().total_cmp(&(b.time - time).abs()))
            .filter(|s| (s.time - time).abs() <= 0.5 * interval + 1e-12 * time.abs().max(1.0))
    }
}

/// Runs the built-in bell described by `cfg`.
pub fn run_simulation(cfg: &SimConfig) -> Result<SwimRecord> {
    let swimmer = build_bell(cfg)?;
    run_swimmer(cfg, swimmer)
}

fn fiber_forces(mesh: &LagrangianMesh, t: f64, cfg: &SimConfig, f: &mut [Point]) -> Result<()> {
    f.fill([0.0; 2]);
    spring_force(mesh, f)?;
    beam_force(mesh, f);
    target_force(mesh, f);
    muscle_force(mesh, |m| muscle_rest_length(t, m.rest_length, cfg), f)
}

/// Time-steps `swimmer` in the fluid described by `cfg`: fiber forces,
/// spreading, one fluid step, interpolation and node update per step.
pub fn run_swimmer(cfg: &SimConfig, swimmer: Swimmer) -> Result<SwimRecord> {
    cfg.validate()?;
    let Swimmer {
        mut mesh,
        bell_nodes,
        apex,
    } = swimmer;
    let dt = cfg.time_step();
    let steps = cfg.total_steps();
    let every = cfg.snapshot_interval();
    let grid = Grid::new(cfg.n, cfg.side);
    let params = FluidParams {
        rho: cfg.rho,
        mu: cfg.mu(),
        dt,
    };
    let mut solver = FluidSolver::new(cfg.n, cfg.side, params)?;
    let mut state = FluidState::at_rest(cfg.n, cfg.side);
    let mut forces = vec![[0.0; 2]; mesh.len()];

    let mut rec = SwimRecord {
        n: cfg.n,
        side: cfg.side,
        freq: cfg.freq,
        ds: mesh.ds,
        dt,
        times: Vec::with_capacity(steps + 1),
        bell_top_x: Vec::with_capacity(steps + 1),
        bell_top_y: Vec::with_capacity(steps + 1),
        bell_top_speed: Vec::with_capacity(steps + 1),
        thrust: Vec::with_capacity(steps + 1),
        snapshots: Vec::new(),
        wall_time: 0.0,
    };

    let start = Instant::now();
    for k in 0..=steps {
        let t = k as f64 * dt;
        let wrap = |e: Error| Error::Simulation {
            step: k,
            source: Box::new(e),
        };
        fiber_forces(&mesh, t, cfg, &mut forces).map_err(wrap)?;
        let apex_velocity = interp(&state.u, &state.v, &mesh.positions[apex..=apex]).map_err(wrap)?[0];
        let thrust = bell_nodes.iter().map(|&i| (-forces[i][1]).max(0.0)).sum::<f64>()
            / bell_nodes.len() as f64;

        rec.times.push(t);
        rec.bell_top_x.push(mesh.positions[apex][0]);
        rec.bell_top_y.push(mesh.positions[apex][1]);
        rec.bell_top_speed.push(apex_velocity[1]);
        rec.thrust.push(thrust);
        if k % every == 0 {
            rec.snapshots.push(Snapshot {
                step: k,
                time: t,
                u: state.u.clone(),
                v: state.v.clone(),
                p: state.p.clone(),
                positions: mesh.positions.clone(),
            });
        }
        if k == steps {
            break;
        }

        let force_field = spread(&mesh.positions, &forces, mesh.ds, &grid).map_err(wrap)?;
        solver.step(&mut state, Some(&force_field)).map_err(wrap)?;
        let vel = interp(&state.u, &state.v, &mesh.positions).map_err(wrap)?;
        for (x, u) in mesh.positions.iter_mut().zip(&vel) {
            x[0] += dt * u[0];
            x[1] += dt * u[1];
            if !(x[0].is_finite() && x[1].is_finite()) {
                return Err(wrap(Error::NonFinite {
                    x: t,
                    value: if x[0].is_finite() { x[1] } else { x[0] },
                }));
            }
        }
    }
    rec.wall_time = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Runs every config, at most `jobs` at a time. Results keep input order and
/// do not depend on `jobs`.
pub fn run_sweep(configs: &[SimConfig], jobs: usize) -> Vec<Result<SwimRecord>> {
    let jobs = jobs.clamp(1, configs.len().max(1));
    if jobs == 1 {
        return configs.iter().map(run_simulation).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<SwimRecord>>>> =
        configs.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let out = run_simulation(cfg);
                *slots[i].lock().unwrap() = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot is filled"))
        .collect()
}
