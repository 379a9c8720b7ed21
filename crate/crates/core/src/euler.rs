//! Forward Euler stepping with error and cost studies.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harness::{timed_median, ConvergenceSeries, ResolutionKind};

/// Largest number of steps a single solve may take.
pub const MAX_STEPS: f64 = 1.0e9;

/// Repetitions whose median is reported by the timing study.
pub const TIMING_REPS: usize = 5;

type Rhs = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Exact = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// `dy/dt = rhs(t, y)`, `y(t0) = y0`, integrated over `[t0, t1]`.
pub struct IvpProblem {
    rhs: Rhs,
    pub y0: f64,
    pub t0: f64,
    pub t1: f64,
    exact: Option<Exact>,
}

impl IvpProblem {
    pub fn new(
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        y0: f64,
        t0: f64,
        t1: f64,
    ) -> Result<Self> {
        if !(t0 < t1) {
            return Err(Error::InvalidArgument(format!(
                "time span [{t0}, {t1}] must satisfy t0 < t1"
            )));
        }
        Ok(Self {
            rhs: Box::new(rhs),
            y0,
            t0,
            t1,
            exact: None,
        })
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Box::new(exact));
        self
    }

    /// `y' = 2 pi cos(2 pi t)`, `y(0) = 1` on `[0, 2]`, whose solution is
    /// `1 + sin(2 pi t)`.
    pub fn cosine_forcing() -> Self {
        Self::new(|t, _| 2.0 * PI * (2.0 * PI * t).cos(), 1.0, 0.0, 2.0)
            .expect("static time span")
            .with_exact(|t| 1.0 + (2.0 * PI * t).sin())
    }

    pub fn rhs(&self, t: f64, y: f64) -> f64 {
        (self.rhs)(t, y)
    }

    pub fn exact(&self, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(t))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub dt: f64,
}

/// Number of steps covering the span; a final partial step is added when the
/// span is not an integer multiple of `dt`.
fn step_count(p: &IvpProblem, dt: f64) -> Result<usize> {
    let span = p.t1 - p.t0;
    if !(dt > 0.0) || !dt.is_finite() || dt > span {
        return Err(Error::InvalidArgument(format!(
            "time step {dt} must be positive and at most the span {span}"
        )));
    }
    let ratio = span / dt;
    if ratio > MAX_STEPS {
        return Err(Error::InvalidArgument(format!(
            "{ratio:.3e} steps exceed the limit of {MAX_STEPS:.0e}"
        )));
    }
    let nearest = ratio.round();
    let steps = if (ratio - nearest).abs() <= 1e-9 * ratio {
        nearest
    } else {
        ratio.ceil()
    };
    Ok(steps as usize)
}

#[inline]
fn time_at(p: &IvpProblem, dt: f64, k: usize, steps: usize) -> f64 {
    if k == steps {
        p.t1
    } else {
        p.t0 + k as f64 * dt
    }
}

/// Steps into a caller-provided buffer so timed regions avoid allocation.
fn step_into(p: &IvpProblem, dt: f64, steps: usize, values: &mut Vec<f64>) -> Result<()> {
    values.clear();
    let mut y = p.y0;
    values.push(y);
    for k in 0..steps {
        let t = time_at(p, dt, k, steps);
        let h = time_at(p, dt, k + 1, steps) - t;
        let slope = p.rhs(t, y);
        if !slope.is_finite() {
            return Err(Error::NonFinite { x: t, value: slope });
        }
        y += h * slope;
        values.push(y);
    }
    Ok(())
}

pub fn euler_solve(p: &IvpProblem, dt: f64) -> Result<Trajectory> {
    let steps = step_count(p, dt)?;
    let mut values = Vec::with_capacity(steps + 1);
    step_into(p, dt, steps, &mut values)?;
    let times = (0..=steps).map(|k| time_at(p, dt, k, steps)).collect();
    Ok(Trajectory { times, values, dt })
}

fn max_error(p: &IvpProblem, dt: f64, values: &[f64]) -> Result<f64> {
    let steps = values.len() - 1;
    let exact = p.exact.as_ref().ok_or(Error::MissingExact)?;
    Ok(values
        .iter()
        .enumerate()
        .map(|(k, y)| (y - exact(time_at(p, dt, k, steps))).abs())
        .fold(0.0, f64::max))
}

/// Max-norm error over the trajectory nodes against the exact solution.
pub fn euler_error(p: &IvpProblem, dt: f64) -> Result<f64> {
    if !p.has_exact() {
        return Err(Error::MissingExact);
    }
    let traj = euler_solve(p, dt)?;
    max_error(p, dt, &traj.values)
}

/// Error and median stepping time (over [`TIMING_REPS`] runs) for each step
/// size, ordered from coarse to fine. Errors are zero-filled when the problem
/// has no exact solution.
pub fn euler_timing_study(p: &IvpProblem, dt_list: &[f64]) -> Result<ConvergenceSeries> {
    if dt_list.is_empty() {
        return Err(Error::InvalidArgument("step list is empty".into()));
    }
    let mut dts = dt_list.to_vec();
    dts.sort_by(|a, b| b.total_cmp(a));
    dts.dedup();
    let mut errors = Vec::with_capacity(dts.len());
    let mut times = Vec::with_capacity(dts.len());
    for &dt in &dts {
        let steps = step_count(p, dt)?;
        let mut buf = Vec::with_capacity(steps + 1);
        let (res, secs) = timed_median(TIMING_REPS, || step_into(p, dt, steps, &mut buf));
        res?;
        errors.push(if p.has_exact() { max_error(p, dt, &buf)? } else { 0.0 });
        times.push(secs);
    }
    ConvergenceSeries::new(ResolutionKind::TimeStep, dts, errors, Some(times))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_is_constant() {
        let p = IvpProblem::new(|_, _| 0.0, 1.0, 0.0, 1.0).unwrap().with_exact(|_| 1.0);
        for dt in [0.3, 0.1, 1e-3] {
            let traj = euler_solve(&p, dt).unwrap();
            assert!(traj.values.iter().all(|&v| v == 1.0));
            assert_eq!(euler_error(&p, dt).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_rhs_is_exact() {
        let p = IvpProblem::new(|_, _| 1.0, 0.0, 0.0, 2.0).unwrap();
        let traj = euler_solve(&p, 0.5).unwrap();
        assert_eq!(traj.values, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(traj.times, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn short_final_step_lands_on_t1() {
        let p = IvpProblem::new(|_, _| 1.0, 0.0, 0.0, 1.0).unwrap();
        let traj = euler_solve(&p, 0.3).unwrap();
        assert_eq!(traj.times.len(), 5);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
        assert!((traj.values.last().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_time_grid() {
        let p = IvpProblem::cosine_forcing();
        let traj = euler_solve(&p, 1e-3).unwrap();
        assert_eq!(traj.times.len(), 2001);
        assert_eq!(*traj.times.last().unwrap(), 2.0);
        for w in traj.times.windows(2) {
            assert!((w[1] - w[0] - 1e-3).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn cosine_problem_accuracy() {
        let p = IvpProblem::cosine_forcing();
        assert!(euler_error(&p, 1e-4).unwrap() <= 5e-3);
    }

    #[test]
    fn halving_dt_halves_error() {
        let p = IvpProblem::cosine_forcing();
        let ratio = euler_error(&p, 2e-3).unwrap() / euler_error(&p, 1e-3).unwrap();
        assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn time_only_rhs_matches_left_riemann_sum() {
        let p = IvpProblem::cosine_forcing();
        let dt = 0.01;
        let traj = euler_solve(&p, dt).unwrap();
        let mut riemann = p.y0;
        for k in 0..traj.values.len() {
            assert!((traj.values[k] - riemann).abs() < 1e-12);
            if k + 1 < traj.values.len() {
                let t = traj.times[k];
                riemann += (traj.times[k + 1] - t) * 2.0 * PI * (2.0 * PI * t).cos();
            }
        }
    }

    #[test]
    fn errors() {
        let p = IvpProblem::new(|_, _| 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(euler_error(&p, 0.1), Err(Error::MissingExact)));
        assert!(euler_solve(&p, 2.0).is_err());
        assert!(euler_solve(&p, 0.0).is_err());
        assert!(euler_solve(&p, 1e-10).is_err());
        assert!(IvpProblem::new(|_, _| 1.0, 0.0, 1.0, 1.0).is_err());
        let blow = IvpProblem::new(|t, _| 1.0 / (t - 0.5), 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(euler_solve(&blow, 0.25), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn single_entry_study() {
        let p = IvpProblem::cosine_forcing();
        let s = euler_timing_study(&p, &[1e-3]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(crate::harness::fit_timing(&s).is_err());
        assert!(euler_timing_study(&p, &[]).is_err());
    }
}
