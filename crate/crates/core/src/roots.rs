//! Secant and Newton iterations with empirical order estimation.

use crate::error::{Error, Result};
use crate::harness::median;

/// Errors below this are dominated by rounding and carry no rate information.
pub const ORDER_ERROR_FLOOR: f64 = 1.0e-13;
/// Errors above this are treated as pre-asymptotic.
pub const ORDER_ERROR_CAP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct RootRun {
    pub iterates: Vec<f64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub root_estimate: f64,
}

fn eval_checked(f: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() && x.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x, value: v })
    }
}

/// Secant iteration from `x0, x1`, stopping once `|f(x)| <= tol` or after
/// `max_iter` new iterates.
pub fn secant(
    f: impl Fn(f64) -> f64,
    x0: f64,
    x1: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RootRun> {
    if x0 == x1 {
        return Err(Error::InvalidArgument(format!(
            "secant needs two distinct starting points, got {x0} twice"
        )));
    }
    let mut iterates = vec![x0, x1];
    let mut residuals = vec![eval_checked(&f, x0)?.abs(), 0.0];
    let (mut prev, mut curr) = (x0, x1);
    let (mut f_prev, mut f_curr) = (f(x0), eval_checked(&f, x1)?);
    residuals[1] = f_curr.abs();
    let mut converged = f_curr.abs() <= tol;
    let mut iter = 0;
    while !converged && iter < max_iter {
        if f_curr == f_prev {
            return Err(Error::Stagnation {
                x_prev: prev,
                x_curr: curr,
            });
        }
        let next = curr - f_curr * (curr - prev) / (f_curr - f_prev);
        let f_next = eval_checked(&f, next)?;
        iterates.push(next);
        residuals.push(f_next.abs());
        (prev, curr) = (curr, next);
        (f_prev, f_curr) = (f_curr, f_next);
        converged = f_curr.abs() <= tol;
        iter += 1;
    }
    Ok(RootRun {
        iterates,
        residuals,
        converged,
        root_estimate: curr,
    })
}

pub fn newton(
    f: impl Fn(f64) -> f64,
    fprime: impl Fn(f64) -> f64,
    x0: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RootRun> {
    let mut x = x0;
    let mut fx = eval_checked(&f, x)?;
    let mut iterates = vec![x];
    let mut residuals = vec![fx.abs()];
    let mut converged = fx.abs() <= tol;
    let mut iter = 0;
    while !converged && iter < max_iter {
        let d = eval_checked(&fprime, x)?;
        if d == 0.0 {
            return Err(Error::ZeroDerivative(x));
        }
        x -= fx / d;
        fx = eval_checked(&f, x)?;
        iterates.push(x);
        residuals.push(fx.abs());
        converged = fx.abs() <= tol;
        iter += 1;
    }
    Ok(RootRun {
        iterates,
        residuals,
        converged,
        root_estimate: x,
    })
}

/// Median over consecutive error triples of
/// `log(e_{n+1} / e_n) / log(e_n / e_{n-1})`, using only triples whose errors
/// all lie in `[ORDER_ERROR_FLOOR, ORDER_ERROR_CAP]`.
pub fn empirical_order(run: &RootRun, true_root: f64) -> Result<f64> {
    let errors: Vec<f64> = run.iterates.iter().map(|x| (x - true_root).abs()).collect();
    let above_floor = errors.iter().filter(|&&e| e >= ORDER_ERROR_FLOOR).count();
    if above_floor < 5 {
        return Err(Error::InsufficientData(format!(
            "order estimate needs 5 iterates with error above {ORDER_ERROR_FLOOR:e}, found {above_floor}"
        )));
    }
    let admissible = |e: f64| (ORDER_ERROR_FLOOR..=ORDER_ERROR_CAP).contains(&e);
    let mut estimates: Vec<f64> = errors
        .windows(3)
        .filter(|w| w.iter().all(|&e| admissible(e)))
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .filter(|p| p.is_finite())
        .collect();
    if estimates.is_empty() {
        return Err(Error::InsufficientData(
            "no admissible error triples for an order estimate".into(),
        ));
    }
    Ok(median(&mut estimates))
}
