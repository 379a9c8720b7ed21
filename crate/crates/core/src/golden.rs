//! Fibonacci ratios as approximations of the golden ratio.

use crate::error::{Error, Result};

/// Reference value of the golden ratio used for every error series.
pub const PHI_HAT: f64 = 1.618033988749895;

/// Largest index whose Fibonacci value fits in a `u64`.
pub const MAX_FIB_INDEX: usize = 91;

/// Tolerances below this are clamped; double precision cannot resolve them.
pub const MACHINE_FLOOR: f64 = 1.0e-16;

/// Exact Fibonacci values `F_0..=F_n` with `F_0 = F_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibTable(Vec<u64>);

impl FibTable {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, k: usize) -> Option<u64> {
        self.0.get(k).copied()
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("table holds at least F_0")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn fib_sequence(n: usize) -> Result<FibTable> {
    if n > MAX_FIB_INDEX {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: MAX_FIB_INDEX,
        });
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(1u64);
    if n >= 1 {
        values.push(1);
    }
    for k in 2..=n {
        let next = values[k - 1] + values[k - 2];
        values.push(next);
    }
    Ok(FibTable(values))
}

/// Ratios `phi_k = F_{k+1} / F_k` and their errors against [`PHI_HAT`].
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenSeries {
    pub n_values: Vec<usize>,
    pub approximations: Vec<f64>,
    pub errors: Vec<f64>,
}

impl GoldenSeries {
    pub fn len(&self) -> usize {
        self.n_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_values.is_empty()
    }

    /// Error of `phi_k`, if `k` is covered by the series.
    pub fn error_at(&self, k: usize) -> Option<f64> {
        self.n_values
            .iter()
            .position(|&n| n == k)
            .map(|idx| self.errors[idx])
    }
}

pub fn golden_series(n_max: usize) -> Result<GoldenSeries> {
    if n_max == 0 || n_max > MAX_FIB_INDEX - 1 {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            max: MAX_FIB_INDEX - 1,
        });
    }
    let fib = fib_sequence(n_max + 1)?;
    let f = fib.values();
    let n_values: Vec<usize> = (1..=n_max).collect();
    let approximations: Vec<f64> = n_values
        .iter()
        .map(|&k| f[k + 1] as f64 / f[k] as f64)
        .collect();
    let errors = approximations.iter().map(|p| (PHI_HAT - p).abs()).collect();
    Ok(GoldenSeries {
        n_values,
        approximations,
        errors,
    })
}

/// Smallest `k` with `E_k <= tol`. Tolerances under [`MACHINE_FLOOR`] are
/// treated as the floor itself.
pub fn terms_for_tolerance(tol: f64) -> usize {
    let tol = if tol.is_nan() { MACHINE_FLOOR } else { tol.max(MACHINE_FLOOR) };
    let series = golden_series(MAX_FIB_INDEX - 1).expect("static range is valid");
    series
        .n_values
        .iter()
        .zip(&series.errors)
        .find(|(_, &e)| e <= tol)
        .map(|(&k, _)| k)
        // E_k reaches exactly zero at k = 39, so the scan always terminates.
        .expect("error series reaches the machine floor")
}

/// Upper bound `1 / F_{m-1}` on `E_m`.
pub fn geometric_bound(m: usize) -> Result<f64> {
    if !(2..=MAX_FIB_INDEX).contains(&m) {
        return Err(Error::IndexOutOfRange {
            index: m,
            max: MAX_FIB_INDEX,
        });
    }
    let fib = fib_sequence(m - 1)?;
    Ok(1.0 / fib.last() as f64)
}
