//! Composite trapezoid rule, its a-priori error bound, and convergence studies.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::{timed, ConvergenceSeries, ResolutionKind};

/// Partition count used for surrogate-truth reference values.
pub const REFERENCE_N: usize = 10_000_000;

/// Sample count for the `max |f''|` search.
pub const K_SAMPLES: usize = 100_001;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

pub struct Integrand {
    eval: RealFn,
    second_derivative: Option<RealFn>,
    label: String,
    periodic_on_domain: bool,
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("label", &self.label)
            .field("analytic_second_derivative", &self.second_derivative.is_some())
            .field("periodic_on_domain", &self.periodic_on_domain)
            .finish()
    }
}

impl Integrand {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Box::new(eval),
            second_derivative: None,
            label: label.into(),
            periodic_on_domain: false,
        }
    }

    pub fn with_second_derivative(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.second_derivative = Some(Box::new(d2));
        self
    }

    pub fn periodic(mut self, periodic: bool) -> Self {
        self.periodic_on_domain = periodic;
        self
    }

    /// `(x^2 + 3) cos^2(2 pi x) / (1 + e^{sin(2 pi x)})^2` on `[0, 1]`.
    pub fn nonperiodic_example() -> Self {
        Self::new("nonperiodic", |x: f64| {
            let s = (2.0 * PI * x).sin();
            let c = (2.0 * PI * x).cos();
            let d = 1.0 + s.exp();
            (x * x + 3.0) * c * c / (d * d)
        })
    }

    /// `cos^2(2 pi x) / (1 + e^{sin(2 pi x)})^2` on `[0, 1]`.
    pub fn periodic_example() -> Self {
        Self::new("periodic", |x: f64| {
            let s = (2.0 * PI * x).sin();
            let c = (2.0 * PI * x).cos();
            let d = 1.0 + s.exp();
            c * c / (d * d)
        })
        .periodic(true)
    }

    pub fn linear() -> Self {
        Self::new("linear", |x: f64| 2.0 * x).with_second_derivative(|_| 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_periodic_on_domain(&self) -> bool {
        self.periodic_on_domain
    }

    pub fn has_second_derivative(&self) -> bool {
        self.second_derivative.is_some()
    }
}

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.carry
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integration interval [{a}, {b}] must be finite with a < b"
        )));
    }
    Ok(())
}

#[inline]
fn node(a: f64, b: f64, j: usize, n: usize) -> f64 {
    if j == n {
        b
    } else {
        a + (b - a) * (j as f64) / (n as f64)
    }
}

fn finite_at(f: &Integrand, x: f64) -> Result<f64> {
    let v = f.eval(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x, value: v })
    }
}

/// Composite trapezoid approximation of `int_a^b f` with `n` uniform partitions.
pub fn trap_composite(f: &Integrand, a: f64, b: f64, n: usize) -> Result<f64> {
    check_interval(a, b)?;
    if n == 0 {
        return Err(Error::InvalidArgument("partition count must be at least 1".into()));
    }
    let mut acc = CompensatedSum::default();
    acc.add(0.5 * finite_at(f, a)?);
    for j in 1..n {
        acc.add(finite_at(f, node(a, b, j, n))?);
    }
    acc.add(0.5 * finite_at(f, b)?);
    Ok(acc.total() * (b - a) / n as f64)
}

/// `K (b - a)^3 / (12 N^2)`.
pub fn trap_error_bound(k_max: f64, a: f64, b: f64, n: usize) -> f64 {
    let len = b - a;
    k_max * len * len * len / (12.0 * (n as f64) * (n as f64))
}

/// `max |f''|` over `[a, b]` sampled at [`K_SAMPLES`] uniform points, using
/// the analytic second derivative when one is attached and a central
/// difference with step `1e-5 (b - a)` otherwise.
pub fn estimate_k(f: &Integrand, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    let n = K_SAMPLES - 1;
    let step = 1e-5 * (b - a);
    let mut k = 0.0_f64;
    for j in 0..=n {
        let x = node(a, b, j, n);
        let d2 = match &f.second_derivative {
            Some(d2) => d2(x),
            None => (f.eval(x + step) - 2.0 * f.eval(x) + f.eval(x - step)) / (step * step),
        };
        if !d2.is_finite() {
            return Err(Error::NonFinite { x, value: d2 });
        }
        k = k.max(d2.abs());
    }
    Ok(k)
}

/// Reference value of `int_a^b f` at `reference_n` partitions, cached on disk
/// under `cache_dir` (keyed by integrand label, interval and partition count).
pub fn reference_value(
    f: &Integrand,
    a: f64,
    b: f64,
    reference_n: usize,
    cache_dir: Option<&Path>,
) -> Result<f64> {
    let Some(dir) = cache_dir else {
        return trap_composite(f, a, b, reference_n);
    };
    let path = dir.join(format!("reference_{}_{a}_{b}_{reference_n}.txt", f.label()));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(v) = text.trim().parse::<f64>() {
            return Ok(v);
        }
    }
    let value = trap_composite(f, a, b, reference_n)?;
    fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    fs::write(&path, format!("{value:.16e}\n")).map_err(|e| Error::file(&path, e))?;
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadStudy {
    pub a: f64,
    pub b: f64,
    pub n_list: Vec<usize>,
    pub reference_value: f64,
    pub reference_n: usize,
}

/// Result of a trapezoid study: the error series plus the raw approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadStudyResult {
    pub series: ConvergenceSeries,
    pub approximations: Vec<f64>,
}

impl QuadStudyResult {
    pub fn partitions(&self) -> impl Iterator<Item = usize> + '_ {
        self.series.resolution().iter().map(|&n| n as usize)
    }
}

/// Evaluates `f` at every partition count of the study (sorted, deduplicated)
/// and records `|I_N - I_ref|` with the wall time of each evaluation.
pub fn trap_study(study: &QuadStudy, f: &Integrand) -> Result<QuadStudyResult> {
    let mut ns = study.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    if let Some(&bad) = ns.iter().find(|&&n| n == 0 || n >= study.reference_n) {
        return Err(Error::InvalidArgument(format!(
            "partition count {bad} must be in [1, {})",
            study.reference_n
        )));
    }
    let mut approximations = Vec::with_capacity(ns.len());
    let mut errors = Vec::with_capacity(ns.len());
    let mut times = Vec::with_capacity(ns.len());
    for &n in &ns {
        let (approx, secs) = timed(|| trap_composite(f, study.a, study.b, n));
        let approx = approx?;
        approximations.push(approx);
        errors.push((approx - study.reference_value).abs());
        times.push(secs);
    }
    let series = ConvergenceSeries::new(
        ResolutionKind::Partitions,
        ns.iter().map(|&n| n as f64).collect(),
        errors,
        Some(times),
    )?;
    Ok(QuadStudyResult {
        series,
        approximations,
    })
}

/// `count` log-spaced integers between `lo` and `hi` inclusive, deduplicated.
pub fn log_spaced(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || lo == hi {
        return vec![lo];
    }
    let (l, h) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| (l + (h - l) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_linear() {
        let f = Integrand::linear();
        assert_eq!(trap_composite(&f, 0.0, 1.0, 1).unwrap(), 1.0);
        for n in [2, 3, 10, 1000] {
            assert!((trap_composite(&f, 0.0, 1.0, n).unwrap() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f = Integrand::linear();
        assert!(trap_composite(&f, 0.0, 1.0, 0).is_err());
        assert!(trap_composite(&f, 1.0, 0.0, 4).is_err());
        let pole = Integrand::new("pole", |x: f64| 1.0 / (x - 0.5));
        match trap_composite(&pole, 0.0, 1.0, 2) {
            Err(Error::NonFinite { x, .. }) => assert_eq!(x, 0.5),
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(trap_error_bound(0.0, 0.0, 1.0, 7), 0.0);
        assert_eq!(trap_error_bound(12.0, 0.0, 1.0, 1), 1.0);
    }

    #[test]
    fn k_of_simple_functions() {
        assert_eq!(estimate_k(&Integrand::linear(), 0.0, 1.0).unwrap(), 0.0);
        let fd_linear = Integrand::new("lin", |x| 2.0 * x);
        assert!(estimate_k(&fd_linear, 0.0, 1.0).unwrap() < 1e-5);
        let sine = Integrand::new("sin", f64::sin);
        assert!((estimate_k(&sine, 0.0, PI).unwrap() - 1.0).abs() < 1e-6);
        let sine_exact = Integrand::new("sin", f64::sin).with_second_derivative(|x| -x.sin());
        assert!((estimate_k(&sine_exact, 0.0, PI).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linear_study_is_exact() {
        let f = Integrand::linear();
        let study = QuadStudy {
            a: 0.0,
            b: 1.0,
            n_list: vec![1, 5, 50, 500],
            reference_value: 1.0,
            reference_n: REFERENCE_N,
        };
        let r = trap_study(&study, &f).unwrap();
        assert!(r.series.error().iter().all(|&e| e <= 1e-15));
        assert_eq!(r.series.wall_time().unwrap().len(), 4);
    }

    #[test]
    fn study_rejects_n_at_reference() {
        let study = QuadStudy {
            a: 0.0,
            b: 1.0,
            n_list: vec![10, 100],
            reference_value: 1.0,
            reference_n: 100,
        };
        assert!(trap_study(&study, &Integrand::linear()).is_err());
    }

    #[test]
    fn reference_is_cached() {
        let dir = tempfile::tempdir().unwrap();
        let f = Integrand::new("cubic", |x: f64| x * x * x);
        let first = reference_value(&f, 0.0, 1.0, 1000, Some(dir.path())).unwrap();
        let cached = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(cached, 1);
        let second = reference_value(&f, 0.0, 1.0, 1000, Some(dir.path())).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced(100, 100_000, 4), vec![100, 1000, 10_000, 100_000]);
        assert_eq!(log_spaced(5, 5, 3), vec![5]);
    }
}
