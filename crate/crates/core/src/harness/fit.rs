use std::fmt;
use std::ops::Range;

use super::series::ConvergenceSeries;
use crate::error::{Error, Result};

/// Errors at or below `floor * max(1, largest error)` are treated as
/// saturated at machine precision and left out of a fit.
pub const DEFAULT_FLOOR: f64 = 1.0e-14;

/// Least-squares line through `(log10 resolution, log10 error)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Index range (into the input series) spanned by the fitted points.
    pub window: Range<usize>,
    /// Largest absolute deviation from the line, in log10 units.
    pub max_residual: f64,
    pub excluded_floor_points: usize,
}

impl fmt::Display for RateFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slope={:.16e}, intercept={:.16e}, window={}..{}, residual={:.16e}, floored={}",
            self.slope,
            self.intercept,
            self.window.start,
            self.window.end,
            self.max_residual,
            self.excluded_floor_points
        )
    }
}

/// Fits `log10 y = slope * log10 x + intercept` over the points above the floor.
pub fn fit_loglog(x: &[f64], y: &[f64], floor: f64) -> Result<RateFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let scale = y.iter().copied().fold(1.0_f64, f64::max);
    let threshold = floor * scale;
    let kept: Vec<usize> = (0..x.len())
        .filter(|&i| y[i] > threshold && y[i].is_finite() && x[i] > 0.0)
        .collect();
    if kept.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "rate fit needs at least 3 points above the floor, found {}",
            kept.len()
        )));
    }
    let lx: Vec<f64> = kept.iter().map(|&i| x[i].log10()).collect();
    let ly: Vec<f64> = kept.iter().map(|&i| y[i].log10()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "rate fit needs distinct resolutions".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - (slope * a + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(RateFit {
        slope,
        intercept,
        window: kept[0]..kept[kept.len() - 1] + 1,
        max_residual,
        excluded_floor_points: x.len() - kept.len(),
    })
}

/// Error-vs-resolution rate of a convergence series.
pub fn fit_rate(series: &ConvergenceSeries, floor: f64) -> Result<RateFit> {
    fit_loglog(series.resolution(), series.error(), floor)
}

/// Wall-time-vs-resolution rate of a convergence series.
pub fn fit_timing(series: &ConvergenceSeries) -> Result<RateFit> {
    let times = series
        .wall_time()
        .ok_or_else(|| Error::InsufficientData("series carries no wall times".into()))?;
    fit_loglog(series.resolution(), times, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ResolutionKind;
    use proptest::prelude::*;

    fn power_law(c: f64, p: f64, ns: &[f64]) -> ConvergenceSeries {
        let err = ns.iter().map(|n| c * n.powf(p)).collect();
        ConvergenceSeries::new(ResolutionKind::Partitions, ns.to_vec(), err, None).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let ns = [10.0, 20.0, 40.0, 80.0, 160.0];
        let fit = fit_rate(&power_law(3.0, -2.0, &ns), DEFAULT_FLOOR).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-10);
        assert!(fit.max_residual < 1e-10);
        assert_eq!(fit.window, 0..5);
        assert_eq!(fit.excluded_floor_points, 0);
    }

    #[test]
    fn floored_points_are_excluded() {
        let s = ConvergenceSeries::new(
            ResolutionKind::Partitions,
            vec![1.0, 2.0, 4.0, 8.0, 16.0],
            vec![1e-2, 2.5e-3, 6.25e-4, 1e-16, 0.0],
            None,
        )
        .unwrap();
        let fit = fit_rate(&s, DEFAULT_FLOOR).unwrap();
        assert_eq!(fit.excluded_floor_points, 2);
        assert_eq!(fit.window, 0..3);
        assert!((fit.slope + 2.0).abs() < 1e-12);
    }

    #[test]
    fn all_floored_is_refused() {
        let s = ConvergenceSeries::new(
            ResolutionKind::Partitions,
            vec![1.0, 2.0, 3.0, 4.0],
            vec![1e-16; 4],
            None,
        )
        .unwrap();
        assert!(matches!(
            fit_rate(&s, DEFAULT_FLOOR),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn single_point_is_refused() {
        let s = ConvergenceSeries::new(
            ResolutionKind::TimeStep,
            vec![0.1],
            vec![0.3],
            Some(vec![1e-3]),
        )
        .unwrap();
        assert!(fit_rate(&s, DEFAULT_FLOOR).is_err());
        assert!(fit_timing(&s).is_err());
    }

    #[test]
    fn geometric_decay_steepens_with_resolution() {
        // e = 0.5^N against log N has a local slope of N ln 0.5 / ln 10 * ln 10.
        let geo = |lo: usize, hi: usize| {
            let ns: Vec<f64> = (lo..=hi).map(|n| n as f64).collect();
            let e: Vec<f64> = ns.iter().map(|n| 0.5f64.powf(*n)).collect();
            fit_loglog(&ns, &e, 0.0).unwrap().slope
        };
        let early = geo(5, 10);
        let late = geo(20, 40);
        assert!(late < early && early < 0.0);
    }

    #[test]
    fn report_format() {
        let fit = fit_rate(&power_law(1.0, -1.0, &[1.0, 2.0, 4.0]), 0.0).unwrap();
        let text = fit.to_string();
        for key in ["slope=", "intercept=", "window=", "residual=", "floored="] {
            assert!(text.contains(key), "{text}");
        }
    }

    proptest! {
        #[test]
        fn recovers_any_power_law(c in 1e-6f64..1e3, p in -4.0f64..4.0) {
            let ns = [3.0f64, 7.0, 19.0, 50.0, 130.0];
            let e: Vec<f64> = ns.iter().map(|n| c * n.powf(p)).collect();
            let fit = fit_loglog(&ns, &e, 0.0).unwrap();
            prop_assert!((fit.slope - p).abs() < 1e-9);
            prop_assert!((fit.intercept - c.log10()).abs() < 1e-9);
            prop_assert!(fit.max_residual < 1e-10);
        }
    }
}
