use crate::error::{Error, Result};
use crate::field::Field;

/// Denominators below this make a relative error undefined.
pub const ZERO_DENOMINATOR: f64 = 1.0e-300;

/// Absolute and relative difference of a coarse value from a fine one.
/// `relative` is `None` when the fine value is effectively zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub absolute: f64,
    pub relative: Option<f64>,
}

pub fn abs_rel_error(fine: f64, coarse: f64) -> ErrorPair {
    let absolute = (fine - coarse).abs();
    let relative = (fine.abs() >= ZERO_DENOMINATOR).then(|| absolute / fine.abs());
    ErrorPair { absolute, relative }
}

/// Injection from a nested fine grid: `coarse(i, j) = fine(i r, j r)`.
pub fn restrict(fine: &Field, ratio: usize) -> Result<Field> {
    let n = fine.n();
    if ratio == 0 || !n.is_multiple_of(ratio) {
        return Err(Error::InvalidArgument(format!(
            "grid size {n} is not divisible by restriction ratio {ratio}"
        )));
    }
    let nc = n / ratio;
    let mut coarse = Field::zeros(nc, fine.h() * ratio as f64);
    for j in 0..nc {
        for i in 0..nc {
            coarse.set(i, j, fine.get(i * ratio, j * ratio));
        }
    }
    Ok(coarse)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

impl Norm {
    pub fn label(self) -> &'static str {
        match self {
            Norm::L1 => "L1",
            Norm::L2 => "L2",
            Norm::Inf => "Linf",
        }
    }
}

fn restricted_to(fine: &Field, coarse: &Field) -> Result<Field> {
    let (nf, nc) = (fine.n(), coarse.n());
    if nc == 0 || nf % nc != 0 {
        return Err(Error::DimensionMismatch {
            expected: nf,
            actual: nc,
        });
    }
    restrict(fine, nf / nc)
}

/// Norm of `restrict(fine) - coarse` on the coarse grid, weighting each cell
/// by the coarse cell area for the finite norms.
pub fn field_error(fine: &Field, coarse: &Field, norm: Norm) -> Result<f64> {
    let reduced = restricted_to(fine, coarse)?;
    let h2 = coarse.h() * coarse.h();
    let diffs = reduced
        .as_slice()
        .iter()
        .zip(coarse.as_slice())
        .map(|(a, b)| (a - b).abs());
    Ok(match norm {
        Norm::L1 => diffs.map(|d| d * h2).sum(),
        Norm::L2 => diffs.map(|d| d * d * h2).sum::<f64>().sqrt(),
        Norm::Inf => diffs.fold(0.0, f64::max),
    })
}

/// Largest pointwise relative difference; nodes where the restricted fine
/// value is effectively zero are skipped, and `None` means no node qualified.
pub fn field_rel_inf_error(fine: &Field, coarse: &Field) -> Result<Option<f64>> {
    let reduced = restricted_to(fine, coarse)?;
    Ok(reduced
        .as_slice()
        .iter()
        .zip(coarse.as_slice())
        .filter_map(|(&f, &c)| abs_rel_error(f, c).relative)
        .reduce(f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn abs_rel_cases() {
        assert_eq!(
            abs_rel_error(1.0, 1.0),
            ErrorPair {
                absolute: 0.0,
                relative: Some(0.0)
            }
        );
        assert_eq!(
            abs_rel_error(2.0, 1.0),
            ErrorPair {
                absolute: 1.0,
                relative: Some(0.5)
            }
        );
        assert_eq!(
            abs_rel_error(0.0, 1.0),
            ErrorPair {
                absolute: 1.0,
                relative: None
            }
        );
    }

    #[test]
    fn restrict_identity_and_constant() {
        let f = Field::from_fn(8, 1.0, |x, y| x + 10.0 * y);
        assert_eq!(restrict(&f, 1).unwrap(), f);
        let c = Field::constant(16, 0.5, 3.25);
        let r = restrict(&c, 4).unwrap();
        assert_eq!(r.n(), 4);
        assert!(r.as_slice().iter().all(|&v| v == 3.25));
        assert!(restrict(&c, 3).is_err());
    }

    #[test]
    fn restrict_matches_direct_sampling() {
        let side = 8.0;
        let wave = |x: f64, _y: f64| (2.0 * PI * x / side).sin();
        let fine = Field::from_fn(128, side / 128.0, wave);
        let direct = Field::from_fn(32, side / 32.0, wave);
        assert_eq!(restrict(&fine, 4).unwrap(), direct);
    }

    #[test]
    fn unit_difference_norms() {
        let side = 8.0;
        for n in [16usize, 32, 64] {
            let h = side / n as f64;
            let fine = Field::constant(2 * n, h / 2.0, 1.0);
            let coarse = Field::zeros(n, h);
            assert_eq!(field_error(&fine, &coarse, Norm::L1).unwrap(), 64.0);
            assert_eq!(field_error(&fine, &coarse, Norm::L2).unwrap(), 8.0);
            assert_eq!(field_error(&fine, &coarse, Norm::Inf).unwrap(), 1.0);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let fine = Field::zeros(10, 0.1);
        let coarse = Field::zeros(3, 0.3);
        assert!(field_error(&fine, &coarse, Norm::L2).is_err());
    }

    #[test]
    fn relative_inf_skips_zero_denominators() {
        let fine = Field::from_vec(2, 1.0, vec![0.0, 2.0, 4.0, 0.0]).unwrap();
        let coarse = Field::from_vec(2, 1.0, vec![1.0, 1.0, 3.0, 5.0]).unwrap();
        assert_eq!(field_rel_inf_error(&fine, &coarse).unwrap(), Some(0.5));
        let zero = Field::zeros(2, 1.0);
        assert_eq!(field_rel_inf_error(&zero, &coarse).unwrap(), None);
    }

    fn field_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0f64..10.0, n * n)
    }

    proptest! {
        #[test]
        fn restriction_composes(data in field_strategy(24)) {
            let f = Field::from_vec(24, 0.25, data).unwrap();
            let twice = restrict(&restrict(&f, 2).unwrap(), 3).unwrap();
            prop_assert_eq!(twice, restrict(&f, 6).unwrap());
        }

        #[test]
        fn l2_bounded_by_inf_times_side(a in field_strategy(16), b in field_strategy(8)) {
            let fine = Field::from_vec(16, 0.5, a).unwrap();
            let coarse = Field::from_vec(8, 1.0, b).unwrap();
            let l2 = field_error(&fine, &coarse, Norm::L2).unwrap();
            let inf = field_error(&fine, &coarse, Norm::Inf).unwrap();
            prop_assert!(l2 <= inf * coarse.side() * (1.0 + 1e-12));
        }

        #[test]
        fn norms_scale_and_vanish(a in field_strategy(8), s in -5.0f64..5.0) {
            let zero = Field::zeros(8, 1.0);
            let diff = Field::from_vec(8, 1.0, a.clone()).unwrap();
            let scaled = Field::from_vec(8, 1.0, a.iter().map(|v| v * s).collect()).unwrap();
            let negated = Field::from_vec(8, 1.0, a.iter().map(|v| -v).collect()).unwrap();
            for norm in [Norm::L1, Norm::L2, Norm::Inf] {
                let base = field_error(&diff, &zero, norm).unwrap();
                prop_assert_eq!(field_error(&diff, &diff, norm).unwrap(), 0.0);
                prop_assert_eq!(field_error(&negated, &zero, norm).unwrap(), base);
                let sc = field_error(&scaled, &zero, norm).unwrap();
                prop_assert!((sc - s.abs() * base).abs() <= 1e-12 * (1.0 + base * s.abs()));
            }
        }
    }
}
