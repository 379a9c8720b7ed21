//! Error metrics, rate fitting, restriction and timing shared by every study.

mod fit;
mod metrics;
mod series;
mod timing;

pub use fit::{fit_loglog, fit_rate, fit_timing, RateFit, DEFAULT_FLOOR};
pub use metrics::{
    abs_rel_error, field_error, field_rel_inf_error, restrict, ErrorPair, Norm, ZERO_DENOMINATOR,
};
pub use series::{ConvergenceSeries, ResolutionKind};
pub use timing::{median, time_scaling, timed, timed_median};
