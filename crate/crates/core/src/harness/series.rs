use crate::error::{Error, Result};

/// What the resolution axis of a series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionKind {
    /// Number of sequence terms; larger is finer.
    Terms,
    /// Number of quadrature partitions; larger is finer.
    Partitions,
    /// Grid points per side; larger is finer.
    GridPoints,
    /// Time step; smaller is finer.
    TimeStep,
    /// Grid spacing; smaller is finer.
    Spacing,
}

impl ResolutionKind {
    /// Whether refinement means a larger resolution value.
    pub fn finer_is_larger(self) -> bool {
        matches!(
            self,
            ResolutionKind::Terms | ResolutionKind::Partitions | ResolutionKind::GridPoints
        )
    }

    /// Converts a fitted log-log slope into an order of convergence, so that
    /// order 2 always means error proportional to the step size squared.
    pub fn order_from_slope(self, slope: f64) -> f64 {
        if self.finer_is_larger() {
            -slope
        } else {
            slope
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ResolutionKind::Terms => "terms",
            ResolutionKind::Partitions => "partitions",
            ResolutionKind::GridPoints => "grid_points",
            ResolutionKind::TimeStep => "time_step",
            ResolutionKind::Spacing => "spacing",
        }
    }
}

/// Ordered `(resolution, error, wall time)` triples for one study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    kind: ResolutionKind,
    resolution: Vec<f64>,
    error: Vec<f64>,
    wall_time: Option<Vec<f64>>,
}

impl ConvergenceSeries {
    pub fn new(
        kind: ResolutionKind,
        resolution: Vec<f64>,
        error: Vec<f64>,
        wall_time: Option<Vec<f64>>,
    ) -> Result<Self> {
        if resolution.len() != error.len() {
            return Err(Error::DimensionMismatch {
                expected: resolution.len(),
                actual: error.len(),
            });
        }
        if let Some(w) = &wall_time {
            if w.len() != resolution.len() {
                return Err(Error::DimensionMismatch {
                    expected: resolution.len(),
                    actual: w.len(),
                });
            }
        }
        let increasing = resolution.windows(2).all(|w| w[1] > w[0]);
        let decreasing = resolution.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidArgument(
                "resolutions must be strictly monotone".into(),
            ));
        }
        if let Some(e) = error.iter().find(|e| !(**e >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "errors must be nonnegative, got {e}"
            )));
        }
        Ok(Self {
            kind,
            resolution,
            error,
            wall_time,
        })
    }

    pub fn kind(&self) -> ResolutionKind {
        self.kind
    }

    pub fn resolution(&self) -> &[f64] {
        &self.resolution
    }

    pub fn error(&self) -> &[f64] {
        &self.error
    }

    pub fn wall_time(&self) -> Option<&[f64]> {
        self.wall_time.as_deref()
    }

    pub fn len(&self) -> usize {
        self.resolution.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resolution.is_empty()
    }

    /// Keeps only the entries whose resolution lies in `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.resolution[i] >= lo && self.resolution[i] <= hi)
            .collect();
        let pick = |v: &[f64]| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(
            self.kind,
            pick(&self.resolution),
            pick(&self.error),
            self.wall_time.as_deref().map(pick),
        )
    }
}
