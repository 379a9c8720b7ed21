use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Square 2D complex FFT built from row transforms and a transpose.
pub(crate) struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl Fft2 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            n,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            transposed: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    fn transpose_in_place(&mut self, data: &mut [Complex64]) {
        let n = self.n;
        for j in 0..n {
            for i in 0..n {
                self.transposed[i * n + j] = data[j * n + i];
            }
        }
        data.copy_from_slice(&self.transposed);
    }

    fn run(&mut self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inverse } else { &self.forward };
        let plan = Arc::clone(plan);
        plan.process_with_scratch(data, &mut self.scratch);
        self.transpose_in_place(data);
        plan.process_with_scratch(data, &mut self.scratch);
        self.transpose_in_place(data);
    }

    pub(crate) fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// Inverse transform including the `1 / n^2` normalization.
    pub(crate) fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
        let scale = 1.0 / (self.n * self.n) as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}
