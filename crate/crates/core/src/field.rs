use crate::error::{Error, Result};

/// Scalar field on a periodic, node-based `n x n` grid with nodes at `(i h, j h)`.
///
/// Storage is row-major in `y`: entry `(i, j)` lives at `j * n + i`, so `x`
/// varies fastest (the order legacy VTK structured points expect).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    n: usize,
    h: f64,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(n: usize, h: f64) -> Self {
        Self {
            n,
            h,
            data: vec![0.0; n * n],
        }
    }

    pub fn constant(n: usize, h: f64, value: f64) -> Self {
        Self {
            n,
            h,
            data: vec![value; n * n],
        }
    }

    pub fn from_vec(n: usize, h: f64, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        Ok(Self { n, h, data })
    }

    /// Samples `f(x, y)` at every grid node.
    pub fn from_fn(n: usize, h: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                data.push(f(i as f64 * h, j as f64 * h));
            }
        }
        Self { n, h, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Side length of the periodic domain.
    pub fn side(&self) -> f64 {
        self.h * self.n as f64
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[j * self.n + i] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.data[j * self.n + i] += value;
    }

    /// Value at wrapped indices.
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        let n = self.n as isize;
        self.get(i.rem_euclid(n) as usize, j.rem_euclid(n) as usize)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn same_shape(&self, other: &Field) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }
}
