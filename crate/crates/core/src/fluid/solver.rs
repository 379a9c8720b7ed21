use std::f64::consts::PI;

use num_complex::Complex64;

use super::diagnostics::max_speed;
use super::fft2::Fft2;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ib::ForceField;

/// Velocity and pressure on an `n x n` periodic grid of side `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub u: Field,
    pub v: Field,
    pub p: Field,
}

impl FluidState {
    pub fn at_rest(n: usize, side: f64) -> Self {
        let h = side / n as f64;
        Self {
            u: Field::zeros(n, h),
            v: Field::zeros(n, h),
            p: Field::zeros(n, h),
        }
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn h(&self) -> f64 {
        self.u.h()
    }

    pub fn side(&self) -> f64 {
        self.u.side()
    }

    fn check(&self) -> Result<()> {
        self.u.same_shape(&self.v)?;
        self.u.same_shape(&self.p)?;
        if !(self.u.is_finite() && self.v.is_finite()) {
            return Err(Error::InvalidArgument("velocity field is not finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub rho: f64,
    pub mu: f64,
    pub dt: f64,
}

impl FluidParams {
    pub fn validate(&self) -> Result<()> {
        if self.rho > 0.0 && self.mu > 0.0 && self.dt > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "density, viscosity and time step must be positive: {self:?}"
            )))
        }
    }
}

/// Reusable workspace for advancing one grid size.
///
/// Each step computes `w = u + dt (F / rho - A(u))` with the skew-symmetric
/// centered advection `A`, then in Fourier space projects `w` onto the
/// discretely divergence-free subspace (centered-difference gradient symbol)
/// and applies implicit diffusion `1 / (1 + nu dt lambda)` with the 5-point
/// Laplacian symbol `lambda`.
pub struct FluidSolver {
    n: usize,
    h: f64,
    params: FluidParams,
    fft: Fft2,
    grad_symbol: Vec<f64>,
    lap_symbol: Vec<f64>,
    wx: Vec<Complex64>,
    wy: Vec<Complex64>,
    wp: Vec<Complex64>,
    adv_x: Vec<f64>,
    adv_y: Vec<f64>,
}

impl FluidSolver {
    pub fn new(n: usize, side: f64, params: FluidParams) -> Result<Self> {
        params.validate()?;
        if n < 4 {
            return Err(Error::InvalidArgument(format!("grid size {n} is below 4")));
        }
        let h = side / n as f64;
        // sin(2 pi m / n) vanishes exactly for the zero and Nyquist modes.
        let grad_symbol = (0..n)
            .map(|m| {
                if m == 0 || 2 * m == n {
                    0.0
                } else {
                    (2.0 * PI * m as f64 / n as f64).sin() / h
                }
            })
            .collect();
        let lap_symbol = (0..n)
            .map(|m| {
                let s = (PI * m as f64 / n as f64).sin();
                4.0 * s * s / (h * h)
            })
            .collect();
        let zero = Complex64::new(0.0, 0.0);
        Ok(Self {
            n,
            h,
            params,
            fft: Fft2::new(n),
            grad_symbol,
            lap_symbol,
            wx: vec![zero; n * n],
            wy: vec![zero; n * n],
            wp: vec![zero; n * n],
            adv_x: vec![0.0; n * n],
            adv_y: vec![0.0; n * n],
        })
    }

    pub fn params(&self) -> &FluidParams {
        &self.params
    }

    /// 5-point Laplacian symbol of Fourier mode `(mx, my)`.
    pub fn laplacian_symbol(&self, mx: usize, my: usize) -> f64 {
        self.lap_symbol[mx % self.n] + self.lap_symbol[my % self.n]
    }

    fn advection(&mut self, u: &Field, v: &Field) {
        let n = self.n;
        let inv = 1.0 / (2.0 * self.h);
        let (us, vs) = (u.as_slice(), v.as_slice());
        for j in 0..n {
            let (jp, jm) = ((j + 1) % n * n, (j + n - 1) % n * n);
            let row = j * n;
            for i in 0..n {
                let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
                let c = row + i;
                let (uc, vc) = (us[c], vs[c]);
                let (ue, uw, un, usth) = (us[row + ip], us[row + im], us[jp + i], us[jm + i]);
                let (ve, vw, vn, vsth) = (vs[row + ip], vs[row + im], vs[jp + i], vs[jm + i]);
                // Advective form (u . grad) u.
                let ax = uc * (ue - uw) * inv + vc * (un - usth) * inv;
                let ay = uc * (ve - vw) * inv + vc * (vn - vsth) * inv;
                // Divergence form div(u u).
                let dx = (ue * ue - uw * uw) * inv + (vn * un - vsth * usth) * inv;
                let dy = (ue * ve - uw * vw) * inv + (vn * vn - vsth * vsth) * inv;
                self.adv_x[c] = 0.5 * (ax + dx);
                self.adv_y[c] = 0.5 * (ay + dy);
            }
        }
    }

    /// Advances `state` by one time step under `force` (or no force).
    pub fn step(&mut self, state: &mut FluidState, force: Option<&ForceField>) -> Result<()> {
        state.check()?;
        if state.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: state.n(),
            });
        }
        if let Some(f) = force {
            if f.fx.n() != self.n || f.fy.n() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    actual: f.fx.n(),
                });
            }
        }
        let FluidParams { rho, mu, dt } = self.params;
        let courant = max_speed(state) * dt / self.h;
        if courant > 1.0 {
            return Err(Error::Cfl { courant });
        }

        self.advection(&state.u, &state.v);
        let (us, vs) = (state.u.as_slice(), state.v.as_slice());
        for k in 0..self.n * self.n {
            let (fx, fy) = match force {
                Some(f) => (f.fx.as_slice()[k], f.fy.as_slice()[k]),
                None => (0.0, 0.0),
            };
            self.wx[k] = Complex64::new(us[k] + dt * (fx / rho - self.adv_x[k]), 0.0);
            self.wy[k] = Complex64::new(vs[k] + dt * (fy / rho - self.adv_y[k]), 0.0);
        }
        self.fft.forward(&mut self.wx);
        self.fft.forward(&mut self.wy);

        let nu_dt = mu * dt / rho;
        let n = self.n;
        for my in 0..n {
            let gy = self.grad_symbol[my];
            for mx in 0..n {
                let gx = self.grad_symbol[mx];
                let k = my * n + mx;
                let g2 = gx * gx + gy * gy;
                let (mut ax, mut ay) = (self.wx[k], self.wy[k]);
                let mut pressure = Complex64::new(0.0, 0.0);
                if g2 > 0.0 {
                    let gw = ax * gx + ay * gy;
                    // p = -(rho / dt) i (g . w) / |g|^2
                    pressure = Complex64::new(0.0, -rho / dt) * gw / g2;
                    ax -= gw * (gx / g2);
                    ay -= gw * (gy / g2);
                }
                let damp = 1.0 / (1.0 + nu_dt * (self.lap_symbol[mx] + self.lap_symbol[my]));
                self.wx[k] = ax * damp;
                self.wy[k] = ay * damp;
                self.wp[k] = pressure;
            }
        }

        self.fft.inverse(&mut self.wx);
        self.fft.inverse(&mut self.wy);
        self.fft.inverse(&mut self.wp);
        for (dst, src) in state.u.as_mut_slice().iter_mut().zip(&self.wx) {
            *dst = src.re;
        }
        for (dst, src) in state.v.as_mut_slice().iter_mut().zip(&self.wy) {
            *dst = src.re;
        }
        for (dst, src) in state.p.as_mut_slice().iter_mut().zip(&self.wp) {
            *dst = src.re;
        }
        Ok(())
    }
}

/// One step from `state` under `force`, returning the new state.
pub fn ns_step(state: &FluidState, force: &ForceField, params: &FluidParams) -> Result<FluidState> {
    let mut solver = FluidSolver::new(state.n(), state.side(), *params)?;
    let mut next = state.clone();
    solver.step(&mut next, Some(force))?;
    Ok(next)
}
