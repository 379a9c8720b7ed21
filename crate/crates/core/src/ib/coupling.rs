use super::fibers::Point;
use super::kernel::delta_phi;
use crate::error::{Error, Result};
use crate::field::Field;

/// Periodic square Eulerian grid with `n` nodes per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub side: f64,
}

impl Grid {
    pub fn new(n: usize, side: f64) -> Self {
        Self { n, side }
    }

    pub fn h(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn zeros(&self) -> Field {
        Field::zeros(self.n, self.h())
    }
}

/// Eulerian force density (force per unit area).
#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    pub fx: Field,
    pub fy: Field,
}

impl ForceField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            fx: grid.zeros(),
            fy: grid.zeros(),
        }
    }

    pub fn h(&self) -> f64 {
        self.fx.h()
    }
}

/// Maps a position into the periodic box `[0, side)^2`.
pub fn wrap_position(p: Point, side: f64) -> Point {
    let wrap = |c: f64| {
        let w = c.rem_euclid(side);
        // rem_euclid can round up to `side` for tiny negative inputs.
        if w >= side {
            0.0
        } else {
            w
        }
    };
    [wrap(p[0]), wrap(p[1])]
}

/// Node indices and kernel weights of the 4-point stencil along one axis.
#[inline]
fn stencil(coord: f64, h: f64, n: usize) -> ([usize; 4], [f64; 4]) {
    let s = coord / h;
    let base = s.floor() as isize - 1;
    let mut idx = [0usize; 4];
    let mut w = [0.0; 4];
    for k in 0..4 {
        let node = base + k as isize;
        idx[k] = node.rem_euclid(n as isize) as usize;
        w[k] = delta_phi(s - node as f64);
    }
    (idx, w)
}

/// Spreads Lagrangian force densities (per unit length) onto the grid:
/// `F(x_ij) = sum_s f_s delta_h(x_ij - X_s) ds` with
/// `delta_h = phi(x/h) phi(y/h) / h^2`.
pub fn spread(positions: &[Point], forces: &[Point], ds: f64, grid: &Grid) -> Result<ForceField> {
    if positions.len() != forces.len() {
        return Err(Error::DimensionMismatch {
            expected: positions.len(),
            actual: forces.len(),
        });
    }
    let h = grid.h();
    let scale = ds / (h * h);
    let mut out = ForceField::zeros(grid);
    for (p, f) in positions.iter().zip(forces) {
        if !(f[0].is_finite() && f[1].is_finite()) {
            return Err(Error::NonFinite {
                x: p[0],
                value: if f[0].is_finite() { f[1] } else { f[0] },
            });
        }
        let q = wrap_position(*p, grid.side);
        let (ix, wx) = stencil(q[0], h, grid.n);
        let (iy, wy) = stencil(q[1], h, grid.n);
        for b in 0..4 {
            for a in 0..4 {
                let w = wx[a] * wy[b] * scale;
                out.fx.add(ix[a], iy[b], f[0] * w);
                out.fy.add(ix[a], iy[b], f[1] * w);
            }
        }
    }
    Ok(out)
}

/// Interpolates grid velocities to Lagrangian points:
/// `U(X_s) = sum_ij u_ij delta_h(x_ij - X_s) h^2`.
pub fn interp(u: &Field, v: &Field, positions: &[Point]) -> Result<Vec<Point>> {
    u.same_shape(v)?;
    if !(u.is_finite() && v.is_finite()) {
        return Err(Error::InvalidArgument("velocity field is not finite".into()));
    }
    let (n, h) = (u.n(), u.h());
    let side = u.side();
    Ok(positions
        .iter()
        .map(|p| {
            let q = wrap_position(*p, side);
            let (ix, wx) = stencil(q[0], h, n);
            let (iy, wy) = stencil(q[1], h, n);
            let mut acc = [0.0; 2];
            for b in 0..4 {
                for a in 0..4 {
                    let w = wx[a] * wy[b];
                    acc[0] += u.get(ix[a], iy[b]) * w;
                    acc[1] += v.get(ix[a], iy[b]) * w;
                }
            }
            acc
        })
        .collect())
}
