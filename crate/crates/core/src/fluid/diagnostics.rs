use super::solver::FluidState;
use crate::field::Field;

/// Centered periodic divergence `du/dx + dv/dy`.
pub fn divergence(state: &FluidState) -> Field {
    let (u, v) = (&state.u, &state.v);
    let n = u.n();
    let inv = 1.0 / (2.0 * u.h());
    let mut out = Field::zeros(n, u.h());
    for j in 0..n {
        let (jp, jm) = ((j + 1) % n, (j + n - 1) % n);
        for i in 0..n {
            let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
            out.set(
                i,
                j,
                (u.get(ip, j) - u.get(im, j)) * inv + (v.get(i, jp) - v.get(i, jm)) * inv,
            );
        }
    }
    out
}

/// Centered periodic vorticity `dv/dx - du/dy`.
pub fn vorticity(state: &FluidState) -> Field {
    let (u, v) = (&state.u, &state.v);
    let n = u.n();
    let inv = 1.0 / (2.0 * u.h());
    let mut out = Field::zeros(n, u.h());
    for j in 0..n {
        let (jp, jm) = ((j + 1) % n, (j + n - 1) % n);
        for i in 0..n {
            let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
            out.set(
                i,
                j,
                (v.get(ip, j) - v.get(im, j)) * inv - (u.get(i, jp) - u.get(i, jm)) * inv,
            );
        }
    }
    out
}

pub fn max_speed(state: &FluidState) -> f64 {
    state
        .u
        .as_slice()
        .iter()
        .zip(state.v.as_slice())
        .map(|(a, b)| a.hypot(*b))
        .fold(0.0, f64::max)
}

/// `sum (u^2 + v^2) h^2`.
pub fn kinetic_energy(state: &FluidState) -> f64 {
    let h = state.h();
    state
        .u
        .as_slice()
        .iter()
        .zip(state.v.as_slice())
        .map(|(a, b)| a * a + b * b)
        .sum::<f64>()
        * h
        * h
}
