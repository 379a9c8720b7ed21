use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Linear spring between a master and a slave node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spring {
    pub master: usize,
    pub slave: usize,
    pub stiffness: f64,
    pub rest_length: f64,
}

/// Three-node beam resisting deviation of `X_L - 2 X_M + X_R` from a stored
/// preferred second difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub left: usize,
    pub middle: usize,
    pub right: usize,
    pub stiffness: f64,
    pub curvature: Point,
}

/// Penalty tether of a node to a fixed anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub node: usize,
    pub stiffness: f64,
    pub anchor: Point,
}

/// Lagrangian structure: node positions plus fiber connectivity.
///
/// Muscles are springs whose rest length is supplied at evaluation time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LagrangianMesh {
    pub positions: Vec<Point>,
    pub ds: f64,
    pub springs: Vec<Spring>,
    pub beams: Vec<Beam>,
    pub targets: Vec<Target>,
    pub muscles: Vec<Spring>,
}

impl LagrangianMesh {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks index ranges, stiffness signs and finiteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.positions.len();
        let check = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange {
                    index: i,
                    max: n.saturating_sub(1),
                })
            }
        };
        let nonneg = |what: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be finite and >= 0, got {v}")))
            }
        };
        for s in self.springs.iter().chain(&self.muscles) {
            check(s.master)?;
            check(s.slave)?;
            nonneg("spring stiffness", s.stiffness)?;
            nonneg("resting length", s.rest_length)?;
        }
        for b in &self.beams {
            check(b.left)?;
            check(b.middle)?;
            check(b.right)?;
            nonneg("beam stiffness", b.stiffness)?;
        }
        for t in &self.targets {
            check(t.node)?;
            nonneg("target stiffness", t.stiffness)?;
        }
        if let Some(p) = self.positions.iter().find(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidArgument(format!("non-finite node position {p:?}")));
        }
        Ok(())
    }
}

#[inline]
fn spring_pair(
    positions: &[Point],
    spring: &Spring,
    rest_length: f64,
    forces: &mut [Point],
) -> Result<()> {
    let xm = positions[spring.master];
    let xs = positions[spring.slave];
    let d = [xm[0] - xs[0], xm[1] - xs[1]];
    let len = d[0].hypot(d[1]);
    if len == 0.0 {
        return Err(Error::SingularSpring(spring.master, spring.slave));
    }
    let c = -spring.stiffness * (1.0 - rest_length / len);
    let f = [c * d[0], c * d[1]];
    forces[spring.master][0] += f[0];
    forces[spring.master][1] += f[1];
    forces[spring.slave][0] -= f[0];
    forces[spring.slave][1] -= f[1];
    Ok(())
}

/// Adds `-k (1 - R/|X_S - X_M|) (X_M - X_S)` to each master and the opposite
/// force to its slave.
pub fn spring_force(mesh: &LagrangianMesh, forces: &mut [Point]) -> Result<()> {
    for s in &mesh.springs {
        spring_pair(&mesh.positions, s, s.rest_length, forces)?;
    }
    Ok(())
}

/// Muscle springs with rest lengths `rest_length(spring)` evaluated now.
pub fn muscle_force(
    mesh: &LagrangianMesh,
    rest_length: impl Fn(&Spring) -> f64,
    forces: &mut [Point],
) -> Result<()> {
    for s in &mesh.muscles {
        spring_pair(&mesh.positions, s, rest_length(s), forces)?;
    }
    Ok(())
}

/// Discrete bending force. For each triple the discrepancy
/// `D = X_L - 2 X_M + X_R - C` contributes `-k D` to both ends and `+2 k D`
/// to the middle, which is the negative gradient of `k |D|^2 / 2`.
pub fn beam_force(mesh: &LagrangianMesh, forces: &mut [Point]) {
    let x = &mesh.positions;
    for b in &mesh.beams {
        let (l, m, r) = (x[b.left], x[b.middle], x[b.right]);
        let d = [
            l[0] - 2.0 * m[0] + r[0] - b.curvature[0],
            l[1] - 2.0 * m[1] + r[1] - b.curvature[1],
        ];
        let k = b.stiffness;
        for c in 0..2 {
            forces[b.left][c] -= k * d[c];
            forces[b.middle][c] += 2.0 * k * d[c];
            forces[b.right][c] -= k * d[c];
        }
    }
}

/// Adds `k (Y - X)` at every tethered node.
pub fn target_force(mesh: &LagrangianMesh, forces: &mut [Point]) {
    for t in &mesh.targets {
        let x = mesh.positions[t.node];
        forces[t.node][0] += t.stiffness * (t.anchor[0] - x[0]);
        forces[t.node][1] += t.stiffness * (t.anchor[1] - x[1]);
    }
}
