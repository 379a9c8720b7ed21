use std::f64::consts::{FRAC_PI_2, PI};

use super::config::SimConfig;
use crate::error::{Error, Result};
use crate::ib::{Beam, LagrangianMesh, Point, Spring, Target};

/// Arclength spanned by one beam, as a fraction of the bell width.
pub const BEAM_SPAN: f64 = 0.125;

/// Samples used to tabulate the arclength of the bell profile.
const ARC_SAMPLES: usize = 8192;

/// A mesh together with the nodes that make up the swimming body.
#[derive(Debug, Clone, PartialEq)]
pub struct Swimmer {
    pub mesh: LagrangianMesh,
    /// Body nodes, in order; every other node is a wall point.
    pub bell_nodes: Vec<usize>,
    /// Tracked node: the highest body node at `t = 0`.
    pub apex: usize,
}

impl Swimmer {
    /// Wraps a loaded mesh. Nodes tethered by targets are treated as wall,
    /// everything else as body.
    pub fn from_mesh(mesh: LagrangianMesh) -> Result<Self> {
        mesh.validate()?;
        let tethered: std::collections::HashSet<usize> =
            mesh.targets.iter().map(|t| t.node).collect();
        let bell_nodes: Vec<usize> = (0..mesh.len()).filter(|i| !tethered.contains(i)).collect();
        let apex = *bell_nodes
            .iter()
            .max_by(|&&a, &&b| mesh.positions[a][1].total_cmp(&mesh.positions[b][1]).then(b.cmp(&a)))
            .ok_or_else(|| Error::InvalidArgument("geometry has no untethered nodes".into()))?;
        Ok(Self {
            mesh,
            bell_nodes,
            apex,
        })
    }
}

/// Smooth activation `(1 - cos(2 pi f t)) / 2`, zero at rest and one at full
/// contraction.
pub fn activation(t: f64, freq: f64) -> f64 {
    0.5 * (1.0 - (2.0 * PI * freq * t).cos())
}

/// Muscle resting length at time `t` for a muscle whose relaxed length is
/// `r_max`.
pub fn muscle_rest_length(t: f64, r_max: f64, cfg: &SimConfig) -> f64 {
    let r_min = cfg.contraction_fraction * r_max;
    r_max - (r_max - r_min) * activation(t, cfg.freq)
}

/// Bell centre: horizontally centred, three eighths of the way up.
pub fn bell_center(cfg: &SimConfig) -> Point {
    [0.5 * cfg.side, 0.375 * cfg.side]
}

/// Height of the wall of target points.
pub fn wall_height(cfg: &SimConfig) -> f64 {
    cfg.side * (15.0 / 16.0)
}

/// Offsets `(dx, dy)` from the centre of points at equal arclength along the
/// quarter ellipse, running from the apex (`j = 0`) to the margin.
fn quarter_profile(a: f64, b: f64, target_ds: f64) -> (Vec<Point>, f64) {
    // theta runs from pi/2 (apex) down to 0 (margin).
    let point = |theta: f64| [a * theta.cos(), b * theta.sin()];
    let mut arc = Vec::with_capacity(ARC_SAMPLES + 1);
    arc.push(0.0);
    let mut prev = point(FRAC_PI_2);
    for k in 1..=ARC_SAMPLES {
        let p = point(FRAC_PI_2 * (1.0 - k as f64 / ARC_SAMPLES as f64));
        let last = *arc.last().unwrap();
        arc.push(last + (p[0] - prev[0]).hypot(p[1] - prev[1]));
        prev = p;
    }
    let total = arc[ARC_SAMPLES];
    let segments = ((total / target_ds).round() as usize).max(1);
    let ds = total / segments as f64;
    let mut out = Vec::with_capacity(segments + 1);
    for j in 0..=segments {
        let s = j as f64 * ds;
        let k = arc.partition_point(|&v| v < s).clamp(1, ARC_SAMPLES);
        let frac = (s - arc[k - 1]) / (arc[k] - arc[k - 1]);
        let u = (k as f64 - 1.0 + frac) / ARC_SAMPLES as f64;
        let theta = FRAC_PI_2 * (1.0 - u);
        out.push(point(theta));
    }
    out[0] = [0.0, b];
    out[segments] = [a, 0.0];
    (out, ds)
}

/// Builds the semi-elliptical bell with its springs, beams, margin muscles
/// and a row of target points near the top of the domain.
pub fn build_bell(cfg: &SimConfig) -> Result<Swimmer> {
    cfg.validate()?;
    let (a, b, side) = (cfg.bell_a, cfg.bell_b, cfg.side);
    let h = cfg.h();
    let [cx, cy] = bell_center(cfg);
    let wall_y = wall_height(cfg);
    if 2.0 * a >= side / 2.0 {
        return Err(Error::InvalidArgument(format!(
            "bell width {} must be below half the domain ({})",
            2.0 * a,
            side / 2.0
        )));
    }
    if cy + b >= wall_y - 4.0 * h || cy - 4.0 * h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bell of height {b} does not fit between y = 0 and the wall at {wall_y}"
        )));
    }

    let (quarter, ds) = quarter_profile(a, b, cfg.ds_factor * h);
    let half = quarter.len() - 1;
    let count = 2 * half + 1;
    let mut positions = vec![[0.0; 2]; count];
    for (j, d) in quarter.iter().enumerate() {
        positions[half + j] = [cx + d[0], cy + d[1]];
        positions[half - j] = [cx - d[0], cy + d[1]];
    }
    let dist = |p: Point, q: Point| (p[0] - q[0]).hypot(p[1] - q[1]);

    let springs = (0..count - 1)
        .map(|i| Spring {
            master: i,
            slave: i + 1,
            stiffness: cfg.k_spring_scale / ds,
            rest_length: dist(positions[i], positions[i + 1]),
        })
        .collect();

    let stride = ((BEAM_SPAN * cfg.char_length / ds).round() as usize).clamp(1, half.max(1));
    let span = stride as f64 * ds;
    let beams = (stride..count.saturating_sub(stride))
        .map(|m| {
            let (l, r) = (positions[m - stride], positions[m + stride]);
            let x = positions[m];
            Beam {
                left: m - stride,
                middle: m,
                right: m + stride,
                stiffness: cfg.k_beam_scale / span.powi(4),
                curvature: [l[0] - 2.0 * x[0] + r[0], l[1] - 2.0 * x[1] + r[1]],
            }
        })
        .collect();

    let muscles = (1..=half)
        .filter(|&j| quarter[j][1] <= 0.5 * b)
        .map(|j| Spring {
            master: half - j,
            slave: half + j,
            stiffness: cfg.k_muscle,
            rest_length: 2.0 * quarter[j][0],
        })
        .collect();

    let spacing = cfg.ds_factor * h;
    let wall_count = (side / spacing).round() as usize;
    let mut targets = Vec::with_capacity(wall_count);
    for k in 0..wall_count {
        let p = [k as f64 * side / wall_count as f64, wall_y];
        targets.push(Target {
            node: positions.len(),
            stiffness: cfg.k_target,
            anchor: p,
        });
        positions.push(p);
    }

    let mesh = LagrangianMesh {
        positions,
        ds,
        springs,
        beams,
        targets,
        muscles,
    };
    mesh.validate()?;
    Ok(Swimmer {
        mesh,
        bell_nodes: (0..count).collect(),
        apex: half,
    })
}
