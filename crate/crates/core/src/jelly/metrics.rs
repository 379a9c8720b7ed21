use super::sim::SwimRecord;
use crate::error::{Error, Result};
use crate::harness::{abs_rel_error, field_error, restrict, Norm};

/// Average swimming speed: least-squares slope of the apex height over the
/// last two contraction cycles.
pub fn swim_speed(record: &SwimRecord) -> Result<f64> {
    let (Some(&t0), Some(&t1)) = (record.times.first(), record.times.last()) else {
        return Err(Error::InsufficientData("empty swim record".into()));
    };
    let window = 2.0 / record.freq;
    let slack = 0.5 * record.dt;
    if t1 - t0 + slack < window {
        return Err(Error::InsufficientData(format!(
            "record spans {:.6} time units, two cycles need {window:.6}",
            t1 - t0
        )));
    }
    let from = t1 - window - slack;
    let (mut n, mut st, mut sy) = (0.0, 0.0, 0.0);
    for (&t, &y) in record.times.iter().zip(&record.bell_top_y) {
        if t >= from {
            n += 1.0;
            st += t;
            sy += y;
        }
    }
    let (tm, ym) = (st / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&t, &y) in record.times.iter().zip(&record.bell_top_y) {
        if t >= from {
            sxx += (t - tm) * (t - tm);
            sxy += (t - tm) * (y - ym);
        }
    }
    Ok(sxy / sxx)
}

/// Thrust comparison between a coarse and a fine run.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrustError {
    pub times: Vec<f64>,
    /// `|T_fine ds_fine - T_coarse ds_coarse|` per aligned sample.
    pub absolute: Vec<f64>,
    /// Absolute error over `|T_fine ds_fine|`; `None` where that vanishes.
    pub relative: Vec<Option<f64>>,
    /// Error of the total thrust averaged over the final cycle.
    pub last_cycle_absolute: f64,
    pub last_cycle_relative: Option<f64>,
}

/// Index pairs `(fine, coarse)` of samples at matching times.
fn align(coarse: &[f64], fine: &[f64]) -> Result<Vec<(usize, usize)>> {
    if fine.len() < 2 || coarse.is_empty() {
        return Err(Error::Misaligned("records need at least two samples".into()));
    }
    let tol = 0.5 * (fine[1] - fine[0]);
    fine.iter()
        .enumerate()
        .map(|(i, &t)| {
            let k = coarse.partition_point(|&c| c < t);
            let best = [k.saturating_sub(1), k.min(coarse.len() - 1)]
                .into_iter()
                .min_by(|&a, &b| (coarse[a] - t).abs().total_cmp(&(coarse[b] - t).abs()))
                .unwrap();
            if (coarse[best] - t).abs() <= tol {
                Ok((i, best))
            } else {
                Err(Error::Misaligned(format!("no coarse sample near t = {t}")))
            }
        })
        .collect()
}

pub fn thrust_error(coarse: &SwimRecord, fine: &SwimRecord) -> Result<ThrustError> {
    if coarse.freq != fine.freq {
        return Err(Error::Misaligned(format!(
            "frequencies differ: {} vs {}",
            coarse.freq, fine.freq
        )));
    }
    let pairs = align(&coarse.times, &fine.times)?;
    let (fine_total, coarse_total): (Vec<f64>, Vec<f64>) = pairs
        .iter()
        .map(|&(i, k)| (fine.thrust[i] * fine.ds, coarse.thrust[k] * coarse.ds))
        .unzip();
    let mut out = ThrustError {
        times: pairs.iter().map(|&(i, _)| fine.times[i]).collect(),
        absolute: Vec::with_capacity(pairs.len()),
        relative: Vec::with_capacity(pairs.len()),
        last_cycle_absolute: 0.0,
        last_cycle_relative: None,
    };
    for (&f, &c) in fine_total.iter().zip(&coarse_total) {
        let e = abs_rel_error(f, c);
        out.absolute.push(e.absolute);
        out.relative.push(e.relative);
    }
    let t_end = *out.times.last().unwrap();
    let from = t_end - 1.0 / fine.freq - 0.5 * fine.dt;
    let mut count = 0.0;
    let (mut fsum, mut csum) = (0.0, 0.0);
    for (j, &t) in out.times.iter().enumerate() {
        if t >= from {
            count += 1.0;
            fsum += fine_total[j];
            csum += coarse_total[j];
        }
    }
    let last = abs_rel_error(fsum / count, csum / count);
    out.last_cycle_absolute = last.absolute;
    out.last_cycle_relative = last.relative;
    Ok(out)
}

/// Which Eulerian field to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    V,
    P,
}

/// Norm of the difference between a coarse run's field and the fine run's
/// field restricted to the coarse grid, at the snapshots nearest `time`.
pub fn eulerian_error(
    coarse: &SwimRecord,
    fine: &SwimRecord,
    time: f64,
    component: Component,
    norm: Norm,
) -> Result<f64> {
    fn pick(r: &SwimRecord, time: f64) -> Result<&super::sim::Snapshot> {
        r.snapshot_near(time)
            .ok_or_else(|| Error::Misaligned(format!("N = {} has no snapshot near t = {time}", r.n)))
    }
    let (sc, sf) = (pick(coarse, time)?, pick(fine, time)?);
    if (sc.time - sf.time).abs() > 0.5 * coarse.dt.max(fine.dt) {
        return Err(Error::Misaligned(format!(
            "snapshot times differ: {} vs {}",
            sc.time, sf.time
        )));
    }
    if !fine.n.is_multiple_of(coarse.n) {
        return Err(Error::InvalidArgument(format!(
            "fine grid {} is not a multiple of coarse grid {}",
            fine.n, coarse.n
        )));
    }
    let field = |s: &super::sim::Snapshot| match component {
        Component::U => s.u.clone(),
        Component::V => s.v.clone(),
        Component::P => s.p.clone(),
    };
    let restricted = restrict(&field(sf), fine.n / coarse.n)?;
    field_error(&restricted, &field(sc), norm)
}
