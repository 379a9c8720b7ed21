use std::fmt::Write as _;

use super::config::SimConfig;
use super::sim::SwimRecord;
use crate::error::Result;
use crate::fluid::{vorticity, FluidState};
use crate::io::{fmt_num, vtk_polydata, vtk_structured_points, CsvTable, OutputDir};

/// `t,bell_top_y,bell_top_speed,thrust_avg`, one row per step.
pub fn swim_table(record: &SwimRecord) -> CsvTable {
    let mut t = CsvTable::new(&["t", "bell_top_y", "bell_top_speed", "thrust_avg"]);
    for k in 0..record.times.len() {
        t.push(&[
            record.times[k],
            record.bell_top_y[k],
            record.bell_top_speed[k],
            record.thrust[k],
        ])
        .expect("four columns");
    }
    t
}

/// What to write for a run besides `swim.csv` and `meta.txt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutput {
    pub vtk: bool,
}

impl Default for RunOutput {
    fn default() -> Self {
        Self { vtk: true }
    }
}

/// Writes a run below `prefix` inside `out` (use `""` for the root).
pub fn write_run(
    record: &SwimRecord,
    cfg: &SimConfig,
    out: &mut OutputDir,
    prefix: &str,
    opts: RunOutput,
) -> Result<()> {
    let rel = |name: &str| {
        if prefix.is_empty() {
            name.to_owned()
        } else {
            format!("{prefix}/{name}")
        }
    };
    out.write(&rel("swim.csv"), &swim_table(record).to_csv())?;

    if opts.vtk {
        for (k, s) in record.snapshots.iter().enumerate() {
            let state = FluidState {
                u: s.u.clone(),
                v: s.v.clone(),
                p: s.p.clone(),
            };
            let fields = [
                ("uVel", &s.u),
                ("vVel", &s.v),
                ("P", &s.p),
                ("Omega", &vorticity(&state)),
            ];
            for (name, field) in fields {
                out.write(
                    &rel(&format!("vtk/{name}.{k:04}.vtk")),
                    &vtk_structured_points(field, name),
                )?;
            }
            out.write(
                &rel(&format!("vtk/lagPts.{k:04}.vtk")),
                &vtk_polydata(&s.positions, "lagPts"),
            )?;
        }
    }

    let mut meta = cfg.to_text();
    let _ = writeln!(meta, "mu = {}", fmt_num(cfg.mu()));
    let _ = writeln!(meta, "dt_used = {}", fmt_num(record.dt));
    let _ = writeln!(meta, "steps = {}", record.times.len().saturating_sub(1));
    let _ = writeln!(meta, "ds = {}", fmt_num(record.ds));
    let _ = writeln!(meta, "snapshots = {}", record.snapshots.len());
    let _ = writeln!(meta, "wall_time_seconds = {}", fmt_num(record.wall_time));
    out.write(&rel("meta.txt"), &meta)?;
    Ok(())
}
