use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use convlab::euler::{euler_solve, euler_timing_study, IvpProblem};
use convlab::golden::{geometric_bound, golden_series, terms_for_tolerance};
use convlab::harness::{
    fit_loglog, fit_rate, fit_timing, ConvergenceSeries, Norm, ResolutionKind, DEFAULT_FLOOR,
};
use convlab::ib::geometry::{read_geometry, write_geometry};
use convlab::io::{fmt_num, series_table, CsvTable, OutputDir};
use convlab::jelly::{
    build_bell, eulerian_error, run_swimmer, run_sweep, swim_speed, thrust_error, write_run,
    Component, RunOutput, SimConfig, SwimRecord, Swimmer,
};
use convlab::quadrature::{log_spaced, reference_value, trap_study, Integrand, QuadStudy};
use convlab::roots::{empirical_order, newton, secant, RootRun};
use convlab::Error;

use crate::{Command, Example, Failure, OutArgs, RootProblem, SimArgs};

type Outcome = Result<String, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Golden { n_max, tol, out } => golden(n_max, tol, &out),
        Command::Trapezoid {
            example,
            n_list,
            reference_n,
            cache,
            out,
        } => trapezoid(example, n_list.map(|c| c.0), reference_n, cache, &out),
        Command::Euler { dt_list, out } => euler(dt_list.map(|v| v.0), &out),
        Command::Secant {
            function,
            x0,
            x1,
            tol,
            max_iter,
            out,
        } => roots(function, x0, x1, tol, max_iter, &out),
        Command::Jelly {
            sim,
            n,
            geometry,
            out,
        } => jelly(&sim, n, geometry, &out),
        Command::JellySweep {
            sim,
            n_list,
            jobs,
            timed,
            out,
        } => jelly_sweep(&sim, &n_list.0, jobs, timed, &out),
        Command::Report { dir, floor } => report(&dir, floor),
    }
}

fn out_dir(args: &OutArgs, name: &str) -> PathBuf {
    if let Some(dir) = &args.out {
        return dir.clone();
    }
    let root = std::env::var_os("CONVLAB_OUT")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"));
    root.join(name)
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn golden(n_max: usize, tol: f64, out: &OutArgs) -> Outcome {
    if !(1..=90).contains(&n_max) {
        return Err(usage(format!("--n-max must lie in [1, 90], got {n_max}")));
    }
    let series = golden_series(n_max)?;
    let mut table = CsvTable::new(&["n", "approximation", "error", "bound"]);
    for k in 0..series.len() {
        let n = series.n_values[k];
        let bound = if n >= 2 { fmt_num(geometric_bound(n)?) } else { String::new() };
        table
            .push_cells(vec![
                n.to_string(),
                fmt_num(series.approximations[k]),
                fmt_num(series.errors[k]),
                bound,
            ])
            .map_err(Failure::Core)?;
    }
    let study = ConvergenceSeries::new(
        ResolutionKind::Terms,
        series.n_values.iter().map(|&n| n as f64).collect(),
        series.errors.clone(),
        None,
    )?;
    let mut dir = OutputDir::create(out_dir(out, "golden"))?;
    dir.write("golden.csv", &table.to_csv())?;
    dir.write("study.csv", &series_table(&study).to_csv())?;
    let terms = terms_for_tolerance(tol);
    dir.write(
        "summary.txt",
        &format!("n_max={n_max}\nfinal_error={}\ntolerance={tol:e}\nterms_for_tolerance={terms}\n", fmt_num(*series.errors.last().unwrap())),
    )?;
    dir.finish()?;
    Ok(format!(
        "golden: n_max={n_max} final_error={:.3e} terms_for_tolerance({tol:e})={terms}",
        series.errors.last().unwrap()
    ))
}

fn trapezoid(
    example: Example,
    n_list: Option<Vec<usize>>,
    reference_n: usize,
    cache: Option<PathBuf>,
    out: &OutArgs,
) -> Outcome {
    let (f, default_n) = match example {
        Example::Nonperiodic => (Integrand::nonperiodic_example(), log_spaced(100, 100_000, 16)),
        Example::Periodic => (Integrand::periodic_example(), (2..=64).step_by(2).collect()),
    };
    let ns = n_list.unwrap_or(default_n);
    let root = out_dir(out, "trapezoid");
    let mut dir = OutputDir::create(&root)?;
    let cache_dir = cache.unwrap_or_else(|| root.join("cache"));
    let reference = reference_value(&f, 0.0, 1.0, reference_n, Some(&cache_dir))?;
    if let Ok(rel) = cache_dir.strip_prefix(&root) {
        let name = format!("reference_{}_{}_{}_{reference_n}.txt", f.label(), 0.0, 1.0);
        dir.adopt(&rel.join(name).to_string_lossy())?;
    }
    let study = QuadStudy {
        a: 0.0,
        b: 1.0,
        n_list: ns,
        reference_value: reference,
        reference_n,
    };
    let result = trap_study(&study, &f)?;
    let label = f.label().to_owned();
    dir.write(&format!("{label}.csv"), &series_table(&result.series).to_csv())?;

    let mut approx = CsvTable::new(&["n", "approximation"]);
    for (n, a) in result.partitions().zip(&result.approximations) {
        approx
            .push_cells(vec![n.to_string(), fmt_num(*a)])
            .map_err(Failure::Core)?;
    }
    dir.write(&format!("{label}_approximations.csv"), &approx.to_csv())?;

    let mut summary = format!("trapezoid {label}: reference={reference:.15}");
    match fit_rate(&result.series, DEFAULT_FLOOR) {
        Ok(fit) => {
            dir.write(&format!("{label}_fit.txt"), &format!("{fit}\n"))?;
            let _ = write!(summary, " slope={:.6}", fit.slope);
        }
        Err(Error::InsufficientData(_)) => {}
        Err(e) => return Err(e.into()),
    }
    let min = result.series.error().iter().cloned().fold(f64::INFINITY, f64::min);
    let _ = write!(summary, " min_error={min:.3e}");
    dir.finish()?;
    Ok(summary)
}

fn euler(dt_list: Option<Vec<f64>>, out: &OutArgs) -> Outcome {
    let dts = dt_list.unwrap_or_else(|| (0..=12).map(|k| 10f64.powf(-2.0 - k as f64 / 4.0)).collect());
    if let Some(bad) = dts.iter().find(|&&dt| !(dt > 0.0 && dt.is_finite())) {
        return Err(usage(format!("step sizes must be positive, got {bad}")));
    }
    let p = IvpProblem::cosine_forcing();
    let series = euler_timing_study(&p, &dts)?;
    let mut dir = OutputDir::create(out_dir(out, "euler"))?;
    dir.write("euler.csv", &series_table(&series).to_csv())?;

    let coarse = series.resolution()[0];
    let traj = euler_solve(&p, coarse)?;
    let mut t = CsvTable::new(&["t", "y", "exact"]);
    for (&time, &y) in traj.times.iter().zip(&traj.values) {
        t.push(&[time, y, p.exact(time).unwrap_or(f64::NAN)])
            .map_err(Failure::Core)?;
    }
    dir.write("trajectory.csv", &t.to_csv())?;

    let fit = fit_rate(&series, DEFAULT_FLOOR)?;
    dir.write("fit.txt", &format!("{fit}\n"))?;
    let timing = fit_timing(&series)?;
    dir.write("timing_fit.txt", &format!("{timing}\n"))?;
    dir.finish()?;
    Ok(format!(
        "euler: order={:.4} timing_slope={:.3}",
        series.kind().order_from_slope(fit.slope),
        timing.slope
    ))
}

fn root_table(run: &RootRun, root: f64) -> CsvTable {
    let mut t = CsvTable::new(&["iteration", "x", "error", "residual"]);
    for (k, (&x, &r)) in run.iterates.iter().zip(&run.residuals).enumerate() {
        t.push_cells(vec![k.to_string(), fmt_num(x), fmt_num((x - root).abs()), fmt_num(r)])
            .expect("four columns");
    }
    t
}

fn roots(
    problem: RootProblem,
    x0: Option<f64>,
    x1: Option<f64>,
    tol: f64,
    max_iter: usize,
    out: &OutArgs,
) -> Outcome {
    let (f, fp, root, start): (fn(f64) -> f64, fn(f64) -> f64, f64, (f64, f64)) = match problem {
        RootProblem::Sqrt2 => (|x| x * x - 2.0, |x| 2.0 * x, std::f64::consts::SQRT_2, (1.0, 2.0)),
        RootProblem::Cos => (|x| x.cos() - x, |x| -x.sin() - 1.0, 0.739_085_133_215_160_6, (0.0, 1.0)),
        RootProblem::Exp => (|x| x.exp() - 2.0, f64::exp, std::f64::consts::LN_2, (0.0, 1.0)),
    };
    let (x0, x1) = (x0.unwrap_or(start.0), x1.unwrap_or(start.1));
    let sec = secant(f, x0, x1, tol, max_iter)?;
    let newt = newton(f, fp, x1, tol, max_iter)?;
    let mut dir = OutputDir::create(out_dir(out, "secant"))?;
    dir.write("secant.csv", &root_table(&sec, root).to_csv())?;
    dir.write("newton.csv", &root_table(&newt, root).to_csv())?;
    let order = |run: &RootRun| {
        empirical_order(run, root)
            .map(|p| format!("{p:.4}"))
            .unwrap_or_else(|_| "n/a".into())
    };
    let summary = format!(
        "secant: root={:.16} iterations={} order={} newton_order={}",
        sec.root_estimate,
        sec.iterates.len() - 2,
        order(&sec),
        order(&newt)
    );
    dir.write("summary.txt", &format!("{summary}\n"))?;
    dir.finish()?;
    if !sec.converged {
        return Err(Failure::Core(Error::InvalidArgument(format!(
            "secant did not reach |f| <= {tol:e} in {max_iter} iterations"
        ))));
    }
    Ok(summary)
}

fn sim_config(sim: &SimArgs) -> Result<SimConfig, Failure> {
    let mut cfg = match &sim.config {
        Some(path) => SimConfig::from_file(path).map_err(|e| match e {
            Error::Parse { .. } => usage(e.to_string()),
            other => Failure::Core(other),
        })?,
        None => SimConfig::default(),
    };
    if let Some(re) = sim.re {
        cfg.re = re;
    }
    if let Some(c) = sim.cycles {
        cfg.n_cycles = c;
    }
    Ok(cfg)
}

fn sim_out(cfg: &SimConfig, out: &OutArgs, name: &str) -> PathBuf {
    match (&out.out, &cfg.output_dir) {
        (None, Some(dir)) => dir.clone(),
        _ => out_dir(out, name),
    }
}

fn check(cfg: &SimConfig) -> Result<(), Failure> {
    cfg.validate().map_err(|e| usage(e.to_string()))
}

fn jelly(sim: &SimArgs, n: Option<usize>, geometry: Option<PathBuf>, out: &OutArgs) -> Outcome {
    let mut cfg = sim_config(sim)?;
    if let Some(n) = n {
        cfg.n = n;
    }
    check(&cfg)?;
    let swimmer = match &geometry {
        Some(prefix) => Swimmer::from_mesh(read_geometry(prefix, cfg.ds_factor * cfg.h())?)?,
        None => build_bell(&cfg)?,
    };
    let root = sim_out(&cfg, out, "jelly");
    let mut dir = OutputDir::create(&root)?;
    for path in write_geometry(&swimmer.mesh, &root.join("geometry"), "bell")? {
        let rel = path.strip_prefix(&root).unwrap_or(&path).to_string_lossy().into_owned();
        dir.adopt(&rel)?;
    }
    let rec = run_swimmer(&cfg, swimmer)?;
    write_run(&rec, &cfg, &mut dir, "", RunOutput { vtk: !sim.no_vtk })?;
    dir.finish()?;
    let speed = swim_speed(&rec)
        .map(|m| format!("{m:.6e}"))
        .unwrap_or_else(|_| "n/a".into());
    Ok(format!(
        "jelly: N={} displacement={:.6e} swim_speed={speed} wall_time={:.3}s",
        rec.n,
        rec.displacement(),
        rec.wall_time
    ))
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// One row of `sweep.csv`.
fn sweep_row(rec: &SwimRecord, reference: &SwimRecord) -> Vec<String> {
    let m_ref = swim_speed(reference).ok();
    let m = swim_speed(rec).ok();
    let speed_error = m.zip(m_ref).map(|(a, b)| (a - b).abs());
    let thrust = thrust_error(rec, reference).ok();
    let t1 = 1.0 / rec.freq;
    let v_err = |norm| eulerian_error(rec, reference, t1, Component::V, norm).ok();
    vec![
        rec.n.to_string(),
        fmt_num(rec.displacement()),
        opt_cell(m),
        opt_cell(speed_error),
        opt_cell(thrust.as_ref().map(|t| t.last_cycle_absolute)),
        opt_cell(thrust.and_then(|t| t.last_cycle_relative)),
        opt_cell(v_err(Norm::L1)),
        opt_cell(v_err(Norm::L2)),
        fmt_num(rec.wall_time),
    ]
}

pub const SWEEP_HEADER: [&str; 9] = [
    "N",
    "displacement",
    "swim_speed",
    "speed_error",
    "thrust_error",
    "thrust_rel_error",
    "v_error_l1",
    "v_error_l2",
    "wall_time_seconds",
];

fn jelly_sweep(sim: &SimArgs, n_list: &[usize], jobs: usize, timed: bool, out: &OutArgs) -> Outcome {
    let base = sim_config(sim)?;
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let configs: Vec<SimConfig> = ns.iter().map(|&n| SimConfig { n, ..base.clone() }).collect();
    for cfg in &configs {
        check(cfg)?;
    }
    let jobs = if timed { 1 } else { jobs };
    let records = run_sweep(&configs, jobs)
        .into_iter()
        .collect::<convlab::Result<Vec<_>>>()?;

    let mut dir = OutputDir::create(sim_out(&base, out, "jelly-sweep"))?;
    let reference = records.last().expect("at least one grid size");
    let mut table = CsvTable::new(&SWEEP_HEADER);
    for (rec, cfg) in records.iter().zip(&configs) {
        write_run(rec, cfg, &mut dir, &format!("n{:03}", rec.n), RunOutput { vtk: !sim.no_vtk })?;
        table.push_cells(sweep_row(rec, reference)).map_err(Failure::Core)?;
    }
    dir.write("sweep.csv", &table.to_csv())?;
    dir.finish()?;
    let disp: Vec<String> = records.iter().map(|r| format!("{:.4e}", r.displacement())).collect();
    Ok(format!(
        "jelly-sweep: N={} reference={} displacement=[{}]",
        ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
        reference.n,
        disp.join(",")
    ))
}

/// Reads a `resolution,error[,...]` CSV.
fn read_study(path: &Path) -> Result<Option<(Vec<f64>, Vec<f64>)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Core(Error::Io(e)))?;
    let mut lines = text.lines();
    let is_study = lines
        .next()
        .is_some_and(|h| h.starts_with("resolution,error"));
    if !is_study {
        return Ok(None);
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let mut cells = line.split(',');
        let parse = |c: Option<&str>| c.and_then(|c| c.trim().parse::<f64>().ok());
        match (parse(cells.next()), parse(cells.next())) {
            (Some(r), Some(e)) => {
                x.push(r);
                y.push(e);
            }
            _ => {
                return Err(Failure::Core(Error::Parse {
                    path: path.to_owned(),
                    line: i + 2,
                    message: format!("bad study row {line:?}"),
                }))
            }
        }
    }
    Ok(Some((x, y)))
}

fn report(dir: &Path, floor: f64) -> Outcome {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Core(Error::File { path: dir.to_owned(), source: e }))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    let mut lines = Vec::new();
    for path in paths {
        let Some((x, y)) = read_study(&path)? else { continue };
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        match fit_loglog(&x, &y, floor) {
            Ok(fit) => lines.push(format!("{name}: {fit}")),
            Err(e) => lines.push(format!("{name}: no fit ({e})")),
        }
    }
    if lines.is_empty() {
        return Err(Failure::Usage(format!("no study CSV files in {}", dir.display())));
    }
    Ok(lines.join("\n"))
}
