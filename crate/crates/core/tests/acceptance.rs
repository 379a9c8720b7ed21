//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use convlab::euler::{euler_timing_study, IvpProblem};
use convlab::fluid::{divergence, max_speed, FluidParams, FluidSolver, FluidState};
use convlab::golden::{geometric_bound, golden_series, terms_for_tolerance};
use convlab::harness::{field_error, fit_rate, fit_timing, time_scaling, Norm, DEFAULT_FLOOR};
use convlab::ib::{delta_phi, interp, spread, ForceField, Grid, Point};
use convlab::io::{read_manifest, OutputDir, MANIFEST};
use convlab::jelly::{
    eulerian_error, run_simulation, run_sweep, swim_speed, thrust_error, write_run, Component,
    RunOutput, SimConfig, SwimRecord,
};
use convlab::quadrature::{log_spaced, reference_value, trap_composite, trap_study, Integrand, QuadStudy};
use convlab::roots::{empirical_order, newton, secant};
use convlab::Field;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SWEEP: [usize; 3] = [32, 64, 128];

struct Outcome {
    checks: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn report(id: usize, title: &str, started: Instant, limit_secs: Option<f64>, mut out: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    if let Some(limit) = limit_secs {
        out.check(format!("runtime {secs:.2}s < {limit}s"), secs < limit);
    }
    let ok = out.passed();
    println!("{} criterion {id}: {title}", if ok { "PASS" } else { "FAIL" });
    for (label, good) in &out.checks {
        println!("    [{}] {label}", if *good { "ok" } else { "FAIL" });
    }
    ok
}

fn golden() -> Outcome {
    let mut out = Outcome::new();
    let series = golden_series(40).unwrap();
    let e40 = series.error_at(40).unwrap();
    out.check(format!("E_40 = {e40:.3e} <= 1e-15"), e40 <= 1e-15);
    let terms = terms_for_tolerance(1e-15);
    out.check(format!("terms_for_tolerance(1e-15) = {terms} in {{40, 41}}"), terms == 40 || terms == 41);
    let long = golden_series(60).unwrap();
    let bound_ok = (2..=60).all(|m| long.error_at(m).unwrap() <= geometric_bound(m).unwrap());
    out.check("E_m <= 1/F_(m-1) for m in [2, 60]", bound_ok);
    out
}

fn trapezoid_nonperiodic() -> Outcome {
    let mut out = Outcome::new();
    let f = Integrand::nonperiodic_example();
    let reference = reference_value(&f, 0.0, 1.0, 10_000_000, None).unwrap();
    let gap = (reference - 0.455122322888408).abs();
    out.check(format!("reference {reference:.15} within 1e-12 ({gap:.2e})"), gap <= 1e-12);
    let study = QuadStudy {
        a: 0.0,
        b: 1.0,
        n_list: log_spaced(100, 100_000, 16),
        reference_value: reference,
        reference_n: 10_000_000,
    };
    let result = trap_study(&study, &f).unwrap();
    let slope = fit_rate(&result.series, DEFAULT_FLOOR).unwrap().slope;
    out.check(format!("slope {slope:.6} in [-2.05, -1.90]"), (-2.05..=-1.90).contains(&slope));
    out
}

fn trapezoid_periodic() -> Outcome {
    let mut out = Outcome::new();
    let f = Integrand::periodic_example();
    let reference = reference_value(&f, 0.0, 1.0, 10_000_000, None).unwrap();
    let gap = (reference - 0.132214293037990).abs();
    out.check(format!("reference {reference:.15} within 1e-12 ({gap:.2e})"), gap <= 1e-12);
    let e30 = (trap_composite(&f, 0.0, 1.0, 30).unwrap() - reference).abs();
    out.check(format!("error at N=30 {e30:.2e} <= 1e-13"), e30 <= 1e-13);

    let g = Integrand::nonperiodic_example();
    let g_ref = reference_value(&g, 0.0, 1.0, 10_000_000, None).unwrap();
    let g30 = (trap_composite(&g, 0.0, 1.0, 30).unwrap() - g_ref).abs();
    let ratio = g30 / e30.max(f64::MIN_POSITIVE);
    out.check(format!("error ratio at N=30 {ratio:.3e} >= 1e6"), ratio >= 1e6);
    out
}

fn euler() -> Outcome {
    let mut out = Outcome::new();
    let p = IvpProblem::cosine_forcing();
    let dts: Vec<f64> = (0..=12).map(|k| 10f64.powf(-2.0 - k as f64 / 4.0)).collect();
    let series = euler_timing_study(&p, &dts).unwrap();
    let fit = fit_rate(&series, DEFAULT_FLOOR).unwrap();
    let order = series.kind().order_from_slope(fit.slope);
    out.check(format!("order {order:.4} in [0.95, 1.05]"), (0.95..=1.05).contains(&order));
    let timing = fit_timing(&series).unwrap().slope;
    out.check(format!("timing slope {timing:.3} in [-1.3, -0.7]"), (-1.3..=-0.7).contains(&timing));
    out
}

fn roots() -> Outcome {
    let mut out = Outcome::new();
    let root = std::f64::consts::SQRT_2;
    let f = |x: f64| x * x - 2.0;
    let sec = secant(f, 1.0, 2.0, 1e-15, 100).unwrap();
    let p = empirical_order(&sec, root).unwrap();
    out.check(format!("secant order {p:.4} in [1.52, 1.72]"), (1.52..=1.72).contains(&p));
    let newt = newton(f, |x| 2.0 * x, 2.0, 1e-15, 100).unwrap();
    let q = empirical_order(&newt, root).unwrap();
    out.check(format!("newton order {q:.4} in [1.85, 2.15]"), (1.85..=2.15).contains(&q));
    out
}

fn random_field(rng: &mut StdRng, n: usize, h: f64) -> Field {
    let data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Field::from_vec(n, h, data).unwrap()
}

fn ib_coupling() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = StdRng::seed_from_u64(6);

    let (mut unity, mut moment) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let r: f64 = rng.gen_range(0.0..1.0);
        let (mut s0, mut s1) = (0.0, 0.0);
        for j in -3..=3 {
            let d = r - j as f64;
            s0 += delta_phi(d);
            s1 += d * delta_phi(d);
        }
        unity = unity.max((s0 - 1.0).abs());
        moment = moment.max(s1.abs());
    }
    out.check(format!("partition of unity, max deviation {unity:.2e}"), unity <= 1e-12);
    out.check(format!("first moment, max deviation {moment:.2e}"), moment <= 1e-12);

    let (mut adjoint, mut conservation) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = 4 * rng.gen_range(2..=16);
        let side = rng.gen_range(0.5..10.0);
        let grid = Grid::new(n, side);
        let h = grid.h();
        let m = rng.gen_range(1..=40);
        let ds = rng.gen_range(0.01..0.5);
        let pos: Vec<Point> = (0..m)
            .map(|_| [rng.gen_range(-side..2.0 * side), rng.gen_range(-side..2.0 * side)])
            .collect();
        let frc: Vec<Point> = (0..m).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let (u, v) = (random_field(&mut rng, n, h), random_field(&mut rng, n, h));

        let spread_f = spread(&pos, &frc, ds, &grid).unwrap();
        let euler_side: f64 = spread_f
            .fx
            .as_slice()
            .iter()
            .zip(u.as_slice())
            .chain(spread_f.fy.as_slice().iter().zip(v.as_slice()))
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * h
            * h;
        let vel = interp(&u, &v, &pos).unwrap();
        let lag_side: f64 = frc.iter().zip(&vel).map(|(f, w)| f[0] * w[0] + f[1] * w[1]).sum::<f64>() * ds;
        adjoint = adjoint.max((euler_side - lag_side).abs() / lag_side.abs());

        for c in 0..2 {
            let field = if c == 0 { &spread_f.fx } else { &spread_f.fy };
            let grid_total: f64 = field.as_slice().iter().sum::<f64>() * h * h;
            let lag_total: f64 = frc.iter().map(|f| f[c]).sum::<f64>() * ds;
            let scale: f64 = frc.iter().map(|f| f[c].abs()).sum::<f64>() * ds;
            conservation = conservation.max((grid_total - lag_total).abs() / scale);
        }
    }
    out.check(format!("spread/interp adjointness, max relative gap {adjoint:.2e}"), adjoint <= 1e-12);
    out.check(format!("total force conservation, max relative gap {conservation:.2e}"), conservation <= 1e-12);
    out
}

fn fluid() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = StdRng::seed_from_u64(7);
    let (n, side) = (64, 1.0);
    let grid = Grid::new(n, side);
    let h = grid.h();
    let params = FluidParams {
        rho: 1.0,
        mu: 0.01,
        dt: 1e-3,
    };
    let mut solver = FluidSolver::new(n, side, params).unwrap();
    let mut state = FluidState::at_rest(n, side);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let force = ForceField {
            fx: random_field(&mut rng, n, h),
            fy: random_field(&mut rng, n, h),
        };
        solver.step(&mut state, Some(&force)).unwrap();
        let allowed = 1e-10 * max_speed(&state).max(1.0) / h;
        worst = worst.max(divergence(&state).max_abs() / allowed);
    }
    out.check(
        format!("max |div| over 50 forced steps is {worst:.2e} of the allowance"),
        worst <= 1.0,
    );

    let decay = FluidParams {
        rho: 1.0,
        mu: 0.05,
        dt: 0.01,
    };
    let (n, side) = (32, 2.0);
    let k = 2.0 * PI / side;
    let mut solver = FluidSolver::new(n, side, decay).unwrap();
    let mut s = FluidState::at_rest(n, side);
    let h = s.h();
    s.u = Field::from_fn(n, h, |_, y| (k * y).sin());
    let u0 = s.u.clone();
    let factor = 1.0 / (1.0 + decay.mu * decay.dt / decay.rho * solver.laplacian_symbol(0, 1));
    let mut amp = 1.0;
    let mut gap = 0.0f64;
    for _ in 0..10 {
        solver.step(&mut s, None).unwrap();
        amp *= factor;
        for (a, b) in s.u.as_slice().iter().zip(u0.as_slice()) {
            gap = gap.max((a - amp * b).abs() / amp);
        }
        gap = gap.max(s.v.max_abs() / amp);
    }
    out.check(format!("single-mode decay factor, relative gap {gap:.2e}"), gap <= 1e-10);

    let rest = FluidState::at_rest(64, 1.0);
    let mut moved = rest.clone();
    let mut solver = FluidSolver::new(64, 1.0, params).unwrap();
    for _ in 0..10 {
        solver.step(&mut moved, None).unwrap();
    }
    out.check("zero state is a fixed point", moved == rest);
    out
}

fn sweep_configs() -> Vec<SimConfig> {
    SWEEP
        .iter()
        .map(|&n| SimConfig {
            n,
            re: 150.0,
            n_cycles: 2.0,
            ..SimConfig::default()
        })
        .collect()
}

fn jelly_trends(runs: &[SwimRecord]) -> Outcome {
    let mut out = Outcome::new();
    let disp: Vec<f64> = runs.iter().map(SwimRecord::displacement).collect();
    out.check(format!("displacement at N=128 {:.4e} > 0", disp[2]), disp[2] > 0.0);
    out.check(
        format!("displacement non-decreasing over N=32,64,128: {disp:.4?}"),
        disp.windows(2).all(|w| w[1] >= w[0]),
    );

    let speeds: Vec<f64> = runs.iter().map(|r| swim_speed(r).unwrap()).collect();
    let (s32, s64) = ((speeds[0] - speeds[2]).abs(), (speeds[1] - speeds[2]).abs());
    out.check(format!("swim-speed error {s32:.4e} (N=32) > {s64:.4e} (N=64)"), s32 > s64);

    let t32 = thrust_error(&runs[0], &runs[2]).unwrap().last_cycle_absolute;
    let t64 = thrust_error(&runs[1], &runs[2]).unwrap().last_cycle_absolute;
    out.check(format!("last-cycle thrust error {t32:.4e} (N=32) > {t64:.4e} (N=64)"), t32 > t64);

    let still = SimConfig {
        k_muscle: 0.0,
        ..sweep_configs()[1].clone()
    };
    let idle = run_simulation(&still).unwrap().displacement();
    out.check(format!("no-actuation displacement {idle:.3e}, |d| <= 1e-3"), idle.abs() <= 1e-3);
    out
}

fn eulerian(runs: &[SwimRecord]) -> Outcome {
    let mut out = Outcome::new();
    let t = 1.0 / runs[2].freq;
    for norm in [Norm::L1, Norm::L2] {
        let e: Vec<f64> = runs[..2]
            .iter()
            .map(|r| eulerian_error(r, &runs[2], t, Component::V, norm).unwrap())
            .collect();
        out.check(
            format!("{} v-error at t=1/f: {:.4e} (N=32) > {:.4e} (N=64)", norm.label(), e[0], e[1]),
            e[0] > e[1],
        );
    }
    let ones = Field::constant(64, 8.0 / 64.0, 1.0);
    let zeros = Field::zeros(32, 8.0 / 32.0);
    let got: Vec<f64> = [Norm::L1, Norm::L2, Norm::Inf]
        .iter()
        .map(|&norm| field_error(&ones, &zeros, norm).unwrap())
        .collect();
    out.check(format!("unit-difference norms {got:?} == [64, 8, 1]"), got == [64.0, 8.0, 1.0]);
    out
}

fn scaling(runs: &[SwimRecord]) -> Outcome {
    let mut out = Outcome::new();
    let ratio = runs[2].wall_time / runs[1].wall_time;
    out.check(format!("wall-time ratio N=64 -> 128 {ratio:.3} in [3, 6]"), (3.0..=6.0).contains(&ratio));
    out.check("time_scaling(2, 2) == 4", time_scaling(2.0, 2) == 4.0);
    out.check("time_scaling(4, 2) == 16", time_scaling(4.0, 2) == 16.0);
    out
}

/// Every file listed in the manifest, with `wall_time` lines and columns removed.
fn written_files(root: &Path) -> BTreeMap<String, String> {
    read_manifest(&root.join(MANIFEST))
        .unwrap()
        .into_iter()
        .map(|(rel, _)| {
            let text = fs::read_to_string(root.join(&rel)).unwrap();
            (rel, strip_wall_time(&text))
        })
        .collect()
}

fn strip_wall_time(text: &str) -> String {
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let col = header.split(',').position(|c| c.starts_with("wall_time"));
    let keep = |line: &str| -> String {
        match col {
            Some(c) if line.contains(',') => line
                .split(',')
                .enumerate()
                .filter(|(i, _)| *i != c)
                .map(|(_, s)| s)
                .collect::<Vec<_>>()
                .join(","),
            _ => line.to_owned(),
        }
    };
    std::iter::once(header)
        .chain(lines)
        .filter(|l| !l.starts_with("wall_time"))
        .map(keep)
        .collect::<Vec<_>>()
        .join("\n")
}

fn emit(runs: &[SwimRecord], cfgs: &[SimConfig], root: &Path) -> BTreeMap<String, String> {
    let mut dir = OutputDir::create(root).unwrap();
    for (rec, cfg) in runs.iter().zip(cfgs) {
        write_run(rec, cfg, &mut dir, &format!("n{:03}", cfg.n), RunOutput::default()).unwrap();
    }
    let f = Integrand::nonperiodic_example();
    let reference = reference_value(&f, 0.0, 1.0, 1_000_000, None).unwrap();
    let study = QuadStudy {
        a: 0.0,
        b: 1.0,
        n_list: log_spaced(100, 100_000, 16),
        reference_value: reference,
        reference_n: 1_000_000,
    };
    let series = trap_study(&study, &f).unwrap().series;
    dir.write("trapezoid.csv", &convlab::io::series_table(&series).to_csv()).unwrap();
    dir.finish().unwrap();
    written_files(root)
}

fn determinism(first: &[SwimRecord], cfgs: &[SimConfig]) -> Outcome {
    let mut out = Outcome::new();
    let second: Vec<SwimRecord> = run_sweep(cfgs, 3).into_iter().map(Result::unwrap).collect();
    let same_records = first.iter().zip(&second).all(|(a, b)| {
        SwimRecord {
            wall_time: 0.0,
            ..a.clone()
        } == SwimRecord {
            wall_time: 0.0,
            ..b.clone()
        }
    });
    out.check("records from --jobs 1 and --jobs 3 agree bit for bit", same_records);

    let tmp = tempfile::tempdir().unwrap();
    let a = emit(first, cfgs, &tmp.path().join("a"));
    let b = emit(&second, cfgs, &tmp.path().join("b"));
    let differing: Vec<&String> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
    out.check(
        format!("{} output files identical across two runs (wall time excluded)", a.len()),
        a.len() == b.len() && differing.is_empty(),
    );
    out
}

fn main() {
    let mut all = true;

    let t = Instant::now();
    all &= report(1, "golden ratio", t, Some(1.0), golden());
    let t = Instant::now();
    all &= report(2, "trapezoid, non-periodic", t, Some(60.0), trapezoid_nonperiodic());
    let t = Instant::now();
    all &= report(3, "trapezoid, periodic", t, Some(60.0), trapezoid_periodic());
    let t = Instant::now();
    all &= report(4, "forward Euler", t, Some(120.0), euler());
    let t = Instant::now();
    all &= report(5, "secant and Newton orders", t, Some(1.0), roots());
    let t = Instant::now();
    all &= report(6, "IB kernel and coupling", t, Some(10.0), ib_coupling());
    let t = Instant::now();
    all &= report(7, "fluid solver", t, Some(30.0), fluid());

    let t = Instant::now();
    let cfgs = sweep_configs();
    let runs: Vec<SwimRecord> = run_sweep(&cfgs, 1).into_iter().map(Result::unwrap).collect();
    all &= report(8, "swimmer trends", t, Some(1800.0), jelly_trends(&runs));
    let t = Instant::now();
    all &= report(9, "Eulerian error norms", t, Some(600.0), eulerian(&runs));
    let t = Instant::now();
    all &= report(10, "time scaling", t, None, scaling(&runs));
    let t = Instant::now();
    all &= report(11, "determinism", t, None, determinism(&runs, &cfgs));

    println!("acceptance: {}", if all { "all criteria passed" } else { "some criteria failed" });
    if !all {
        std::process::exit(1);
    }
}
