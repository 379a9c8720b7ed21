use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Fewest time steps allowed per contraction cycle.
pub const MIN_STEPS_PER_CYCLE: f64 = 1000.0;

/// Parameters of one swimmer simulation.
///
/// `dt` and `output_every` are derived from the grid when left unset.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub side: f64,
    pub re: f64,
    pub freq: f64,
    pub char_length: f64,
    pub rho: f64,
    pub dt: Option<f64>,
    pub n_cycles: f64,
    pub output_every: Option<usize>,
    pub k_spring_scale: f64,
    pub k_beam_scale: f64,
    pub k_target: f64,
    pub k_muscle: f64,
    pub contraction_fraction: f64,
    pub bell_a: f64,
    pub bell_b: f64,
    pub ds_factor: f64,
    pub output_dir: Option<PathBuf>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 64,
            side: 8.0,
            re: 150.0,
            freq: 0.8,
            char_length: 1.0,
            rho: 1000.0,
            dt: None,
            n_cycles: 2.0,
            output_every: None,
            k_spring_scale: 1.0e6,
            k_beam_scale: 6400.0,
            k_target: 2.0e5,
            k_muscle: 4.0e5,
            contraction_fraction: 0.5,
            bell_a: 0.5,
            bell_b: 0.375,
            ds_factor: 0.5,
            output_dir: None,
        }
    }
}

const KEYS: [&str; 18] = [
    "N",
    "L",
    "Re",
    "f",
    "char_length",
    "rho",
    "dt",
    "n_cycles",
    "output_every",
    "k_spring_scale",
    "k_beam_scale",
    "k_target",
    "k_muscle",
    "contraction_fraction",
    "bell_a",
    "bell_b",
    "ds_factor",
    "output_dir",
];

impl SimConfig {
    pub fn h(&self) -> f64 {
        self.side / self.n as f64
    }

    /// Dynamic viscosity giving the target Reynolds number with velocity
    /// scale `f * char_length`.
    pub fn mu(&self) -> f64 {
        self.rho * self.freq * self.char_length * self.char_length / self.re
    }

    /// `min(0.1 h / (f c), 1 / (1000 f))` unless set explicitly.
    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or_else(|| {
            let cfl = 0.1 * self.h() / (self.freq * self.char_length);
            cfl.min(1.0 / (MIN_STEPS_PER_CYCLE * self.freq))
        })
    }

    pub fn steps_per_cycle(&self) -> f64 {
        1.0 / (self.freq * self.time_step())
    }

    pub fn total_steps(&self) -> usize {
        (self.n_cycles * self.steps_per_cycle()).round() as usize
    }

    /// Steps between snapshots; defaults to twenty per cycle.
    pub fn snapshot_interval(&self) -> usize {
        self.output_every
            .unwrap_or_else(|| (self.steps_per_cycle() / 20.0).round().max(1.0) as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("L", self.side),
            ("Re", self.re),
            ("f", self.freq),
            ("char_length", self.char_length),
            ("rho", self.rho),
            ("n_cycles", self.n_cycles),
            ("bell_a", self.bell_a),
            ("bell_b", self.bell_b),
            ("ds_factor", self.ds_factor),
            ("dt", self.time_step()),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg = [
            ("k_spring_scale", self.k_spring_scale),
            ("k_beam_scale", self.k_beam_scale),
            ("k_target", self.k_target),
            ("k_muscle", self.k_muscle),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be >= 0, got {v}")));
            }
        }
        if self.n < 8 {
            return Err(Error::InvalidArgument(format!("N must be at least 8, got {}", self.n)));
        }
        if !(self.contraction_fraction > 0.0 && self.contraction_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "contraction_fraction must lie in (0, 1], got {}",
                self.contraction_fraction
            )));
        }
        if self.steps_per_cycle() < MIN_STEPS_PER_CYCLE * (1.0 - 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "dt = {} gives {:.1} steps per cycle, fewer than {MIN_STEPS_PER_CYCLE}",
                self.time_step(),
                self.steps_per_cycle()
            )));
        }
        if self.output_every == Some(0) {
            return Err(Error::InvalidArgument("output_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// unset keys keep their defaults and `dt`/`output_every` accept `auto`.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if seen.contains(&key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(key);
            cfg.set(key, value).map_err(err)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::parse(&text, path)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("invalid value {v:?} for `{key}`"))
        }
        let auto = value.eq_ignore_ascii_case("auto");
        match key {
            "N" => self.n = num(key, value)?,
            "L" => self.side = num(key, value)?,
            "Re" => self.re = num(key, value)?,
            "f" => self.freq = num(key, value)?,
            "char_length" => self.char_length = num(key, value)?,
            "rho" => self.rho = num(key, value)?,
            "dt" => self.dt = if auto { None } else { Some(num(key, value)?) },
            "n_cycles" => self.n_cycles = num(key, value)?,
            "output_every" => {
                self.output_every = if auto { None } else { Some(num(key, value)?) }
            }
            "k_spring_scale" => self.k_spring_scale = num(key, value)?,
            "k_beam_scale" => self.k_beam_scale = num(key, value)?,
            "k_target" => self.k_target = num(key, value)?,
            "k_muscle" => self.k_muscle = num(key, value)?,
            "contraction_fraction" => self.contraction_fraction = num(key, value)?,
            "bell_a" => self.bell_a = num(key, value)?,
            "bell_b" => self.bell_b = num(key, value)?,
            "ds_factor" => self.ds_factor = num(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Config text that parses back to `self`.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("N", self.n.to_string());
        line("L", self.side.to_string());
        line("Re", self.re.to_string());
        line("f", self.freq.to_string());
        line("char_length", self.char_length.to_string());
        line("rho", self.rho.to_string());
        line("dt", opt(self.dt.map(|v| v.to_string())));
        line("n_cycles", self.n_cycles.to_string());
        line("output_every", opt(self.output_every.map(|v| v.to_string())));
        line("k_spring_scale", self.k_spring_scale.to_string());
        line("k_beam_scale", self.k_beam_scale.to_string());
        line("k_target", self.k_target.to_string());
        line("k_muscle", self.k_muscle.to_string());
        line("contraction_fraction", self.contraction_fraction.to_string());
        line("bell_a", self.bell_a.to_string());
        line("bell_b", self.bell_b.to_string());
        line("ds_factor", self.ds_factor.to_string());
        if let Some(dir) = &self.output_dir {
            line("output_dir", dir.display().to_string());
        }
        out
    }
}

/// Reynolds number `rho * c * (f c) / mu`.
pub fn reynolds(cfg: &SimConfig) -> f64 {
    reynolds_from(cfg.rho, cfg.char_length, cfg.freq * cfg.char_length, cfg.mu())
}

/// Reynolds number `rho L V / mu` from raw scales.
pub fn reynolds_from(rho: f64, length: f64, velocity: f64, mu: f64) -> f64 {
    rho * length * velocity / mu
}
