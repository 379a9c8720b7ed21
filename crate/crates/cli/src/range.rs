//! Number lists on the command line: `start:step:stop` ranges and comma
//! lists, freely mixed (`2:2:8,100`).

use std::str::FromStr;

fn item<T: FromStr>(s: &str) -> Result<T, String> {
    let s = s.trim();
    // Integers may be written in scientific notation (`1e5`).
    s.parse().or_else(|_| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && v.fract() == 0.0)
            .and_then(|v| format!("{v:.0}").parse().ok())
            .ok_or_else(|| format!("invalid number {s:?}"))
    })
}

/// A parsed list of counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts(pub Vec<usize>);

/// A parsed list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

pub fn parse_counts(text: &str) -> Result<Counts, String> {
    parse_usize_list(text).map(Counts)
}

pub fn parse_values(text: &str) -> Result<Values, String> {
    parse_f64_list(text).map(Values)
}

pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [one] => out.push(item(one)?),
            [start, step, stop] => {
                let (start, step, stop): (usize, usize, usize) =
                    (item(start)?, item(step)?, item(stop)?);
                if step == 0 {
                    return Err(format!("range {part:?} has a zero step"));
                }
                if stop < start {
                    return Err(format!("range {part:?} ends before it starts"));
                }
                out.extend((start..=stop).step_by(step));
            }
            _ => return Err(format!("expected `start:step:stop` or a number, got {part:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [one] => out.push(item(one)?),
            [start, step, stop] => {
                let (start, step, stop): (f64, f64, f64) = (item(start)?, item(step)?, item(stop)?);
                if !(step != 0.0 && (stop - start) / step >= 0.0) {
                    return Err(format!("range {part:?} never reaches its end"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|k| start + k as f64 * step));
            }
            _ => return Err(format!("expected `start:step:stop` or a number, got {part:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}


/// A single count, scientific notation allowed (`1e7`).
pub fn parse_count(text: &str) -> Result<usize, String> {
    item(text)
}
