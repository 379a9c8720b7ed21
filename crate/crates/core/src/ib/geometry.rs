//! Plain-text geometry files: `.vertex`, `.spring`, `.beam`, `.target` and
//! the `.muscle` extension (same layout as `.spring`, rest length = maximum).
//!
//! Every file starts with a count line followed by one whitespace-delimited
//! record per line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::fibers::{Beam, LagrangianMesh, Spring, Target};
use crate::error::{Error, Result};

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(".");
    os.push(ext);
    PathBuf::from(os)
}

fn table(count: usize, rows: impl Iterator<Item = String>) -> String {
    let mut out = format!("{count}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn vertex_text(mesh: &LagrangianMesh) -> String {
    table(mesh.positions.len(), mesh.positions.iter().map(|p| format!("{} {}", p[0], p[1])))
}

pub fn spring_text(springs: &[Spring]) -> String {
    table(
        springs.len(),
        springs
            .iter()
            .map(|s| format!("{} {} {} {}", s.master, s.slave, s.stiffness, s.rest_length)),
    )
}

pub fn beam_text(beams: &[Beam]) -> String {
    table(
        beams.len(),
        beams.iter().map(|b| {
            let mut line = String::new();
            let _ = write!(
                line,
                "{} {} {} {} {} {}",
                b.left, b.middle, b.right, b.stiffness, b.curvature[0], b.curvature[1]
            );
            line
        }),
    )
}

pub fn target_text(targets: &[Target]) -> String {
    table(targets.len(), targets.iter().map(|t| format!("{} {}", t.node, t.stiffness)))
}

/// Writes `<dir>/<name>.{vertex,spring,beam,target,muscle}` and returns the paths.
pub fn write_geometry(mesh: &LagrangianMesh, dir: &Path, name: &str) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    let prefix = dir.join(name);
    let files = [
        ("vertex", vertex_text(mesh)),
        ("spring", spring_text(&mesh.springs)),
        ("beam", beam_text(&mesh.beams)),
        ("target", target_text(&mesh.targets)),
        ("muscle", spring_text(&mesh.muscles)),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (ext, text) in files {
        let path = with_ext(&prefix, ext);
        fs::write(&path, text).map_err(|e| Error::file(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

struct Records<'a> {
    path: &'a Path,
    rows: Vec<(usize, Vec<&'a str>)>,
}

fn parse_table<'a>(path: &'a Path, text: &'a str, width: usize) -> Result<Records<'a>> {
    let bad = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, count_text) = lines.next().ok_or_else(|| bad(1, "missing count line".into()))?;
    let count: usize = count_text
        .parse()
        .map_err(|_| bad(first, format!("invalid count {count_text:?}")))?;
    let rows: Vec<(usize, Vec<&str>)> = lines
        .map(|(no, l)| (no, l.split_whitespace().collect::<Vec<_>>()))
        .collect();
    if rows.len() != count {
        return Err(bad(first, format!("count says {count} records, found {}", rows.len())));
    }
    if let Some((no, r)) = rows.iter().find(|(_, r)| r.len() != width) {
        return Err(bad(*no, format!("expected {width} fields, found {}", r.len())));
    }
    Ok(Records { path, rows })
}

impl Records<'_> {
    fn field<T: std::str::FromStr>(&self, row: usize, col: usize) -> Result<T> {
        let (line, fields) = &self.rows[row];
        fields[col].parse().map_err(|_| Error::Parse {
            path: self.path.to_path_buf(),
            line: *line,
            message: format!("cannot parse field {:?}", fields[col]),
        })
    }
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Ok(t) => Ok(Some(t)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::file(path, e)),
    }
}

fn read_springs(path: &Path) -> Result<Vec<Spring>> {
    let Some(text) = read_optional(path)? else {
        return Ok(Vec::new());
    };
    let t = parse_table(path, &text, 4)?;
    (0..t.rows.len())
        .map(|r| {
            Ok(Spring {
                master: t.field(r, 0)?,
                slave: t.field(r, 1)?,
                stiffness: t.field(r, 2)?,
                rest_length: t.field(r, 3)?,
            })
        })
        .collect()
}

/// Reads the geometry stored under `prefix` (the `.vertex` file is required,
/// the others default to empty). Target anchors are the initial positions.
pub fn read_geometry(prefix: &Path, ds: f64) -> Result<LagrangianMesh> {
    let vpath = with_ext(prefix, "vertex");
    let text = fs::read_to_string(&vpath).map_err(|e| Error::file(&vpath, e))?;
    let t = parse_table(&vpath, &text, 2)?;
    let positions = (0..t.rows.len())
        .map(|r| Ok([t.field(r, 0)?, t.field(r, 1)?]))
        .collect::<Result<Vec<_>>>()?;

    let springs = read_springs(&with_ext(prefix, "spring"))?;
    let muscles = read_springs(&with_ext(prefix, "muscle"))?;

    let bpath = with_ext(prefix, "beam");
    let beams = match read_optional(&bpath)? {
        None => Vec::new(),
        Some(text) => {
            let t = parse_table(&bpath, &text, 6)?;
            (0..t.rows.len())
                .map(|r| {
                    Ok(Beam {
                        left: t.field(r, 0)?,
                        middle: t.field(r, 1)?,
                        right: t.field(r, 2)?,
                        stiffness: t.field(r, 3)?,
                        curvature: [t.field(r, 4)?, t.field(r, 5)?],
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let tpath = with_ext(prefix, "target");
    let targets = match read_optional(&tpath)? {
        None => Vec::new(),
        Some(text) => {
            let t = parse_table(&tpath, &text, 2)?;
            (0..t.rows.len())
                .map(|r| {
                    let node: usize = t.field(r, 0)?;
                    let anchor = *positions.get(node).ok_or(Error::IndexOutOfRange {
                        index: node,
                        max: positions.len().saturating_sub(1),
                    })?;
                    Ok(Target {
                        node,
                        stiffness: t.field(r, 1)?,
                        anchor,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let mesh = LagrangianMesh {
        positions,
        ds,
        springs,
        beams,
        targets,
        muscles,
    };
    mesh.validate()?;
    Ok(mesh)
}
