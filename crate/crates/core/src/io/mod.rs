//! File formats: the native mesh format, a Gmsh 2.2 importer, legacy VTK
//! output, run configuration and CSV reports.

pub mod config;
pub mod csv;
pub mod gmsh;
pub mod mesh_file;
pub mod vtk;

use std::path::Path;

use crate::mesh::MeshError;

pub use config::RunConfig;
pub use mesh_file::{read_mesh, read_spacetime_mesh, write_mesh, write_spacetime_mesh};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("mesh is not consistently numbered ({0} element pairs)")]
    Inconsistent(usize),
    #[error("mesh is not admissible ({0} violations)")]
    NotAdmissible(usize),
    #[error("config: {0}")]
    Config(String),
}

impl IoError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        IoError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Formats like C's `%.16e`: 17 significant digits and a signed exponent of
/// at least two digits.
pub fn format_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    pub last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    pub fn next_line(&mut self) -> Result<(usize, Vec<&'a str>), IoError> {
        for (i, l) in self.inner.by_ref() {
            let l = l.split('#').next().unwrap_or("").trim();
            self.last = i + 1;
            if !l.is_empty() {
                return Ok((i + 1, l.split_whitespace().collect()));
            }
        }
        Err(IoError::parse(self.last + 1, "unexpected end of file"))
    }

    pub fn next_opt(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.next_line().ok()
    }
}

pub(crate) fn parse_num<F: std::str::FromStr>(line: usize, tok: &str) -> Result<F, IoError> {
    tok.parse()
        .map_err(|_| IoError::parse(line, format!("cannot parse `{tok}`")))
}

pub(crate) fn read_to_string(path: &Path) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}
