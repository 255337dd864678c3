//! CSV reports: residual histories and convergence tables.

use std::fmt::Write as _;
use std::path::Path;

use super::{format_sci, IoError};
use crate::scalar::Real;

pub fn format_residuals<T: Real>(history: &[T]) -> String {
    let mut out = String::from("iteration,relative_residual\n");
    for (i, r) in history.iter().enumerate() {
        writeln!(out, "{i},{}", format_sci(r.as_f64())).unwrap();
    }
    out
}

pub fn write_residuals<T: Real>(path: &Path, history: &[T]) -> Result<(), IoError> {
    Ok(std::fs::write(path, format_residuals(history))?)
}

/// One refinement level of a convergence study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRow {
    pub cells: usize,
    pub h: f64,
    pub velocity_l2: f64,
    pub pressure_l2: f64,
    pub iterations: usize,
}

/// Convergence table with observed orders between consecutive rows.
pub fn format_errors(rows: &[ErrorRow]) -> String {
    let mut out = String::from("cells,h,velocity_l2,velocity_order,pressure_l2,pressure_order,iterations\n");
    for (i, r) in rows.iter().enumerate() {
        let order = |f: fn(&ErrorRow) -> f64| {
            if i == 0 {
                String::new()
            } else {
                let p = &rows[i - 1];
                format_sci((f(p) / f(r)).ln() / (p.h / r.h).ln())
            }
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.cells,
            format_sci(r.h),
            format_sci(r.velocity_l2),
            order(|r| r.velocity_l2),
            format_sci(r.pressure_l2),
            order(|r| r.pressure_l2),
            r.iterations
        )
        .unwrap();
    }
    out
}

pub fn write_errors(path: &Path, rows: &[ErrorRow]) -> Result<(), IoError> {
    Ok(std::fs::write(path, format_errors(rows))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_lines() {
        let s = format_residuals(&[1.0, 0.5]);
        assert_eq!(
            s,
            "iteration,relative_residual\n0,1.0000000000000000e+00\n1,5.0000000000000000e-01\n"
        );
    }

    #[test]
    fn orders_from_halving() {
        let rows = [
            ErrorRow { cells: 4, h: 0.25, velocity_l2: 4e-2, pressure_l2: 1e-1, iterations: 3 },
            ErrorRow { cells: 8, h: 0.125, velocity_l2: 1e-2, pressure_l2: 5e-2, iterations: 5 },
        ];
        let s = format_errors(&rows);
        let last = s.lines().last().unwrap();
        assert!(last.starts_with("8,1.2500000000000000e-01,1.0000000000000000e-02,2.0000000000000000e+00,"));
    }
}
