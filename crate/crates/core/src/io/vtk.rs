//! Legacy ASCII VTK unstructured grids.

use std::fmt::Write as _;
use std::path::Path;

use super::{format_sci, IoError};
use crate::mesh::SpatialMesh;
use crate::scalar::Real;
use crate::slicing::{CellKind, SliceComplex, SliceField};

fn write_point(out: &mut String, p: &[f64]) {
    for c in 0..3 {
        if c > 0 {
            out.push(' ');
        }
        out.push_str(&format_sci(p.get(c).copied().unwrap_or(0.0)));
    }
    out.push('\n');
}

fn write_field<T: Real>(out: &mut String, f: &SliceField<T>) {
    let name = f.name.replace(char::is_whitespace, "_");
    let nc = f.components;
    if nc == 1 {
        writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for v in &f.values {
            writeln!(out, "{}", format_sci(v.as_f64())).unwrap();
        }
    } else if nc <= 3 {
        writeln!(out, "VECTORS {name} double").unwrap();
        for chunk in f.values.chunks(nc) {
            let p: Vec<f64> = chunk.iter().map(|v| v.as_f64()).collect();
            write_point(out, &p);
        }
    } else {
        writeln!(out, "SCALARS {name} double {nc}\nLOOKUP_TABLE default").unwrap();
        for chunk in f.values.chunks(nc) {
            let row: Vec<String> = chunk.iter().map(|v| format_sci(v.as_f64())).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
}

fn write_grid<'a, T: Real>(
    out: &mut String,
    title: &str,
    points: impl ExactSizeIterator<Item = &'a [T]>,
    cells: &[(CellKind, &[usize])],
) {
    writeln!(out, "# vtk DataFile Version 3.0").unwrap();
    writeln!(out, "{}", title.lines().next().unwrap_or("")).unwrap();
    writeln!(out, "ASCII\nDATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(out, "POINTS {} double", points.len()).unwrap();
    for p in points {
        let p: Vec<f64> = p.iter().map(|v| v.as_f64()).collect();
        write_point(out, &p);
    }
    let size: usize = cells.iter().map(|(_, c)| c.len() + 1).sum();
    writeln!(out, "CELLS {} {size}", cells.len()).unwrap();
    for (_, c) in cells {
        write!(out, "{}", c.len()).unwrap();
        for i in c.iter() {
            write!(out, " {i}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "CELL_TYPES {}", cells.len()).unwrap();
    for (k, _) in cells {
        writeln!(out, "{}", k.vtk_type()).unwrap();
    }
}

/// Renders a slice with its point and cell data.
pub fn format_slice<T: Real>(slice: &SliceComplex<T>, title: &str) -> String {
    let mut out = String::new();
    let cells: Vec<(CellKind, &[usize])> = slice
        .cells
        .iter()
        .map(|c| (c.kind, c.points.as_slice()))
        .collect();
    write_grid(&mut out, title, slice.points.iter(), &cells);
    if !slice.point_fields.is_empty() {
        writeln!(out, "POINT_DATA {}", slice.points.len()).unwrap();
        for f in &slice.point_fields {
            write_field(&mut out, f);
        }
    }
    if !slice.cell_fields.is_empty() {
        writeln!(out, "CELL_DATA {}", slice.cells.len()).unwrap();
        for f in &slice.cell_fields {
            write_field(&mut out, f);
        }
    }
    out
}

pub fn write_slice<T: Real>(path: &Path, slice: &SliceComplex<T>, title: &str) -> Result<(), IoError> {
    Ok(std::fs::write(path, format_slice(slice, title))?)
}

/// Renders a spatial mesh without data.
pub fn format_mesh<T: Real>(mesh: &SpatialMesh<T>, title: &str) -> String {
    let kind = match mesh.dim() {
        1 => CellKind::Line,
        2 => CellKind::Triangle,
        _ => CellKind::Tetra,
    };
    let cells: Vec<Vec<usize>> = mesh
        .elements
        .iter()
        .map(|e| e.nodes.iter().map(|n| n.0).collect())
        .collect();
    let refs: Vec<(CellKind, &[usize])> = cells.iter().map(|c| (kind, c.as_slice())).collect();
    let mut out = String::new();
    write_grid(&mut out, title, mesh.points.iter(), &refs);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Points;
    use crate::slicing::SliceCell;

    #[test]
    fn single_wedge_file() {
        let pts = vec![
            0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0,
        ];
        let slice = SliceComplex {
            points: Points::new(3, pts),
            cells: vec![SliceCell {
                kind: CellKind::Wedge,
                points: (0..6).collect(),
                element: 0,
            }],
            point_fields: vec![SliceField {
                name: "p".into(),
                components: 1,
                values: vec![0.5; 6],
            }],
            cell_fields: vec![],
        };
        let text = format_slice(&slice, "wedge");
        let expected_head = "# vtk DataFile Version 3.0\nwedge\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS 6 double\n0.0000000000000000e+00 0.0000000000000000e+00 0.0000000000000000e+00\n";
        assert!(text.starts_with(expected_head));
        assert!(text.contains("CELLS 1 7\n6 0 1 2 3 4 5\nCELL_TYPES 1\n13\n"));
        assert!(text.contains("POINT_DATA 6\nSCALARS p double 1\nLOOKUP_TABLE default\n5.0000000000000000e-01\n"));
    }

    #[test]
    fn planar_points_are_padded() {
        let m = crate::meshgen::unit_square::<f64>(1);
        let text = format_mesh(&m, "square");
        assert!(text.contains("1.0000000000000000e+00 1.0000000000000000e+00 0.0000000000000000e+00\n"));
        assert!(text.contains("CELL_TYPES 2\n5\n5\n"));
    }
}
