//! Structured simplicial meshes for tests and demonstrations.
//!
//! Higher-dimensional boxes are built by repeatedly extruding along a new
//! axis with the same prism decomposition used for space-time meshes, so
//! every generated mesh is consistently numbered.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::extrusion::Hyperprism;
use crate::mesh::{make_consistent, BoundaryTag, NodeId, Points, Simplex, SpatialMesh};
use crate::scalar::Real;

/// Extrudes `(points, elements)` along a new last coordinate through the
/// given layer positions.
fn extrude_axis<T: Real>(
    points: &Points<T>,
    elements: &[Simplex],
    layers: &[T],
) -> (Points<T>, Vec<Simplex>) {
    let n = points.len();
    let dim = points.dim();
    let mut data = Vec::with_capacity(n * layers.len() * (dim + 1));
    for &z in layers {
        for p in points.iter() {
            data.extend_from_slice(p);
            data.push(z);
        }
    }
    let mut out = Vec::with_capacity(elements.len() * (layers.len() - 1) * (dim + 1));
    for l in 0..layers.len() - 1 {
        for e in elements {
            let prism = Hyperprism {
                bottom: e.nodes.iter().map(|v| NodeId(v.0 + l * n)).collect(),
                top: e.nodes.iter().map(|v| NodeId(v.0 + (l + 1) * n)).collect(),
                tau: layers[l + 1] - layers[l],
            };
            out.extend(prism.decompose());
        }
    }
    (Points::new(dim + 1, data), out)
}

fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let k = T::from_usize_lossy(n);
    (0..=n)
        .map(|i| a + (b - a) * T::from_usize_lossy(i) / k)
        .collect()
}

fn finish<T: Real>(points: Points<T>, elements: Vec<Simplex>) -> SpatialMesh<T> {
    let mut m = SpatialMesh::new(points, elements, BTreeMap::new())
        .expect("generated mesh is valid");
    m = make_consistent(m);
    m.tag_untagged_boundary(BoundaryTag::Dirichlet);
    m
}

fn interval_parts<T: Real>(a: T, b: T, n: usize) -> (Points<T>, Vec<Simplex>) {
    let x = linspace(a, b, n);
    let pts = Points::new(1, x);
    let els = (0..n).map(|i| Simplex::new([i, i + 1])).collect();
    (pts, els)
}

/// `[a, b]` split into `n` segments, boundary tagged Dirichlet.
pub fn interval<T: Real>(a: T, b: T, n: usize) -> SpatialMesh<T> {
    let (p, e) = interval_parts(a, b, n);
    finish(p, e)
}

pub fn unit_interval<T: Real>(n: usize) -> SpatialMesh<T> {
    interval(T::zero(), T::one(), n)
}

/// Axis-aligned box `[lo, hi]` in dimension 1 to 3 with `n[i]` cells per
/// direction; each cell splits into `d!` simplices.
pub fn boxed<T: Real>(lo: &[T], hi: &[T], n: &[usize]) -> SpatialMesh<T> {
    assert!(!lo.is_empty() && lo.len() == hi.len() && lo.len() == n.len());
    let (mut p, mut e) = interval_parts(lo[0], hi[0], n[0]);
    for i in 1..lo.len() {
        let layers = linspace(lo[i], hi[i], n[i]);
        (p, e) = extrude_axis(&p, &e, &layers);
    }
    finish(p, e)
}

pub fn unit_square<T: Real>(n: usize) -> SpatialMesh<T> {
    boxed(&[T::zero(); 2], &[T::one(); 2], &[n, n])
}

pub fn unit_cube<T: Real>(n: usize) -> SpatialMesh<T> {
    boxed(&[T::zero(); 3], &[T::one(); 3], &[n, n, n])
}

/// Disk of the given radius made of `rings` concentric rings with `6k`
/// nodes on ring `k`.
pub fn disk<T: Real>(radius: T, rings: usize) -> SpatialMesh<T> {
    let (p, e) = disk_parts(radius, rings);
    finish(p, e)
}

fn disk_parts<T: Real>(radius: T, rings: usize) -> (Points<T>, Vec<Simplex>) {
    assert!(rings >= 1);
    let mut rows: Vec<Vec<T>> = vec![vec![T::zero(), T::zero()]];
    let mut start = vec![0usize];
    for k in 1..=rings {
        start.push(rows.len());
        let r = radius * T::from_usize_lossy(k) / T::from_usize_lossy(rings);
        for j in 0..6 * k {
            let a = T::c(2.0 * PI) * T::from_usize_lossy(j) / T::from_usize_lossy(6 * k);
            rows.push(vec![r * a.cos(), r * a.sin()]);
        }
    }
    let mut els = Vec::new();
    for k in 1..=rings {
        let inner: Vec<usize> = if k == 1 {
            vec![0]
        } else {
            (start[k - 1]..start[k - 1] + 6 * (k - 1)).collect()
        };
        let outer: Vec<usize> = (start[k]..start[k] + 6 * k).collect();
        let (a, b) = (inner.len(), outer.len());
        if a == 1 {
            for j in 0..b {
                els.push(Simplex::new([inner[0], outer[j], outer[(j + 1) % b]]));
            }
            continue;
        }
        let (mut i, mut j) = (0, 0);
        while i < a || j < b {
            // advance along whichever ring has the smaller next angle
            if j < b && (i == a || (j + 1) * a <= (i + 1) * b) {
                els.push(Simplex::new([inner[i % a], outer[j], outer[(j + 1) % b]]));
                j += 1;
            } else {
                els.push(Simplex::new([inner[i % a], outer[j % b], inner[(i + 1) % a]]));
                i += 1;
            }
        }
    }
    (Points::from_rows(2, &rows), els)
}

/// Cylinder around the `z` axis between `z0` and `z1`.
pub fn cylinder<T: Real>(radius: T, z0: T, z1: T, rings: usize, layers: usize) -> SpatialMesh<T> {
    let (p, e) = disk_parts(radius, rings);
    let e = make_consistent(SpatialMesh::new(p.clone(), e, BTreeMap::new()).expect("valid disk")).elements;
    let (p, e) = extrude_axis(&p, &e, &linspace(z0, z1, layers));
    finish(p, e)
}

/// Coarse pump chamber: cylinder of radius 0.8 between `z = -0.4` and
/// `z = 0.4`. The lid is the moving membrane, two side strips around the
/// `x` axis are the in- and outflow valves, everything else is a wall.
pub fn pump_chamber<T: Real>(rings: usize, layers: usize) -> SpatialMesh<T> {
    let mut m = cylinder(T::c(0.8), T::c(-0.4), T::c(0.4), rings, layers);
    let top = T::c(0.4 - 1e-9);
    let r_side = T::c(0.8 * 0.9);
    let strip = T::c(0.35);
    m.retag_where(BoundaryTag::DirichletMoving, |c| c[2] > top);
    m.retag_where(BoundaryTag::RobinIn, |c| {
        c[0] > T::zero() && c[0].hypot(c[1]) > r_side && c[1].abs() < strip && c[2].abs() < T::c(0.39)
    });
    m.retag_where(BoundaryTag::RobinOut, |c| {
        c[0] < T::zero() && c[0].hypot(c[1]) > r_side && c[1].abs() < strip && c[2].abs() < T::c(0.39)
    });
    m
}

/// Straight pipe of radius 3 along `z` from -10 to 7: inflow at the bottom,
/// outflow at the top, the wall half with `y > 0` moves.
pub fn pipe<T: Real>(rings: usize, layers: usize) -> SpatialMesh<T> {
    let mut m = cylinder(T::c(3.0), T::c(-10.0), T::c(7.0), rings, layers);
    m.retag_where(BoundaryTag::DirichletMoving, |c| {
        c[1] > T::zero() && c[2] > T::c(-10.0 + 1e-9) && c[2] < T::c(7.0 - 1e-9)
    });
    m.retag_where(BoundaryTag::RobinIn, |c| c[2] < T::c(-10.0 + 1e-9));
    m.retag_where(BoundaryTag::RobinOut, |c| c[2] > T::c(7.0 - 1e-9));
    m
}
