//! Hyperplane sections of space-time meshes.
//!
//! Cutting a `(d+1)`-simplex with a hyperplane gives a `d`-polytope whose
//! vertices are the intersections of the simplex edges with the plane. For
//! `d = 3` these are tetrahedra and wedges, plus five-point pyramids when a
//! vertex lies on the plane; pyramids are split into two tetrahedra.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::linalg;
use crate::mesh::{NodeId, Points, SimplexMesh, SpaceTimeMesh};
use crate::scalar::Real;

/// Vertices closer to the plane than this, in units of the element size,
/// are treated as lying on it.
pub const SNAP_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum SliceError {
    #[error("spanning vectors of the hyperplane are linearly dependent")]
    DependentSpans,
    #[error("hyperplane in R^{plane} does not match mesh dimension {mesh}")]
    Dimension { plane: usize, mesh: usize },
    #[error("slice time {time} outside [{start}, {end}]")]
    TimeOutOfRange { time: f64, start: f64, end: f64 },
    #[error("field `{name}` has {found} values, expected {expected}")]
    FieldSize {
        name: String,
        found: usize,
        expected: usize,
    },
}

/// Affine hyperplane `p0 + span(p1, .., pd)` in `R^{d+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<T> {
    pub origin: Vec<T>,
    pub spans: Vec<Vec<T>>,
    normal: Vec<T>,
    time: Option<T>,
}

impl<T: Real> Hyperplane<T> {
    pub fn new(origin: Vec<T>, spans: Vec<Vec<T>>) -> Result<Self, SliceError> {
        let m = origin.len();
        if spans.len() + 1 != m || spans.iter().any(|s| s.len() != m) {
            return Err(SliceError::Dimension {
                plane: spans.len() + 1,
                mesh: m,
            });
        }
        let raw = linalg::orthogonal_complement(&spans, m);
        let scale: T = spans.iter().map(|s| linalg::norm(s)).fold(T::one(), |a, b| a * b);
        let len = linalg::norm(&raw);
        if !(len > T::c(1e-12) * scale) {
            return Err(SliceError::DependentSpans);
        }
        let normal = raw.iter().map(|&v| v / len).collect();
        Ok(Self {
            origin,
            spans,
            normal,
            time: None,
        })
    }

    /// The plane `t = time` in `R^{dim}` spanned by the spatial unit vectors.
    pub fn constant_time(time: T, dim: usize) -> Self {
        let mut origin = vec![T::zero(); dim];
        origin[dim - 1] = time;
        let spans = (0..dim - 1)
            .map(|i| {
                let mut e = vec![T::zero(); dim];
                e[i] = T::one();
                e
            })
            .collect();
        let mut normal = vec![T::zero(); dim];
        normal[dim - 1] = T::one();
        Self {
            origin,
            spans,
            normal,
            time: Some(time),
        }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn normal(&self) -> &[T] {
        &self.normal
    }

    /// `Some(t)` for a constant-time plane.
    pub fn time(&self) -> Option<T> {
        self.time
    }

    pub fn signed_distance(&self, x: &[T]) -> T {
        match self.time {
            Some(t) => x[x.len() - 1] - t,
            None => linalg::dot(&self.normal, &linalg::sub(x, &self.origin)),
        }
    }

    /// Coordinates of a point of the plane with respect to its spanning
    /// vectors; the spatial coordinates for a constant-time plane.
    pub fn local_coords(&self, x: &[T]) -> Vec<T> {
        if self.time.is_some() {
            return x[..x.len() - 1].to_vec();
        }
        let k = self.spans.len();
        let r = linalg::sub(x, &self.origin);
        let mut gram = vec![T::zero(); k * k];
        let mut rhs = vec![T::zero(); k];
        for i in 0..k {
            rhs[i] = linalg::dot(&self.spans[i], &r);
            for j in 0..k {
                gram[i * k + j] = linalg::dot(&self.spans[i], &self.spans[j]);
            }
        }
        linalg::solve(&gram, k, &rhs).expect("independent spans")
    }
}

/// Intersection of the segment `x1 -> x2` with `plane` by solving
/// `(p1 .. pd, x1 - x2) (mu, lambda)^T = x1 - p0`. Returns `None` when the
/// system is singular (segment parallel to the plane) or the intersection
/// lies outside the segment.
pub fn edge_plane_intersection<T: Real>(
    x1: &[T],
    x2: &[T],
    plane: &Hyperplane<T>,
) -> Option<(T, Vec<T>)> {
    let m = plane.dim();
    let mut a = vec![T::zero(); m * m];
    let dir = linalg::sub(x1, x2);
    for (j, s) in plane.spans.iter().chain(std::iter::once(&dir)).enumerate() {
        for i in 0..m {
            a[i * m + j] = s[i];
        }
    }
    let scale = plane
        .spans
        .iter()
        .map(|s| linalg::norm(s))
        .fold(linalg::norm(&dir), |acc, v| acc * v);
    if !(linalg::determinant(&a, m).abs() > T::c(1e-12) * scale) {
        return None;
    }
    let sol = linalg::solve(&a, m, &linalg::sub(x1, &plane.origin))?;
    let lambda = sol[m - 1];
    let eps = T::c(1e-12);
    if lambda < -eps || lambda > T::one() + eps {
        return None;
    }
    let lambda = lambda.max(T::zero()).min(T::one());
    Some((lambda, lerp(x1, x2, lambda)))
}

/// Closed-form intersection of a segment with the plane `t = time`.
pub fn edge_time_intersection<T: Real>(x1: &[T], x2: &[T], time: T) -> Option<(T, Vec<T>)> {
    let (t1, t2) = (x1[x1.len() - 1], x2[x2.len() - 1]);
    if t1 == t2 {
        return None;
    }
    let lambda = (time - t1) / (t2 - t1);
    if lambda < T::zero() || lambda > T::one() {
        return None;
    }
    let mut p = lerp(x1, x2, lambda);
    let last = p.len() - 1;
    p[last] = time;
    Some((lambda, p))
}

fn lerp<T: Real>(a: &[T], b: &[T], l: T) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + l * (y - x)).collect()
}

/// Cell types of a slice, with their legacy VTK ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Line,
    Triangle,
    Quad,
    Tetra,
    Wedge,
}

impl CellKind {
    pub fn vtk_type(self) -> u8 {
        match self {
            CellKind::Line => 3,
            CellKind::Triangle => 5,
            CellKind::Quad => 9,
            CellKind::Tetra => 10,
            CellKind::Wedge => 13,
        }
    }

    pub fn num_points(self) -> usize {
        match self {
            CellKind::Line => 2,
            CellKind::Triangle => 3,
            CellKind::Quad => 4,
            CellKind::Tetra => 4,
            CellKind::Wedge => 6,
        }
    }

    fn simplex(d: usize) -> Self {
        match d {
            1 => CellKind::Line,
            2 => CellKind::Triangle,
            3 => CellKind::Tetra,
            _ => panic!("no simplex cell in dimension {d}"),
        }
    }
}

/// Point of a section: vertex `a` (when `a == b`) or the point at `lambda`
/// on the edge `a -> b`, in element-local vertex numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutPoint<T> {
    pub a: usize,
    pub b: usize,
    pub lambda: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Section<T> {
    /// No `d`-dimensional intersection.
    Empty,
    /// The plane crosses the interior; cells index into `points`.
    Cut {
        points: Vec<CutPoint<T>>,
        cells: Vec<(CellKind, Vec<usize>)>,
    },
    /// A whole facet lies in the plane; `above` tells on which side the
    /// remaining vertex is.
    Facet { vertices: Vec<usize>, above: bool },
}

/// Intersects one `(d+1)`-simplex (vertex coordinates `x`) with `plane`.
/// `h` is the element size used for snapping.
pub fn slice_element<T: Real>(x: &[&[T]], plane: &Hyperplane<T>, h: T) -> Section<T> {
    let n = x.len() - 1;
    let d = n - 1;
    let tol = T::c(SNAP_TOL) * h;
    let side: Vec<i8> = x
        .iter()
        .map(|p| {
            let s = plane.signed_distance(p);
            if s.abs() <= tol {
                0
            } else if s > T::zero() {
                1
            } else {
                -1
            }
        })
        .collect();
    let zeros: Vec<usize> = (0..=n).filter(|&v| side[v] == 0).collect();
    let pos: Vec<usize> = (0..=n).filter(|&v| side[v] > 0).collect();
    let neg: Vec<usize> = (0..=n).filter(|&v| side[v] < 0).collect();
    if pos.is_empty() || neg.is_empty() {
        if zeros.len() == n {
            return Section::Facet {
                vertices: zeros,
                above: !pos.is_empty(),
            };
        }
        return Section::Empty;
    }

    let mut points: Vec<CutPoint<T>> = zeros
        .iter()
        .map(|&v| CutPoint {
            a: v,
            b: v,
            lambda: T::zero(),
        })
        .collect();
    let mut edge_index = HashMap::new();
    for &a in &pos {
        for &b in &neg {
            let (lo, hi) = (a.min(b), a.max(b));
            let lambda = match plane.time() {
                Some(t) => edge_time_intersection(x[lo], x[hi], t).map(|r| r.0),
                None => edge_plane_intersection(x[lo], x[hi], plane).map(|r| r.0),
            }
            .unwrap_or_else(|| {
                let (sa, sb) = (plane.signed_distance(x[lo]), plane.signed_distance(x[hi]));
                sa / (sa - sb)
            });
            edge_index.insert((a, b), points.len());
            edge_index.insert((b, a), points.len());
            points.push(CutPoint { a: lo, b: hi, lambda });
        }
    }
    let e = |a: usize, b: usize| edge_index[&(a, b)];
    let np = points.len();
    let cells = if np == d + 1 {
        vec![(CellKind::simplex(d), (0..np).collect())]
    } else if d == 2 && np == 4 {
        let (a, b, c, dd) = (pos[0], pos[1], neg[0], neg[1]);
        vec![(CellKind::Quad, vec![e(a, c), e(a, dd), e(b, dd), e(b, c)])]
    } else if d == 3 && np == 6 {
        let (minor, major) = if pos.len() == 2 { (&pos, &neg) } else { (&neg, &pos) };
        let mut w: Vec<usize> = major.iter().map(|&c| e(minor[0], c)).collect();
        w.extend(major.iter().map(|&c| e(minor[1], c)));
        vec![(CellKind::Wedge, w)]
    } else if d == 3 && np == 5 {
        let apex = 0;
        let (a, b, c, dd) = (pos[0], pos[1], neg[0], neg[1]);
        let q = [e(a, c), e(a, dd), e(b, dd), e(b, c)];
        vec![
            (CellKind::Tetra, vec![apex, q[0], q[1], q[2]]),
            (CellKind::Tetra, vec![apex, q[0], q[2], q[3]]),
        ]
    } else {
        unreachable!("{np} section points of a {n}-simplex")
    };
    Section::Cut { points, cells }
}

/// Data attached to a space-time mesh for interpolation onto slices.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldValues<T> {
    /// One value tuple per space-time node.
    Nodal(Vec<T>),
    /// One value tuple per element vertex, element-major; discontinuous
    /// across elements.
    Discontinuous(Vec<T>),
    /// One value tuple per element; becomes cell data.
    Element(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    pub name: String,
    pub components: usize,
    pub values: FieldValues<T>,
}

impl<T> Field<T> {
    pub fn nodal(name: &str, components: usize, values: Vec<T>) -> Self {
        Self {
            name: name.into(),
            components,
            values: FieldValues::Nodal(values),
        }
    }

    pub fn discontinuous(name: &str, components: usize, values: Vec<T>) -> Self {
        Self {
            name: name.into(),
            components,
            values: FieldValues::Discontinuous(values),
        }
    }

    pub fn element(name: &str, components: usize, values: Vec<T>) -> Self {
        Self {
            name: name.into(),
            components,
            values: FieldValues::Element(values),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceField<T> {
    pub name: String,
    pub components: usize,
    pub values: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceCell {
    pub kind: CellKind,
    pub points: Vec<usize>,
    /// Space-time element the cell was cut from.
    pub element: usize,
}

/// Cell complex produced by a hyperplane section.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceComplex<T> {
    /// Points in plane coordinates (space for constant-time slices).
    pub points: Points<T>,
    pub cells: Vec<SliceCell>,
    pub point_fields: Vec<SliceField<T>>,
    pub cell_fields: Vec<SliceField<T>>,
}

impl<T: Real> SliceComplex<T> {
    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn cell_measure(&self, cell: &SliceCell) -> T {
        let p = self.points.gather(&cell.points.iter().map(|&i| NodeId(i)).collect::<Vec<_>>());
        let simplex = |idx: &[usize]| linalg::simplex_measure(&idx.iter().map(|&i| p[i]).collect::<Vec<_>>());
        match cell.kind {
            CellKind::Line | CellKind::Triangle | CellKind::Tetra => linalg::simplex_measure(&p),
            CellKind::Quad => simplex(&[0, 1, 2]) + simplex(&[0, 2, 3]),
            CellKind::Wedge => simplex(&[0, 1, 2, 5]) + simplex(&[0, 1, 5, 4]) + simplex(&[0, 4, 5, 3]),
        }
    }

    pub fn total_measure(&self) -> T {
        self.cells.iter().map(|c| self.cell_measure(c)).sum()
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.cells.iter().filter(|c| c.kind == kind).count()
    }

    pub fn point_field(&self, name: &str) -> Option<&SliceField<T>> {
        self.point_fields.iter().find(|f| f.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum PointKey {
    Node(usize),
    Edge(usize, usize),
    LocalNode(usize, usize),
    LocalEdge(usize, usize, usize),
}

/// Slices `mesh` at the constant time `time`.
pub fn slice_mesh<T: Real>(
    mesh: &SpaceTimeMesh<T>,
    time: T,
    fields: &[Field<T>],
) -> Result<SliceComplex<T>, SliceError> {
    let (start, end) = (mesh.start_time(), mesh.end_time());
    let slack = T::c(SNAP_TOL) * (end - start);
    if time < start - slack || time > end + slack {
        return Err(SliceError::TimeOutOfRange {
            time: time.as_f64(),
            start: start.as_f64(),
            end: end.as_f64(),
        });
    }
    slice_mesh_plane(mesh, &Hyperplane::constant_time(time, mesh.points.dim()), fields)
}

/// Slices `mesh` with an arbitrary hyperplane.
pub fn slice_mesh_plane<T: Real>(
    mesh: &SpaceTimeMesh<T>,
    plane: &Hyperplane<T>,
    fields: &[Field<T>],
) -> Result<SliceComplex<T>, SliceError> {
    let n = mesh.points.dim();
    if plane.dim() != n {
        return Err(SliceError::Dimension {
            plane: plane.dim(),
            mesh: n,
        });
    }
    let nv = n + 1;
    for f in fields {
        let expected = f.components
            * match f.values {
                FieldValues::Nodal(_) => mesh.num_nodes(),
                FieldValues::Discontinuous(_) => mesh.num_elements() * nv,
                FieldValues::Element(_) => mesh.num_elements(),
            };
        let found = match &f.values {
            FieldValues::Nodal(v) | FieldValues::Discontinuous(v) | FieldValues::Element(v) => v.len(),
        };
        if found != expected {
            return Err(SliceError::FieldSize {
                name: f.name.clone(),
                found,
                expected,
            });
        }
    }
    let shared = !fields
        .iter()
        .any(|f| matches!(f.values, FieldValues::Discontinuous(_)));

    let sections: Vec<Section<T>> = mesh
        .elements
        .par_iter()
        .enumerate()
        .map(|(k, e)| slice_element(&mesh.points.gather(&e.nodes), plane, mesh.h[k]))
        .collect();
    let boundary: HashSet<&[NodeId]> = mesh
        .boundary_facets
        .iter()
        .map(|f| f.nodes.as_slice())
        .collect();

    let mut index: HashMap<PointKey, usize> = HashMap::new();
    // (element, global lo, global hi, local lo, local hi, lambda)
    let mut origin: Vec<(usize, usize, usize, usize, usize, T)> = Vec::new();
    let mut cells = Vec::new();
    let mut add_point = |k: usize, cp: &CutPoint<T>, origin: &mut Vec<_>| -> usize {
        let nodes = &mesh.elements[k].nodes;
        let (ga, gb) = (nodes[cp.a].0, nodes[cp.b].0);
        let key = match (cp.a == cp.b, shared) {
            (true, true) => PointKey::Node(ga),
            (true, false) => PointKey::LocalNode(k, ga),
            (false, true) => PointKey::Edge(ga.min(gb), ga.max(gb)),
            (false, false) => PointKey::LocalEdge(k, ga.min(gb), ga.max(gb)),
        };
        *index.entry(key).or_insert_with(|| {
            let (la, lb, lambda) = if ga <= gb {
                (cp.a, cp.b, cp.lambda)
            } else {
                (cp.b, cp.a, T::one() - cp.lambda)
            };
            origin.push((k, nodes[la].0, nodes[lb].0, la, lb, lambda));
            origin.len() - 1
        })
    };
    for (k, s) in sections.iter().enumerate() {
        match s {
            Section::Empty => {}
            Section::Cut { points, cells: local } => {
                let ids: Vec<usize> = points.iter().map(|cp| add_point(k, cp, &mut origin)).collect();
                for (kind, idx) in local {
                    cells.push(SliceCell {
                        kind: *kind,
                        points: idx.iter().map(|&i| ids[i]).collect(),
                        element: k,
                    });
                }
            }
            Section::Facet { vertices, above } => {
                let mut key: Vec<NodeId> = vertices.iter().map(|&v| mesh.elements[k].nodes[v]).collect();
                key.sort_unstable();
                if *above && !boundary.contains(key.as_slice()) {
                    continue;
                }
                let ids: Vec<usize> = vertices
                    .iter()
                    .map(|&v| {
                        let cp = CutPoint {
                            a: v,
                            b: v,
                            lambda: T::zero(),
                        };
                        add_point(k, &cp, &mut origin)
                    })
                    .collect();
                cells.push(SliceCell {
                    kind: CellKind::simplex(n - 1),
                    points: ids,
                    element: k,
                });
            }
        }
    }

    let mut coords = Vec::with_capacity(origin.len() * (n - 1));
    for &(_, ga, gb, _, _, lambda) in &origin {
        let xa = mesh.points.get(NodeId(ga));
        let xb = mesh.points.get(NodeId(gb));
        let mut p = lerp(xa, xb, lambda);
        if let Some(t) = plane.time() {
            p[n - 1] = t;
        }
        coords.extend(plane.local_coords(&p));
    }
    let points = Points::new(n - 1, coords);
    for c in &mut cells {
        orient(c, &points);
    }

    let mut point_fields = Vec::new();
    let mut cell_fields = Vec::new();
    for f in fields {
        let nc = f.components;
        match &f.values {
            FieldValues::Nodal(v) => {
                let mut out = Vec::with_capacity(origin.len() * nc);
                for &(_, ga, gb, _, _, l) in &origin {
                    for c in 0..nc {
                        out.push(v[ga * nc + c] + l * (v[gb * nc + c] - v[ga * nc + c]));
                    }
                }
                point_fields.push(SliceField {
                    name: f.name.clone(),
                    components: nc,
                    values: out,
                });
            }
            FieldValues::Discontinuous(v) => {
                let mut out = Vec::with_capacity(origin.len() * nc);
                for &(k, _, _, la, lb, l) in &origin {
                    for c in 0..nc {
                        let a = v[(k * nv + la) * nc + c];
                        let b = v[(k * nv + lb) * nc + c];
                        out.push(a + l * (b - a));
                    }
                }
                point_fields.push(SliceField {
                    name: f.name.clone(),
                    components: nc,
                    values: out,
                });
            }
            FieldValues::Element(v) => {
                let out = cells
                    .iter()
                    .flat_map(|c| v[c.element * nc..(c.element + 1) * nc].iter().copied())
                    .collect();
                cell_fields.push(SliceField {
                    name: f.name.clone(),
                    components: nc,
                    values: out,
                });
            }
        }
    }
    Ok(SliceComplex {
        points,
        cells,
        point_fields,
        cell_fields,
    })
}

/// Fixes the orientation of a cell: positive volume for simplices and
/// counter-clockwise quads; for wedges the first triangle faces away from the
/// second.
fn orient<T: Real>(cell: &mut SliceCell, points: &Points<T>) {
    let p = |i: usize| points.get(NodeId(cell.points[i]));
    match cell.kind {
        CellKind::Line => {}
        CellKind::Triangle | CellKind::Tetra => {
            let pts: Vec<&[T]> = (0..cell.points.len()).map(p).collect();
            if linalg::signed_volume(&pts) < T::zero() {
                cell.points.swap(0, 1);
            }
        }
        CellKind::Quad => {
            let area = linalg::signed_volume(&[p(0), p(1), p(2)]) + linalg::signed_volume(&[p(0), p(2), p(3)]);
            if area < T::zero() {
                cell.points.reverse();
            }
        }
        CellKind::Wedge => {
            let e1 = linalg::sub(p(1), p(0));
            let e2 = linalg::sub(p(2), p(0));
            let normal = linalg::orthogonal_complement(&[e1, e2], 3);
            let mut towards = vec![T::zero(); 3];
            for i in 0..3 {
                for (t, (&a, &b)) in towards.iter_mut().zip(p(3 + i).iter().zip(p(i))) {
                    *t += a - b;
                }
            }
            if linalg::dot(&normal, &towards) > T::zero() {
                cell.points.swap(1, 2);
                cell.points.swap(4, 5);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pentatope() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ]
    }

    #[test]
    fn midpoint_of_time_edge() {
        let plane = Hyperplane::constant_time(0.5, 4);
        let a = [0.0; 4];
        let b = [0.0, 0.0, 0.0, 1.0];
        let (l, p) = edge_plane_intersection(&a, &b, &plane).unwrap();
        assert_relative_eq!(l, 0.5, epsilon = 1e-15);
        assert_eq!(p, vec![0.0, 0.0, 0.0, 0.5]);
        let (l2, _) = edge_time_intersection(&a, &b, 0.5).unwrap();
        assert_eq!(l, l2);
    }

    #[test]
    fn edge_in_plane_is_singular() {
        let plane = Hyperplane::constant_time(0.0, 4);
        assert!(edge_plane_intersection(&[0.0; 4], &[1.0, 0.0, 0.0, 0.0], &plane).is_none());
    }

    #[test]
    fn dependent_spans_rejected() {
        let r = Hyperplane::new(vec![0.0; 3], vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]]);
        assert!(matches!(r, Err(SliceError::DependentSpans)));
    }

    #[test]
    fn reference_pentatope_gives_tetrahedron() {
        let x = pentatope();
        let refs: Vec<&[f64]> = x.iter().map(|p| &p[..]).collect();
        match slice_element(&refs, &Hyperplane::constant_time(0.5, 4), 1.0) {
            Section::Cut { points, cells } => {
                assert_eq!(points.len(), 4);
                assert_eq!(cells, vec![(CellKind::Tetra, vec![0, 1, 2, 3])]);
                assert!(points.iter().all(|p| p.b == 4 && p.lambda == 0.5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn below_range_is_empty() {
        let x = pentatope();
        let refs: Vec<&[f64]> = x.iter().map(|p| &p[..]).collect();
        assert_eq!(
            slice_element(&refs, &Hyperplane::constant_time(-0.5, 4), 1.0),
            Section::Empty
        );
    }

    #[test]
    fn general_plane_matches_closed_form() {
        // tilted plane, compared with the parametric solution
        let plane = Hyperplane::<f64>::new(
            vec![0.1, 0.2, 0.3],
            vec![vec![1.0, 0.0, 0.2], vec![0.0, 1.0, -0.1]],
        )
        .unwrap();
        let a = [0.3, -0.2, -1.0];
        let b = [0.1, 0.4, 2.0];
        let (l, p) = edge_plane_intersection(&a, &b, &plane).unwrap();
        let sa = plane.signed_distance(&a);
        let sb = plane.signed_distance(&b);
        assert_relative_eq!(l, sa / (sa - sb), epsilon = 1e-12);
        assert!(plane.signed_distance(&p).abs() < 1e-12);
    }
}
