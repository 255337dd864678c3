//! Conformity check: any two elements may only meet in a common sub-simplex
//! spanned by the nodes they share.
//!
//! Candidate pairs are elements whose bounding boxes overlap. Two simplices
//! meet exactly in the face of their shared nodes iff some hyperplane through
//! that face has the remaining vertices of each strictly on opposite sides.
//! Each pair first tries the facet planes and the centroid direction; pairs
//! that survive are decided by the minimum-norm point of a convex hull.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{NodeId, SimplexMesh};
use crate::linalg;
use crate::scalar::Real;

/// Relative tolerance for the geometric predicates, in units of the mesh
/// diameter.
pub const GEOMETRIC_TOL: f64 = 1e-10;
/// Relative measure below which an element counts as degenerate, in units of
/// `h^n`.
pub const DEGENERATE_TOL: f64 = 1e-12;

const MAX_VERTICES: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Element with (numerically) zero measure.
    Degenerate { element: usize, measure: f64 },
    /// A facet owned by more than two elements.
    NonManifoldFacet { facet: Vec<usize>, count: usize },
    /// Two elements on the same node set.
    DuplicateElement { a: usize, b: usize },
    /// `node` of element `element` lies on the closure of `host` without
    /// being one of its nodes.
    HangingNode {
        node: usize,
        element: usize,
        host: usize,
    },
    /// The closures of `a` and `b` intersect in more than the sub-simplex of
    /// their shared nodes.
    Overlap { a: usize, b: usize },
}

#[derive(Clone, Debug, Default)]
pub struct AdmissibilityReport {
    pub violations: Vec<Violation>,
    pub pairs_checked: usize,
    /// Pairs that needed the exact separation test.
    pub exact_tests: usize,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn degenerate(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Degenerate { .. }))
    }
}

struct Scaled {
    dim: usize,
    /// Scaled coordinates per element, `(n+1) * dim` values.
    coords: Vec<Vec<f64>>,
    lo: Vec<Vec<f64>>,
    hi: Vec<Vec<f64>>,
    /// Unit outward facet normals, facet `i` is opposite vertex `i`;
    /// `(n+1) * (dim+1)` values, the offset last.
    planes: Vec<Vec<f64>>,
}

fn scale_mesh<T: Real, M: SimplexMesh<T>>(mesh: &M) -> Scaled {
    let pts = mesh.points();
    let dim = pts.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in pts.iter() {
        for i in 0..dim {
            lo[i] = lo[i].min(p[i].as_f64());
            hi[i] = hi[i].max(p[i].as_f64());
        }
    }
    let diam = linalg::distance(&lo, &hi).max(f64::MIN_POSITIVE);
    let mut coords = Vec::with_capacity(mesh.num_elements());
    let mut elo = Vec::with_capacity(mesh.num_elements());
    let mut ehi = Vec::with_capacity(mesh.num_elements());
    for e in mesh.elements() {
        let mut c = Vec::with_capacity(e.nodes.len() * dim);
        let mut l = vec![f64::INFINITY; dim];
        let mut h = vec![f64::NEG_INFINITY; dim];
        for &n in &e.nodes {
            for (i, &x) in pts.get(n).iter().enumerate() {
                let s = (x.as_f64() - lo[i]) / diam;
                c.push(s);
                l[i] = l[i].min(s);
                h[i] = h[i].max(s);
            }
        }
        coords.push(c);
        elo.push(l);
        ehi.push(h);
    }
    let planes = coords.iter().map(|c| facet_planes(c, dim)).collect();
    Scaled {
        dim,
        coords,
        lo: elo,
        hi: ehi,
        planes,
    }
}

fn facet_planes(c: &[f64], dim: usize) -> Vec<f64> {
    let nv = c.len() / dim;
    let v = |a: usize| &c[a * dim..(a + 1) * dim];
    let mut out = Vec::with_capacity(nv * (dim + 1));
    for omit in 0..nv {
        let facet: Vec<usize> = (0..nv).filter(|&a| a != omit).collect();
        let base = v(facet[0]);
        let edges: Vec<Vec<f64>> = facet[1..].iter().map(|&a| linalg::sub(v(a), base)).collect();
        let mut normal = linalg::orthogonal_complement(&edges, dim);
        let len = linalg::norm(&normal);
        if len > 0.0 {
            normal.iter_mut().for_each(|x| *x /= len);
        }
        if linalg::dot(&normal, &linalg::sub(v(omit), base)) > 0.0 {
            normal.iter_mut().for_each(|x| *x = -*x);
        }
        let offset = linalg::dot(&normal, base);
        out.extend_from_slice(&normal);
        out.push(offset);
    }
    out
}

impl Scaled {
    fn vertex(&self, e: usize, a: usize) -> &[f64] {
        &self.coords[e][a * self.dim..(a + 1) * self.dim]
    }

    fn boxes_overlap(&self, a: usize, b: usize) -> bool {
        (0..self.dim).all(|i| {
            self.lo[a][i] <= self.hi[b][i] + GEOMETRIC_TOL
                && self.lo[b][i] <= self.hi[a][i] + GEOMETRIC_TOL
        })
    }

    /// Is there a facet plane of `a` through all shared vertices that has
    /// every non-shared vertex of `b` strictly on the far side?
    fn facet_plane_separates(&self, a: usize, b: usize, a_shared: &[bool], b_shared: &[bool]) -> bool {
        let nv = a_shared.len();
        let stride = self.dim + 1;
        (0..nv).filter(|&omit| !a_shared[omit]).any(|omit| {
            let plane = &self.planes[a][omit * stride..(omit + 1) * stride];
            let (normal, offset) = plane.split_at(self.dim);
            (0..nv)
                .filter(|&v| !b_shared[v])
                .all(|v| linalg::dot(normal, self.vertex(b, v)) - offset[0] > GEOMETRIC_TOL)
        })
    }

    /// Tries the centroid difference, projected orthogonally to the shared
    /// face, as the normal of a separating hyperplane.
    fn centroid_direction_separates(&self, a: usize, b: usize, a_shared: &[bool], b_shared: &[bool]) -> bool {
        let nv = a_shared.len();
        let dim = self.dim;
        let centroid = |e: usize| -> Vec<f64> {
            let mut c = vec![0.0; dim];
            for v in 0..nv {
                for (ci, x) in c.iter_mut().zip(self.vertex(e, v)) {
                    *ci += x / nv as f64;
                }
            }
            c
        };
        let mut w = linalg::sub(&centroid(b), &centroid(a));
        let shared: Vec<usize> = (0..nv).filter(|&v| a_shared[v]).collect();
        let origin: Vec<f64> = match shared.first() {
            Some(&s) => self.vertex(a, s).to_vec(),
            None => vec![0.0; dim],
        };
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for &s in shared.iter().skip(1) {
            let mut e = linalg::sub(self.vertex(a, s), &origin);
            for q in &basis {
                let f = linalg::dot(&e, q);
                e.iter_mut().zip(q).for_each(|(x, y)| *x -= f * y);
            }
            let len = linalg::norm(&e);
            if len > 0.0 {
                e.iter_mut().for_each(|x| *x /= len);
                basis.push(e);
            }
        }
        for q in &basis {
            let f = linalg::dot(&w, q);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= f * y);
        }
        let len = linalg::norm(&w);
        if len == 0.0 {
            return false;
        }
        let proj = |e: usize, v: usize| linalg::dot(&w, &linalg::sub(self.vertex(e, v), &origin)) / len;
        let a_max = (0..nv).filter(|&v| !a_shared[v]).map(|v| proj(a, v)).fold(f64::NEG_INFINITY, f64::max);
        let b_min = (0..nv).filter(|&v| !b_shared[v]).map(|v| proj(b, v)).fold(f64::INFINITY, f64::min);
        if shared.is_empty() {
            b_min - a_max > GEOMETRIC_TOL
        } else {
            a_max < -GEOMETRIC_TOL && b_min > GEOMETRIC_TOL
        }
    }

    /// Separation of the pair away from the shared face. With shared
    /// vertices, the edge directions leaving the face are projected onto its
    /// orthogonal complement and normalised; the pair meets only in the face
    /// iff the origin is not in the hull of `a`'s directions and the negated
    /// directions of `b`. Without shared vertices this is the distance
    /// between the two simplices.
    fn separation(&self, a: usize, b: usize, a_shared: &[bool], b_shared: &[bool]) -> f64 {
        let nv = a_shared.len();
        let shared: Vec<usize> = (0..nv).filter(|&v| a_shared[v]).collect();
        let Some(&first) = shared.first() else {
            let mut diffs = Vec::with_capacity(nv * nv);
            for u in 0..nv {
                for v in 0..nv {
                    diffs.push(linalg::sub(self.vertex(a, u), self.vertex(b, v)));
                }
            }
            return min_norm_point(&diffs);
        };
        let origin = self.vertex(a, first);
        let mut face: Vec<Vec<f64>> = Vec::new();
        for &s in shared.iter().skip(1) {
            push_orthonormal(&mut face, linalg::sub(self.vertex(a, s), origin));
        }
        let mut dirs = Vec::with_capacity(2 * nv);
        for (e, flags, sign) in [(a, a_shared, 1.0), (b, b_shared, -1.0)] {
            for v in (0..nv).filter(|&v| !flags[v]) {
                let mut d = linalg::sub(self.vertex(e, v), origin);
                for q in &face {
                    let f = linalg::dot(&d, q);
                    d.iter_mut().zip(q).for_each(|(x, y)| *x -= f * y);
                }
                let len = linalg::norm(&d);
                if len == 0.0 {
                    return 0.0;
                }
                d.iter_mut().for_each(|x| *x *= sign / len);
                dirs.push(d);
            }
        }
        min_norm_point(&dirs)
    }

    /// Barycentric coordinates of `p` with respect to element `e`.
    fn barycentric(&self, e: usize, p: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim;
        let v0 = self.vertex(e, 0);
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            let vj = self.vertex(e, j + 1);
            for i in 0..n {
                m[i * n + j] = vj[i] - v0[i];
            }
        }
        let rhs = linalg::sub(p, v0);
        let lam = linalg::solve(&m, n, &rhs)?;
        let l0 = 1.0 - lam.iter().sum::<f64>();
        Some(std::iter::once(l0).chain(lam).collect())
    }
}

/// Checks every pair of elements whose closures may intersect.
pub fn check_admissible<T: Real, M: SimplexMesh<T> + Sync>(mesh: &M) -> AdmissibilityReport {
    let elements = mesh.elements();
    let pts = mesh.points();
    let mut report = AdmissibilityReport::default();
    if elements.is_empty() {
        return report;
    }
    let n = pts.dim();

    let degenerate: Vec<bool> = elements
        .par_iter()
        .map(|e| {
            let h = super::max_edge_length(e, pts).as_f64();
            super::simplex_measure(e, pts).as_f64() <= DEGENERATE_TOL * h.powi(n as i32)
        })
        .collect();
    for (k, &d) in degenerate.iter().enumerate() {
        if d {
            report.violations.push(Violation::Degenerate {
                element: k,
                measure: super::simplex_measure(&elements[k], pts).as_f64(),
            });
        }
    }

    let mut facet_count: HashMap<Vec<NodeId>, usize> = HashMap::new();
    for e in elements {
        for omit in 0..e.nodes.len() {
            let mut key: Vec<NodeId> = e
                .nodes
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != omit)
                .map(|(_, &v)| v)
                .collect();
            key.sort_unstable();
            *facet_count.entry(key).or_default() += 1;
        }
    }
    let mut bad_facets: Vec<_> = facet_count
        .into_iter()
        .filter(|&(_, c)| c > 2)
        .map(|(k, c)| (k.iter().map(|n| n.0).collect::<Vec<_>>(), c))
        .collect();
    bad_facets.sort();
    for (facet, count) in bad_facets {
        report
            .violations
            .push(Violation::NonManifoldFacet { facet, count });
    }

    let scaled = scale_mesh(mesh);
    // uniform grid keyed by box centres; with the cell size at least the
    // largest extent, overlapping boxes have centres in neighbouring cells
    let mut cell = vec![0.0f64; n];
    for k in 0..elements.len() {
        for i in 0..n {
            cell[i] = cell[i].max(scaled.hi[k][i] - scaled.lo[k][i]);
        }
    }
    for c in &mut cell {
        *c = c.max(1e-6) + 2.0 * GEOMETRIC_TOL;
    }
    let cell_of = |k: usize| -> Vec<i64> {
        (0..n)
            .map(|i| (0.5 * (scaled.lo[k][i] + scaled.hi[k][i]) / cell[i]).floor() as i64)
            .collect()
    };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for k in 0..elements.len() {
        grid.entry(cell_of(k)).or_default().push(k);
    }

    let results: Vec<(Vec<Violation>, usize, usize)> = (0..elements.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            if degenerate[i] {
                return (out, 0, 0);
            }
            let mut cand: Vec<usize> = Vec::new();
            let centre = cell_of(i);
            let lo: Vec<i64> = centre.iter().map(|c| c - 1).collect();
            let hi: Vec<i64> = centre.iter().map(|c| c + 1).collect();
            for_each_cell(&lo, &hi, |c| {
                if let Some(list) = grid.get(c) {
                    cand.extend(list.iter().copied().filter(|&j| j > i));
                }
            });
            let mut checked = 0;
            let mut exact = 0;
            for j in cand {
                if degenerate[j] || !scaled.boxes_overlap(i, j) {
                    continue;
                }
                checked += 1;
                let ei = &elements[i].nodes;
                let ej = &elements[j].nodes;
                let mut shared_buf = [false; 2 * MAX_VERTICES];
                let (i_shared, j_shared) = shared_buf.split_at_mut(MAX_VERTICES);
                for (a, v) in ei.iter().enumerate() {
                    i_shared[a] = ej.contains(v);
                }
                for (b, v) in ej.iter().enumerate() {
                    j_shared[b] = ei.contains(v);
                }
                let (i_shared, j_shared) = (&i_shared[..ei.len()], &j_shared[..ej.len()]);
                if i_shared.iter().all(|&s| s) {
                    out.push(Violation::DuplicateElement { a: i, b: j });
                    continue;
                }
                if scaled.facet_plane_separates(i, j, i_shared, j_shared)
                    || scaled.facet_plane_separates(j, i, j_shared, i_shared)
                {
                    continue;
                }
                if scaled.centroid_direction_separates(i, j, i_shared, j_shared) {
                    continue;
                }
                exact += 1;
                if scaled.separation(i, j, i_shared, j_shared) <= GEOMETRIC_TOL {
                    out.push(classify(&scaled, elements, i, j, i_shared, j_shared));
                }
            }
            (out, checked, exact)
        })
        .collect();
    for (v, c, e) in results {
        report.violations.extend(v);
        report.pairs_checked += c;
        report.exact_tests += e;
    }
    report
}

fn classify(
    scaled: &Scaled,
    elements: &[super::Simplex],
    i: usize,
    j: usize,
    i_shared: &[bool],
    j_shared: &[bool],
) -> Violation {
    let inside = |host: usize, guest: usize, shared: &[bool]| -> Option<usize> {
        (0..shared.len()).find(|&v| {
            !shared[v]
                && scaled
                    .barycentric(host, scaled.vertex(guest, v))
                    .is_some_and(|l| l.iter().all(|&x| x >= -GEOMETRIC_TOL))
        })
    };
    if let Some(v) = inside(i, j, j_shared) {
        return Violation::HangingNode {
            node: elements[j].nodes[v].0,
            element: j,
            host: i,
        };
    }
    if let Some(v) = inside(j, i, i_shared) {
        return Violation::HangingNode {
            node: elements[i].nodes[v].0,
            element: i,
            host: j,
        };
    }
    Violation::Overlap { a: i, b: j }
}

/// Distance from the origin to the convex hull of `points` (Wolfe's
/// minimum-norm-point algorithm).
fn min_norm_point(points: &[Vec<f64>]) -> f64 {
    let dim = points[0].len();
    let scale = points.iter().map(|p| linalg::dot(p, p)).fold(0.0, f64::max);
    let eps = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let first = (0..points.len())
        .min_by(|&i, &j| linalg::dot(&points[i], &points[i]).total_cmp(&linalg::dot(&points[j], &points[j])))
        .expect("non-empty point set");
    let mut set = vec![first];
    let mut weights = vec![1.0];
    let mut x = points[first].clone();
    for _ in 0..100 {
        let xx = linalg::dot(&x, &x);
        let (j, xp) = (0..points.len())
            .map(|j| (j, linalg::dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty point set");
        if xx - xp <= eps || set.contains(&j) || set.len() > dim {
            return xx.sqrt();
        }
        set.push(j);
        weights.push(0.0);
        loop {
            let Some(alpha) = affine_minimizer(points, &set) else {
                return xx.sqrt();
            };
            if alpha.iter().all(|&w| w > 1e-14) {
                weights = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (&l, &w) in weights.iter().zip(&alpha) {
                if w <= 1e-14 && l - w > 0.0 {
                    theta = theta.min(l / (l - w));
                }
            }
            for (l, &w) in weights.iter_mut().zip(&alpha) {
                *l += theta * (w - *l);
            }
            let keep: Vec<bool> = weights.iter().map(|&l| l > 1e-14).collect();
            let mut k = 0;
            set.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            weights.retain(|&l| l > 1e-14);
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|l| *l /= total);
            if set.is_empty() {
                return 0.0;
            }
        }
        x = vec![0.0; dim];
        for (&i, &l) in set.iter().zip(&weights) {
            x.iter_mut().zip(&points[i]).for_each(|(a, b)| *a += l * b);
        }
    }
    linalg::norm(&x)
}

/// Weights summing to one that minimise the norm of the affine combination.
fn affine_minimizer(points: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let m = set.len();
    let n = m + 1;
    let mut a = vec![0.0; n * n];
    for r in 0..m {
        for c in 0..m {
            a[r * n + c] = linalg::dot(&points[set[r]], &points[set[c]]);
        }
        a[r * n + m] = 1.0;
        a[m * n + r] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[m] = 1.0;
    let sol = linalg::solve(&a, n, &rhs)?;
    Some(sol[..m].to_vec())
}

fn push_orthonormal(basis: &mut Vec<Vec<f64>>, mut e: Vec<f64>) {
    for q in basis.iter() {
        let f = linalg::dot(&e, q);
        e.iter_mut().zip(q).for_each(|(x, y)| *x -= f * y);
    }
    let len = linalg::norm(&e);
    if len > 1e-12 {
        e.iter_mut().for_each(|x| *x /= len);
        basis.push(e);
    }
}

fn for_each_cell(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut d = 0;
        loop {
            if d == cur.len() {
                return;
            }
            if cur[d] < hi[d] {
                cur[d] += 1;
                break;
            }
            cur[d] = lo[d];
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Points, Simplex, SpatialMesh};
    use std::collections::BTreeMap;

    fn mesh2(rows: &[[f64; 2]], els: &[[usize; 3]]) -> SpatialMesh<f64> {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SpatialMesh::new(
            Points::from_rows(2, &rows),
            els.iter().map(|e| Simplex::new(*e)).collect(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn min_norm_point_distances() {
        // segment from (1, -1) to (1, 1) is at distance 1
        let d = min_norm_point(&[vec![1.0, -1.0], vec![1.0, 1.0]]);
        assert!((d - 1.0).abs() < 1e-12, "{d}");
        // triangle containing the origin
        let d = min_norm_point(&[vec![1.0, 0.0], vec![-1.0, 1.0], vec![-1.0, -1.0]]);
        assert!(d < 1e-12, "{d}");
        // tetrahedron face x + y + z = 1 seen from the origin
        let d = min_norm_point(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![2.0, 2.0, 2.0]]);
        assert!((d - 1.0 / 3f64.sqrt()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn shared_edge_is_admissible() {
        let m = mesh2(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            &[[0, 1, 2], [0, 2, 3]],
        );
        let r = check_admissible(&m);
        assert!(r.is_admissible(), "{:?}", r.violations);
        assert_eq!(r.pairs_checked, 1);
    }

    #[test]
    fn shared_vertex_is_admissible() {
        let m = mesh2(
            &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
            &[[0, 1, 2], [0, 3, 4]],
        );
        assert!(check_admissible(&m).is_admissible());
    }

    #[test]
    fn hanging_node_is_reported() {
        // node 4 sits on the midpoint of edge 0-1 of the big triangle
        let m = mesh2(
            &[[0.0, 0.0], [2.0, 0.0], [1.0, 2.0], [0.0, -1.0], [1.0, 0.0], [2.0, -1.0]],
            &[[0, 1, 2], [0, 3, 4], [4, 3, 5], [4, 5, 1]],
        );
        let r = check_admissible(&m);
        assert!(!r.is_admissible());
        assert!(r.violations.iter().any(|v| matches!(
            v,
            Violation::HangingNode { node: 4, host: 0, .. }
        )));
    }

    #[test]
    fn overlapping_disjoint_node_sets() {
        let m = mesh2(
            &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.2, 0.2], [1.2, 0.2], [0.2, 1.2]],
            &[[0, 1, 2], [3, 4, 5]],
        );
        let r = check_admissible(&m);
        assert_eq!(r.violations.len(), 1);
        assert!(matches!(
            r.violations[0],
            Violation::HangingNode { .. } | Violation::Overlap { .. }
        ));
    }

    #[test]
    fn crossing_without_vertex_containment_is_overlap() {
        // star of David: no vertex of either triangle lies inside the other
        let m = mesh2(
            &[
                [0.0, 1.0],
                [-0.866, -0.5],
                [0.866, -0.5],
                [0.0, -1.0],
                [0.866, 0.5],
                [-0.866, 0.5],
            ],
            &[[0, 1, 2], [3, 4, 5]],
        );
        let r = check_admissible(&m);
        assert_eq!(r.violations, vec![Violation::Overlap { a: 0, b: 1 }]);
    }

    #[test]
    fn collinear_partial_edge_overlap() {
        // the triangles share node 0 and overlap along part of the x-axis
        let m = mesh2(
            &[[0.0, 0.0], [2.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, -1.0]],
            &[[0, 1, 2], [0, 3, 4]],
        );
        assert!(!check_admissible(&m).is_admissible());
    }

    #[test]
    fn degenerate_element_reported_separately() {
        let m = mesh2(
            &[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]],
            &[[0, 1, 2], [0, 1, 3]],
        );
        let r = check_admissible(&m);
        assert_eq!(r.degenerate().count(), 1);
    }
}
