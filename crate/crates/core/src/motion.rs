//! Prescribed boundary motion and its extension to interior nodes.
//!
//! A motion maps a point `X` of the initial boundary to a displacement
//! `g(X, t)`, so that `x = X + g(X, t)`. Interior nodes follow by solving a
//! componentwise discrete Laplace problem with the boundary displacement as
//! Dirichlet data.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::krylov::{cg, Jacobi};
use crate::linalg;
use crate::mesh::{BoundaryTag, NodeId, SpatialMesh};
use crate::scalar::Real;
use crate::sparse::CooMatrix;

/// Relative residual of the smoothing solves.
pub const SMOOTHING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PumpReading {
    /// `g = (h0 + A sin^2(pi t)(1 - r^2/R^2)) e_z - X`, moving all coordinates.
    #[default]
    Literal,
    /// Only the `z` coordinate moves: `g = (h0 + A sin^2(pi t)(1 - r^2/R^2) - X_z) e_z`.
    ZOnly,
}

/// Membrane of a diaphragm pump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpParams<T> {
    pub rest_height: T,
    pub amplitude: T,
    pub radius: T,
    pub reading: PumpReading,
}

impl<T: Real> Default for PumpParams<T> {
    fn default() -> Self {
        Self {
            rest_height: T::c(0.4),
            amplitude: T::one(),
            radius: T::c(0.75),
            reading: PumpReading::Literal,
        }
    }
}

/// Wall strip of a pipe lifted proportionally to the distance from an
/// anchor plane: `A |X_2 - a| / L sin^2(pi t) e_z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YPipeParams<T> {
    pub amplitude: T,
    pub anchor: T,
    pub length: T,
}

impl<T: Real> Default for YPipeParams<T> {
    fn default() -> Self {
        Self {
            amplitude: T::c(4.0),
            anchor: T::c(-3.0),
            length: T::c(7.0),
        }
    }
}

pub type PointField<T> = Arc<dyn Fn(&[T], T) -> Vec<T> + Send + Sync>;

/// Motion given as closures of the reference point and time.
#[derive(Clone)]
pub struct UserMotion<T> {
    pub displacement: PointField<T>,
    /// Time derivative; approximated by central differences when absent.
    pub velocity: Option<PointField<T>>,
}

/// Per-node displacements tabulated at increasing times, linear in between.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedMotion<T> {
    pub times: Vec<T>,
    pub fields: Vec<DisplacementField<T>>,
}

#[derive(Clone)]
pub enum MotionKind<T> {
    None,
    Pump(PumpParams<T>),
    YPipe(YPipeParams<T>),
    User(UserMotion<T>),
    Tabulated(TabulatedMotion<T>),
}

impl<T> fmt::Debug for MotionKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MotionKind::None => "None",
            MotionKind::Pump(_) => "Pump",
            MotionKind::YPipe(_) => "YPipe",
            MotionKind::User(_) => "User",
            MotionKind::Tabulated(_) => "Tabulated",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    /// Interior nodes solve a discrete vector Laplacian.
    #[default]
    Laplacian,
    /// Interior nodes stay where they are.
    BoundaryOnly,
}

#[derive(Clone, Debug)]
pub struct MotionSpec<T> {
    pub kind: MotionKind<T>,
    /// Boundary tags whose nodes follow the motion.
    pub moving_tags: Vec<BoundaryTag>,
    pub smoothing: Smoothing,
    /// Admissible time range `[0, end_time]`; unbounded above when `None`.
    pub end_time: Option<T>,
}

impl<T: Real> MotionSpec<T> {
    pub fn none() -> Self {
        Self::new(MotionKind::None)
    }

    pub fn new(kind: MotionKind<T>) -> Self {
        Self {
            kind,
            moving_tags: vec![BoundaryTag::DirichletMoving],
            smoothing: Smoothing::Laplacian,
            end_time: None,
        }
    }

    pub fn pump(params: PumpParams<T>) -> Self {
        Self::new(MotionKind::Pump(params))
    }

    pub fn ypipe(params: YPipeParams<T>) -> Self {
        Self::new(MotionKind::YPipe(params))
    }

    pub fn is_static(&self) -> bool {
        matches!(self.kind, MotionKind::None)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MotionError {
    #[error("time {time} outside [0, {end}]")]
    TimeOutOfRange { time: f64, end: f64 },
    #[error("point has dimension {found}, motion needs {expected}")]
    Dimension { found: usize, expected: usize },
    #[error("tabulated motion is defined per node, not per point")]
    NotPointwise,
    #[error("tabulated motion has {found} nodes, mesh has {expected}")]
    TableSize { found: usize, expected: usize },
    #[error("smoothing needs at least one boundary node")]
    EmptyBoundary,
    #[error("smoothing solve failed: {0}")]
    Solver(#[from] crate::krylov::KrylovError),
}

/// Nodal vectors in `R^d`, stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField<T> {
    pub dim: usize,
    pub values: Vec<T>,
}

impl<T: Real> DisplacementField<T> {
    pub fn zeros(dim: usize, nodes: usize) -> Self {
        Self {
            dim,
            values: vec![T::zero(); dim * nodes],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, node: usize) -> &[T] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    #[inline]
    pub fn set(&mut self, node: usize, v: &[T]) {
        self.values[node * self.dim..(node + 1) * self.dim].copy_from_slice(v);
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

fn check_time<T: Real>(spec: &MotionSpec<T>, t: T) -> Result<(), MotionError> {
    let end = spec.end_time.map_or(f64::INFINITY, |e| e.as_f64());
    let slack = 1e-12 * end.max(1.0);
    if t.as_f64() < -slack || t.as_f64() > end + slack {
        return Err(MotionError::TimeOutOfRange {
            time: t.as_f64(),
            end,
        });
    }
    Ok(())
}

fn sin2<T: Real>(t: T) -> T {
    let s = (T::c(PI) * t).sin();
    s * s
}

/// Displacement `g(X, t)` of a point on the moving boundary.
pub fn eval_motion<T: Real>(spec: &MotionSpec<T>, x: &[T], t: T) -> Result<Vec<T>, MotionError> {
    check_time(spec, t)?;
    let d = x.len();
    match &spec.kind {
        MotionKind::None => Ok(vec![T::zero(); d]),
        MotionKind::Pump(p) => {
            if d != 3 {
                return Err(MotionError::Dimension {
                    found: d,
                    expected: 3,
                });
            }
            let r2 = (x[0] * x[0] + x[1] * x[1]) / (p.radius * p.radius);
            let z = p.rest_height + p.amplitude * sin2(t) * (T::one() - r2);
            Ok(match p.reading {
                PumpReading::Literal => vec![-x[0], -x[1], z - x[2]],
                PumpReading::ZOnly => vec![T::zero(), T::zero(), z - x[2]],
            })
        }
        MotionKind::YPipe(p) => {
            if d != 3 {
                return Err(MotionError::Dimension {
                    found: d,
                    expected: 3,
                });
            }
            let lift = p.amplitude * (x[2] - p.anchor).abs() / p.length * sin2(t);
            Ok(vec![T::zero(), T::zero(), lift])
        }
        MotionKind::User(u) => Ok((u.displacement)(x, t)),
        MotionKind::Tabulated(_) => Err(MotionError::NotPointwise),
    }
}

/// Time derivative `dg/dt (X, t)`, the wall velocity of a moving boundary.
pub fn motion_velocity<T: Real>(spec: &MotionSpec<T>, x: &[T], t: T) -> Result<Vec<T>, MotionError> {
    let d = x.len();
    // d/dt sin^2(pi t) = pi sin(2 pi t)
    let ds2 = T::c(PI) * (T::c(2.0 * PI) * t).sin();
    match &spec.kind {
        MotionKind::None => Ok(vec![T::zero(); d]),
        MotionKind::Pump(p) => {
            eval_motion(spec, x, t)?;
            let r2 = (x[0] * x[0] + x[1] * x[1]) / (p.radius * p.radius);
            Ok(vec![T::zero(), T::zero(), p.amplitude * ds2 * (T::one() - r2)])
        }
        MotionKind::YPipe(p) => {
            eval_motion(spec, x, t)?;
            let v = p.amplitude * (x[2] - p.anchor).abs() / p.length * ds2;
            Ok(vec![T::zero(), T::zero(), v])
        }
        MotionKind::User(u) => match &u.velocity {
            Some(v) => Ok(v(x, t)),
            None => {
                let h = T::c(1e-6);
                let a = (u.displacement)(x, t + h);
                let b = (u.displacement)(x, t - h);
                Ok(a.iter().zip(&b).map(|(&p, &q)| (p - q) / (h + h)).collect())
            }
        },
        MotionKind::Tabulated(_) => Err(MotionError::NotPointwise),
    }
}

fn tabulated_at<T: Real>(
    tab: &TabulatedMotion<T>,
    dim: usize,
    nodes: usize,
    t: T,
) -> Result<DisplacementField<T>, MotionError> {
    if tab.times.is_empty() {
        return Ok(DisplacementField::zeros(dim, nodes));
    }
    for f in &tab.fields {
        if f.len() != nodes || f.dim != dim {
            return Err(MotionError::TableSize {
                found: f.len(),
                expected: nodes,
            });
        }
    }
    let i = tab.times.partition_point(|&s| s <= t);
    if i == 0 {
        return Ok(tab.fields[0].clone());
    }
    if i == tab.times.len() {
        return Ok(tab.fields[i - 1].clone());
    }
    let (t0, t1) = (tab.times[i - 1], tab.times[i]);
    let w = (t - t0) / (t1 - t0);
    let values = tab.fields[i - 1]
        .values
        .iter()
        .zip(&tab.fields[i].values)
        .map(|(&a, &b)| a + w * (b - a))
        .collect();
    Ok(DisplacementField { dim, values })
}

/// Boundary displacement at time `t`: the motion on nodes of moving facets,
/// zero on every other boundary node. Also returns the boundary node mask.
pub fn boundary_displacement<T: Real>(
    mesh: &SpatialMesh<T>,
    spec: &MotionSpec<T>,
    t: T,
) -> Result<(DisplacementField<T>, Vec<bool>), MotionError> {
    check_time(spec, t)?;
    let d = mesh.dim();
    let n = mesh.points.len();
    let boundary = mesh.boundary_nodes();
    let moving = mesh.nodes_with_tags(&spec.moving_tags);
    let mut field = DisplacementField::zeros(d, n);
    if let MotionKind::Tabulated(tab) = &spec.kind {
        let full = tabulated_at(tab, d, n, t)?;
        for i in (0..n).filter(|&i| moving[i]) {
            field.set(i, full.get(i));
        }
        return Ok((field, boundary));
    }
    if spec.is_static() {
        return Ok((field, boundary));
    }
    for i in (0..n).filter(|&i| moving[i]) {
        let g = eval_motion(spec, mesh.points.get(NodeId(i)), t)?;
        field.set(i, &g);
    }
    Ok((field, boundary))
}

/// Extends boundary data to all nodes by a componentwise P1 Laplace solve.
/// Values on nodes with `is_boundary[i]` are kept as given.
pub fn smooth_displacement<T: Real>(
    mesh: &SpatialMesh<T>,
    boundary_data: &DisplacementField<T>,
    is_boundary: &[bool],
) -> Result<DisplacementField<T>, MotionError> {
    let n = mesh.points.len();
    let d = boundary_data.dim;
    if !is_boundary.iter().any(|&b| b) {
        return Err(MotionError::EmptyBoundary);
    }
    let mut interior_index = vec![usize::MAX; n];
    let mut ni = 0;
    for i in 0..n {
        if !is_boundary[i] {
            interior_index[i] = ni;
            ni += 1;
        }
    }
    let mut out = boundary_data.clone();
    for i in (0..n).filter(|&i| !is_boundary[i]) {
        out.set(i, &vec![T::zero(); d]);
    }
    if ni == 0 {
        return Ok(out);
    }

    let mut a = CooMatrix::new(ni, ni);
    let mut rhs = vec![vec![T::zero(); ni]; d];
    for e in &mesh.elements {
        let p = mesh.points.gather(&e.nodes);
        let Some(g) = linalg::barycentric_gradients(&p) else {
            continue;
        };
        let vol = linalg::signed_volume(&p).abs();
        for (ia, na) in e.nodes.iter().enumerate() {
            let ra = interior_index[na.0];
            if ra == usize::MAX {
                continue;
            }
            for (ib, nb) in e.nodes.iter().enumerate() {
                let kab = vol * linalg::dot(&g[ia], &g[ib]);
                let cb = interior_index[nb.0];
                if cb == usize::MAX {
                    for (c, r) in rhs.iter_mut().enumerate() {
                        r[ra] -= kab * boundary_data.get(nb.0)[c];
                    }
                } else {
                    a.push(ra, cb, kab);
                }
            }
        }
    }
    let a = a.to_csr();
    let prec = Jacobi::new(&a);
    for (c, r) in rhs.iter().enumerate() {
        let sol = cg(&a, &prec, r, T::c(SMOOTHING_TOL), 10 * ni + 100)?;
        for i in 0..n {
            let k = interior_index[i];
            if k != usize::MAX {
                out.values[i * d + c] = sol.x[k];
            }
        }
    }
    Ok(out)
}

/// Nodal displacement of the whole mesh at time `t`.
pub fn displacement_at<T: Real>(
    mesh: &SpatialMesh<T>,
    spec: &MotionSpec<T>,
    t: T,
) -> Result<DisplacementField<T>, MotionError> {
    let (boundary, mask) = boundary_displacement(mesh, spec, t)?;
    if spec.is_static() || boundary.max_abs() == T::zero() {
        return Ok(boundary);
    }
    match spec.smoothing {
        Smoothing::BoundaryOnly => Ok(boundary),
        Smoothing::Laplacian => smooth_displacement(mesh, &boundary, &mask),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshgen;

    #[test]
    fn pump_rest_and_peak() {
        let spec = MotionSpec::<f64>::pump(PumpParams::default());
        let g = eval_motion(&spec, &[0.0, 0.0, 0.4], 0.0).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-15));
        let g = eval_motion(&spec, &[0.0, 0.0, 0.4], 0.5).unwrap();
        assert!((g[2] - 1.0).abs() < 1e-14 && g[0] == 0.0 && g[1] == 0.0);
    }

    #[test]
    fn literal_reading_moves_lateral_coordinates() {
        let lit = MotionSpec::<f64>::pump(PumpParams::default());
        let z = MotionSpec::pump(PumpParams {
            reading: PumpReading::ZOnly,
            ..PumpParams::default()
        });
        let x = [0.3, -0.2, 0.4];
        assert_eq!(eval_motion(&lit, &x, 0.0).unwrap()[0], -0.3);
        assert_eq!(eval_motion(&z, &x, 0.0).unwrap()[0], 0.0);
    }

    #[test]
    fn ypipe_anchor_is_fixed() {
        let spec = MotionSpec::<f64>::ypipe(YPipeParams::default());
        for t in [0.1, 0.5, 0.9] {
            let g = eval_motion(&spec, &[1.0, 2.0, -3.0], t).unwrap();
            assert_eq!(g, vec![0.0, 0.0, 0.0]);
        }
        let g = eval_motion(&spec, &[0.0, 0.0, 4.0], 0.5).unwrap();
        assert!((g[2] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn builtins_are_periodic() {
        let spec = MotionSpec::<f64>::ypipe(YPipeParams::default());
        let pump = MotionSpec::<f64>::pump(PumpParams::default());
        for t in [0.0, 0.13, 0.5, 0.77] {
            for s in [&spec, &pump] {
                let a = eval_motion(s, &[0.2, 0.1, 0.3], t).unwrap();
                let b = eval_motion(s, &[0.2, 0.1, 0.3], t + 1.0).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn velocity_matches_finite_differences() {
        let spec = MotionSpec::<f64>::pump(PumpParams::default());
        let x = [0.2, 0.1, 0.4];
        let h = 1e-6;
        for t in [0.1, 0.3, 0.8] {
            let v = motion_velocity(&spec, &x, t).unwrap();
            let a = eval_motion(&spec, &x, t + h).unwrap();
            let b = eval_motion(&spec, &x, t - h).unwrap();
            assert!((v[2] - (a[2] - b[2]) / (2.0 * h)).abs() < 1e-7);
        }
    }

    #[test]
    fn time_range_is_enforced() {
        let mut spec = MotionSpec::<f64>::pump(PumpParams::default());
        spec.end_time = Some(1.0);
        assert!(matches!(
            eval_motion(&spec, &[0.0, 0.0, 0.4], 1.5),
            Err(MotionError::TimeOutOfRange { .. })
        ));
        assert!(eval_motion(&spec, &[0.0, 0.0, 0.4], -0.1).is_err());
    }

    #[test]
    fn smoothing_reproduces_constants_and_linears() {
        let mesh = meshgen::unit_square::<f64>(5);
        let mask = mesh.boundary_nodes();
        let n = mesh.points.len();
        let mut data = DisplacementField::zeros(2, n);
        for i in (0..n).filter(|&i| mask[i]) {
            let x = mesh.points.get(NodeId(i));
            data.set(i, &[0.5 + 2.0 * x[0] - x[1], 0.25 * x[1]]);
        }
        let out = smooth_displacement(&mesh, &data, &mask).unwrap();
        for i in 0..n {
            let x = mesh.points.get(NodeId(i));
            let g = out.get(i);
            assert!((g[0] - (0.5 + 2.0 * x[0] - x[1])).abs() < 1e-10);
            assert!((g[1] - 0.25 * x[1]).abs() < 1e-10);
        }
        let zero = smooth_displacement(&mesh, &DisplacementField::zeros(2, n), &mask).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn empty_boundary_is_an_error() {
        let mesh = meshgen::unit_square::<f64>(2);
        let n = mesh.points.len();
        let r = smooth_displacement(&mesh, &DisplacementField::zeros(2, n), &vec![false; n]);
        assert!(matches!(r, Err(MotionError::EmptyBoundary)));
    }

    #[test]
    fn tabulated_motion_interpolates_linearly() {
        let mesh = meshgen::unit_interval::<f64>(2);
        let mut a = DisplacementField::zeros(1, 3);
        let mut b = DisplacementField::zeros(1, 3);
        a.set(2, &[0.0]);
        b.set(2, &[0.2]);
        let mut spec = MotionSpec::new(MotionKind::Tabulated(TabulatedMotion {
            times: vec![0.0, 1.0],
            fields: vec![a, b],
        }));
        spec.moving_tags = vec![BoundaryTag::Dirichlet];
        let g = displacement_at(&mesh, &spec, 0.5).unwrap();
        assert!((g.get(2)[0] - 0.1).abs() < 1e-15);
        // the interior node follows linearly
        assert!((g.get(1)[0] - 0.05).abs() < 1e-12);
    }
}
