//! Extrusion of a spatial mesh into a space-time mesh.
//!
//! Each spatial simplex `[p_1, .., p_{d+1}]` (nodes sorted by global number)
//! is lifted to the hyperprism between two time levels and cut into `d+1`
//! simplices
//!
//! ```text
//! S^i = [p_i', .., p_{d+1}', p_1'', .., p_i'']      i = 1, .., d+1
//! ```
//!
//! where `'` marks the bottom copy and `''` the top copy of a node. Because
//! every element uses the global node order, two neighbouring prisms cut
//! their common side identically and the stacked mesh is conforming.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::linalg;
use crate::mesh::{
    check_consistent, max_edge_length, BoundaryClass, MeshError, NodeId, Points, Simplex,
    SpaceTimeMesh, SpatialMesh,
};
use crate::motion::{displacement_at, DisplacementField, MotionError, MotionSpec};
use crate::scalar::Real;

/// Relative measure below which an extruded element counts as degenerate,
/// in units of `h^{d+1}`.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Tensor-product extension of a simplex between two time levels.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperprism<T> {
    /// Node ids at the lower time level.
    pub bottom: Vec<NodeId>,
    /// Node ids at the upper time level; `top[i]` is the copy of `bottom[i]`.
    pub top: Vec<NodeId>,
    pub tau: T,
}

impl<T: Real> Hyperprism<T> {
    /// The `d+1` simplices of the decomposition, without geometric checks.
    pub fn decompose(&self) -> Vec<Simplex> {
        let n = self.bottom.len();
        (1..=n)
            .map(|i| Simplex {
                nodes: self.bottom[i - 1..]
                    .iter()
                    .chain(&self.top[..i])
                    .copied()
                    .collect(),
            })
            .collect()
    }
}

/// Decomposes a hyperprism whose node coordinates live in `coords`
/// (space-time points, time last).
pub fn decompose_hyperprism<T: Real>(
    prism: &Hyperprism<T>,
    coords: &Points<T>,
) -> Result<Vec<Simplex>, MeshError> {
    if prism.bottom.len() != prism.top.len() || prism.bottom.len() != coords.dim() {
        return Err(MeshError::Invalid(format!(
            "hyperprism in R^{} needs {} bottom and top nodes",
            coords.dim(),
            coords.dim()
        )));
    }
    if !(prism.tau > T::zero()) {
        return Err(MeshError::NonPositiveHeight(prism.tau.as_f64()));
    }
    let base = Simplex {
        nodes: prism.bottom.clone(),
    };
    let h = max_edge_length(&base, coords).as_f64();
    let m = crate::mesh::simplex_measure(&base, coords).as_f64();
    if !(m > DEGENERACY_TOL * h.powi(base.dim() as i32)) {
        return Err(MeshError::Degenerate {
            element: 0,
            measure: m,
        });
    }
    Ok(prism.decompose())
}

/// One time slab `[t_start, t_start + tau]` with optional nodal
/// displacements of the bottom and top copies.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabSpec<T> {
    pub t_start: T,
    pub tau: T,
    pub bottom_displacement: Option<DisplacementField<T>>,
    pub top_displacement: Option<DisplacementField<T>>,
}

impl<T: Real> SlabSpec<T> {
    pub fn new(t_start: T, tau: T) -> Self {
        Self {
            t_start,
            tau,
            bottom_displacement: None,
            top_displacement: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtrudeOptions {
    /// Refuse meshes that are not consistently numbered.
    pub check_consistency: bool,
    /// Refuse degenerate or inverted space-time elements.
    pub check_degeneracy: bool,
}

impl Default for ExtrudeOptions {
    fn default() -> Self {
        Self {
            check_consistency: true,
            check_degeneracy: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExtrudeError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("motion at t = {time}: {source}")]
    Motion {
        time: f64,
        #[source]
        source: MotionError,
    },
}

/// Extrudes a single slab.
pub fn extrude_slab<T: Real>(
    mesh: &SpatialMesh<T>,
    slab: &SlabSpec<T>,
    opts: ExtrudeOptions,
) -> Result<SpaceTimeMesh<T>, MeshError> {
    if !(slab.tau > T::zero()) {
        return Err(MeshError::NonPositiveHeight(slab.tau.as_f64()));
    }
    let zero = DisplacementField::zeros(mesh.dim(), mesh.points.len());
    let bottom = slab.bottom_displacement.clone().unwrap_or_else(|| zero.clone());
    let top = slab.top_displacement.clone().unwrap_or(zero);
    build(
        mesh,
        vec![slab.t_start, slab.t_start + slab.tau],
        &[bottom, top],
        opts,
    )
}

/// Uniform time levels `0, T/K, .., T`.
pub fn uniform_levels<T: Real>(end_time: T, slabs: usize) -> Vec<T> {
    let k = T::from_usize_lossy(slabs);
    (0..=slabs)
        .map(|i| end_time * T::from_usize_lossy(i) / k)
        .collect()
}

/// Extrudes over the time partition `levels` (strictly increasing), moving
/// the nodes at each level with `motion`.
pub fn extrude_multi<T: Real>(
    mesh: &SpatialMesh<T>,
    levels: &[T],
    motion: &MotionSpec<T>,
    opts: ExtrudeOptions,
) -> Result<SpaceTimeMesh<T>, ExtrudeError> {
    if levels.len() < 2 || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MeshError::BadTimeLevels(levels.iter().map(|t| t.as_f64()).collect()).into());
    }
    let disp: Vec<DisplacementField<T>> = levels
        .par_iter()
        .map(|&t| {
            displacement_at(mesh, motion, t).map_err(|source| ExtrudeError::Motion {
                time: t.as_f64(),
                source,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(build(mesh, levels.to_vec(), &disp, opts)?)
}

fn build<T: Real>(
    mesh: &SpatialMesh<T>,
    levels: Vec<T>,
    disp: &[DisplacementField<T>],
    opts: ExtrudeOptions,
) -> Result<SpaceTimeMesh<T>, MeshError> {
    let d = mesh.dim();
    let ns = mesh.points.len();
    if opts.check_consistency {
        let report = check_consistent(&mesh.elements)?;
        if !report.is_consistent() {
            return Err(MeshError::Inconsistent(report.violations));
        }
    }

    let mut data = Vec::with_capacity(levels.len() * ns * (d + 1));
    for (l, &t) in levels.iter().enumerate() {
        for i in 0..ns {
            let x = mesh.points.get(NodeId(i));
            let u = disp[l].get(i);
            data.extend(x.iter().zip(u).map(|(&a, &b)| a + b));
            data.push(t);
        }
    }
    let points = Points::new(d + 1, data);

    let slabs = levels.len() - 1;
    let mut elements = Vec::with_capacity(slabs * mesh.elements.len() * (d + 1));
    for s in 0..slabs {
        for e in &mesh.elements {
            let prism = Hyperprism {
                bottom: e.nodes.iter().map(|n| NodeId(n.0 + s * ns)).collect(),
                top: e.nodes.iter().map(|n| NodeId(n.0 + (s + 1) * ns)).collect(),
                tau: levels[s + 1] - levels[s],
            };
            elements.extend(prism.decompose());
        }
    }

    if opts.check_degeneracy {
        check_elements(mesh, &levels, &points, &elements)?;
    }
    SpaceTimeMesh::from_parts_with(
        points,
        elements,
        ns,
        levels,
        mesh.boundary_tags.clone(),
        opts.check_consistency,
    )
}

/// Every element must keep a measure above the tolerance and the
/// orientation it has without motion.
fn check_elements<T: Real>(
    mesh: &SpatialMesh<T>,
    levels: &[T],
    points: &Points<T>,
    elements: &[Simplex],
) -> Result<(), MeshError> {
    let ns = mesh.points.len();
    let n = points.dim();
    let per_slab = mesh.elements.len() * n;
    let reference = |id: NodeId| -> Vec<T> {
        let mut p = mesh.points.get(NodeId(id.0 % ns)).to_vec();
        p.push(levels[id.0 / ns]);
        p
    };
    let bad = elements.par_iter().enumerate().find_map_first(|(k, e)| {
        let moved = points.gather(&e.nodes);
        let rest: Vec<Vec<T>> = e.nodes.iter().map(|&id| reference(id)).collect();
        let rest_refs: Vec<&[T]> = rest.iter().map(|p| &p[..]).collect();
        let v = linalg::signed_volume(&moved);
        let v0 = linalg::signed_volume(&rest_refs);
        let h = max_edge_length(e, points).as_f64();
        let tol = DEGENERACY_TOL * h.powi(n as i32);
        let ok = v.as_f64().abs() > tol && v0.as_f64().abs() > tol && (v > T::zero()) == (v0 > T::zero());
        (!ok).then(|| (k, v.as_f64()))
    });
    match bad {
        None => Ok(()),
        Some((k, measure)) => Err(MeshError::Slab {
            slab: k / per_slab.max(1),
            source: Box::new(MeshError::Degenerate {
                element: k,
                measure,
            }),
        }),
    }
}

/// Assigns every boundary facet of a space-time mesh to the initial level,
/// the final level, or the Dirichlet or Robin part of the mantle.
/// Untagged mantle facets are an error when `strict`, otherwise they stay
/// unclassified.
pub fn classify_boundary<T: Real>(
    mut mesh: SpaceTimeMesh<T>,
    strict: bool,
) -> Result<SpaceTimeMesh<T>, MeshError> {
    let last = mesh.levels.len() - 1;
    let ns = mesh.spatial_nodes;
    let tol = T::c(1e-8);
    for f in &mut mesh.boundary_facets {
        let lv: Vec<usize> = f.nodes.iter().map(|n| n.0 / ns).collect();
        let ids = || f.nodes.iter().map(|n| n.0).collect::<Vec<_>>();
        let nt = f.facet.normal_time();
        if lv.iter().all(|&l| l == 0) {
            if (nt + T::one()).abs() > tol {
                return Err(MeshError::Unclassifiable {
                    facet: ids(),
                    reason: format!("bottom facet with time normal {nt}"),
                });
            }
            f.class = BoundaryClass::Sigma0;
            continue;
        }
        if lv.iter().all(|&l| l == last) {
            if (nt - T::one()).abs() > tol {
                return Err(MeshError::Unclassifiable {
                    facet: ids(),
                    reason: format!("top facet with time normal {nt}"),
                });
            }
            f.class = BoundaryClass::SigmaT;
            continue;
        }
        let origin: BTreeSet<NodeId> = f.nodes.iter().map(|n| NodeId(n.0 % ns)).collect();
        let key: Vec<NodeId> = origin.into_iter().collect();
        match mesh.spatial_tags.get(&key) {
            Some(&tag) => {
                f.class = if tag.is_dirichlet() {
                    BoundaryClass::SigmaD
                } else {
                    BoundaryClass::SigmaR
                };
                f.tag = Some(tag);
            }
            None if !strict => {}
            None => {
                return Err(MeshError::Unclassifiable {
                    facet: ids(),
                    reason: format!(
                        "spatial facet {:?} carries no boundary tag",
                        key.iter().map(|n| n.0).collect::<Vec<_>>()
                    ),
                })
            }
        }
    }
    Ok(mesh)
}
