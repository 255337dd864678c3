//! Element and facet assembly of the block system.

use rayon::prelude::*;

use super::facet::UPWIND_TOL;
use super::quadrature::{simplex_rule, QuadratureRule};
use super::space::velocity_dof;
use super::{DgError, ProblemData, PressurePin, SolverConfig};
use crate::linalg;
use crate::mesh::{BoundaryClass, BoundaryTag, MeshError, NodeId, SimplexMesh, SpaceTimeMesh};
use crate::scalar::{factorial, Real};
use crate::sparse::{CooMatrix, CsrMatrix};

/// Volume and barycentric gradients of one element. The last gradient
/// component is the time derivative.
#[derive(Clone, Debug)]
pub struct ElementGeometry<T> {
    pub volume: T,
    pub grads: Vec<Vec<T>>,
}

/// Geometric data shared by all assembly routines.
pub struct DgGeometry<'a, T> {
    pub mesh: &'a SpaceTimeMesh<T>,
    pub elements: Vec<ElementGeometry<T>>,
    /// Local vertex numbers of the facet nodes in the owner and neighbour.
    interior_local: Vec<(Vec<usize>, Vec<usize>)>,
    boundary_local: Vec<Vec<usize>>,
    volume_rule: QuadratureRule<T>,
    facet_rule: QuadratureRule<T>,
}

type Triplets<T> = Vec<(usize, usize, T)>;

fn local_indices(element: &[NodeId], facet: &[NodeId]) -> Vec<usize> {
    facet
        .iter()
        .map(|n| element.iter().position(|m| m == n).expect("facet node in element"))
        .collect()
}

impl<'a, T: Real> DgGeometry<'a, T> {
    pub fn new(mesh: &'a SpaceTimeMesh<T>) -> Result<Self, DgError> {
        if let Some(f) = mesh
            .boundary_facets
            .iter()
            .find(|f| f.class == BoundaryClass::Unclassified)
        {
            return Err(MeshError::Unclassifiable {
                facet: f.nodes.iter().map(|n| n.0).collect(),
                reason: "boundary facet has no class".into(),
            }
            .into());
        }
        let elements = mesh
            .elements
            .par_iter()
            .enumerate()
            .map(|(k, e)| {
                let p = mesh.points.gather(&e.nodes);
                let grads = linalg::barycentric_gradients(&p).ok_or(MeshError::Degenerate {
                    element: k,
                    measure: 0.0,
                })?;
                Ok(ElementGeometry {
                    volume: linalg::simplex_measure(&p),
                    grads,
                })
            })
            .collect::<Result<Vec<_>, MeshError>>()?;
        let interior_local = mesh
            .interior_facets
            .iter()
            .map(|f| {
                (
                    local_indices(&mesh.elements[f.owner].nodes, &f.nodes),
                    local_indices(&mesh.elements[f.neighbor].nodes, &f.nodes),
                )
            })
            .collect();
        let boundary_local = mesh
            .boundary_facets
            .iter()
            .map(|f| local_indices(&mesh.elements[f.owner].nodes, &f.nodes))
            .collect();
        let n = mesh.points.dim();
        Ok(Self {
            mesh,
            elements,
            interior_local,
            boundary_local,
            volume_rule: simplex_rule(n, 3),
            facet_rule: simplex_rule(n - 1, 3),
        })
    }

    /// Space-time dimension `n = d + 1`.
    pub fn n(&self) -> usize {
        self.mesh.points.dim()
    }

    pub fn space_dim(&self) -> usize {
        self.n() - 1
    }

    pub fn num_velocity_dofs(&self) -> usize {
        self.mesh.num_elements() * (self.n() + 1) * self.space_dim()
    }

    /// `int_F lambda_i lambda_j` for facet-local vertices.
    fn facet_mass(&self, measure: T, i: usize, j: usize) -> T {
        let n = T::from_usize_lossy(self.n());
        let delta = if i == j { T::c(2.0) } else { T::one() };
        measure * delta / (n * (n + T::one()))
    }

    /// Reference position of a point given by barycentric weights over the
    /// nodes: the interpolated position of the spatial origins at the first
    /// time level.
    fn reference_point(&self, nodes: &[NodeId], bary: &[T]) -> Vec<T> {
        let d = self.space_dim();
        let mut x = vec![T::zero(); d];
        for (&node, &w) in nodes.iter().zip(bary) {
            let origin = self.mesh.points.get(self.mesh.spatial_node(node));
            for (xi, &o) in x.iter_mut().zip(&origin[..d]) {
                *xi += w * o;
            }
        }
        x
    }

    /// Quadrature points `(x, weight, barycentric)` on element `k`.
    pub fn element_quadrature(&self, k: usize, rule: &QuadratureRule<T>) -> Vec<(Vec<T>, T, Vec<T>)> {
        let p = self.mesh.points.gather(&self.mesh.elements[k].nodes);
        let scale = self.elements[k].volume * factorial::<T>(self.n());
        (0..rule.len())
            .map(|q| (rule.map(q, &p), rule.weights[q] * scale, rule.barycentric(q)))
            .collect()
    }

    fn facet_quadrature(&self, nodes: &[NodeId], measure: T) -> Vec<(Vec<T>, T, Vec<T>)> {
        let p = self.mesh.points.gather(nodes);
        let rule = &self.facet_rule;
        let scale = measure * factorial::<T>(self.n() - 1);
        (0..rule.len())
            .map(|q| (rule.map(q, &p), rule.weights[q] * scale, rule.barycentric(q)))
            .collect()
    }

    fn h_bar(&self, k: usize, l: usize) -> T {
        (self.mesh.h[k] + self.mesh.h[l]) / T::c(2.0)
    }
}

fn push_components<T: Real>(out: &mut Triplets<T>, d: usize, r: (usize, usize), s: (usize, usize), v: T) {
    for c in 0..d {
        out.push((velocity_dof(r.0, r.1, c, d), velocity_dof(s.0, s.1, c, d), v));
    }
}

fn to_csr<T: Real>(rows: usize, cols: usize, parts: Vec<Triplets<T>>) -> CsrMatrix<T> {
    let mut coo = CooMatrix::new(rows, cols);
    for p in parts {
        coo.extend(p);
    }
    coo.to_csr()
}

fn space_part<T: Real>(v: &[T], d: usize) -> &[T] {
    &v[..d]
}

/// Interior penalty `sigma_u / h_bar int_F [u] : [v]` on interior facets.
pub fn assemble_velocity_penalty<T: Real>(geo: &DgGeometry<'_, T>, sigma_u: T) -> CsrMatrix<T> {
    let n = geo.num_velocity_dofs();
    let parts: Vec<Triplets<T>> = geo
        .mesh
        .interior_facets
        .par_iter()
        .zip(&geo.interior_local)
        .map(|(f, (lk, ll))| {
            let d = geo.space_dim();
            let nx2 = linalg::dot(space_part(&f.normal, d), space_part(&f.normal, d));
            let mut out = Vec::new();
            if nx2 == T::zero() {
                return out;
            }
            let scale = sigma_u / geo.h_bar(f.owner, f.neighbor) * nx2;
            let sides = [(f.owner, lk, T::one()), (f.neighbor, ll, -T::one())];
            for &(r, lr, sr) in &sides {
                for &(s, ls, ss) in &sides {
                    for i in 0..lr.len() {
                        for j in 0..ls.len() {
                            let v = scale * sr * ss * geo.facet_mass(f.measure, i, j);
                            push_components(&mut out, d, (r, lr[i]), (s, ls[j]), v);
                        }
                    }
                }
            }
            out
        })
        .collect();
    to_csr(n, n, parts)
}

/// Viscous interior penalty form with the Robin mass term.
pub fn assemble_a_h<T: Real>(
    geo: &DgGeometry<'_, T>,
    problem: &ProblemData<T>,
    cfg: &SolverConfig<T>,
) -> CsrMatrix<T> {
    let n = geo.n();
    let d = geo.space_dim();
    let nu = problem.viscosity;
    let ndofs = geo.num_velocity_dofs();

    let mut parts: Vec<Triplets<T>> = geo
        .elements
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let mut out = Vec::with_capacity((n + 1) * (n + 1) * d);
            for a in 0..=n {
                for b in 0..=n {
                    let v = nu * g.volume * linalg::dot(space_part(&g.grads[a], d), space_part(&g.grads[b], d));
                    push_components(&mut out, d, (k, a), (k, b), v);
                }
            }
            out
        })
        .collect();

    parts.extend(
        geo.mesh
            .interior_facets
            .par_iter()
            .zip(&geo.interior_local)
            .map(|(f, (lk, ll))| {
                let nx = space_part(&f.normal, d);
                let mean = f.measure / T::from_usize_lossy(n);
                let half = T::c(0.5);
                let sides = [(f.owner, lk, T::one()), (f.neighbor, ll, -T::one())];
                let mut out = Vec::new();
                for &(r, lr, sr) in &sides {
                    for &(s, ls, ss) in &sides {
                        let gs = &geo.elements[s].grads;
                        let gr = &geo.elements[r].grads;
                        // -{nu grad u} . n_x [v], then the same with u and v swapped
                        for &a in lr.iter() {
                            for b in 0..=n {
                                let gb = linalg::dot(space_part(&gs[b], d), nx);
                                push_components(&mut out, d, (r, a), (s, b), -nu * half * gb * sr * mean);
                            }
                        }
                        for a in 0..=n {
                            let ga = linalg::dot(space_part(&gr[a], d), nx);
                            for &b in ls.iter() {
                                push_components(&mut out, d, (r, a), (s, b), -nu * half * ga * ss * mean);
                            }
                        }
                    }
                }
                out
            })
            .collect::<Vec<_>>(),
    );

    parts.extend(
        geo.mesh
            .boundary_facets
            .par_iter()
            .zip(&geo.boundary_local)
            .filter(|(f, _)| f.class == BoundaryClass::SigmaR)
            .map(|(f, loc)| {
                let tag = f.tag.unwrap_or(BoundaryTag::RobinOut);
                let mut out = Vec::new();
                let q = geo.facet_quadrature(&f.nodes, f.measure);
                for i in 0..loc.len() {
                    for j in 0..loc.len() {
                        let v = q
                            .iter()
                            .map(|(x, w, b)| *w * (problem.robin_coeff)(&x[..d], x[d], tag) * b[i] * b[j])
                            .sum::<T>();
                        push_components(&mut out, d, (f.owner, loc[i]), (f.owner, loc[j]), v);
                    }
                }
                out
            })
            .collect::<Vec<_>>(),
    );

    let penalty = assemble_velocity_penalty(geo, cfg.sigma_u);
    to_csr(ndofs, ndofs, parts).add(&penalty)
}

/// Time derivative with upwind fluxes on interior facets and outflow on the
/// boundary; the inflow at the initial time goes to the right-hand side.
pub fn assemble_b_t<T: Real>(geo: &DgGeometry<'_, T>) -> CsrMatrix<T> {
    let n = geo.n();
    let d = geo.space_dim();
    let ndofs = geo.num_velocity_dofs();
    let tol = T::c(UPWIND_TOL);

    let mut parts: Vec<Triplets<T>> = geo
        .elements
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let mut out = Vec::with_capacity((n + 1) * (n + 1) * d);
            let mean = g.volume / T::from_usize_lossy(n + 1);
            for a in 0..=n {
                for b in 0..=n {
                    push_components(&mut out, d, (k, a), (k, b), -mean * g.grads[a][n - 1]);
                }
            }
            out
        })
        .collect();

    parts.extend(
        geo.mesh
            .interior_facets
            .par_iter()
            .zip(&geo.interior_local)
            .map(|(f, (lk, ll))| {
                let nt = f.normal_time();
                let mut out = Vec::new();
                let up = if nt > tol {
                    (f.owner, lk)
                } else if nt < -tol {
                    (f.neighbor, ll)
                } else {
                    return out;
                };
                for &(r, lr, sr) in &[(f.owner, lk, T::one()), (f.neighbor, ll, -T::one())] {
                    for i in 0..lr.len() {
                        for j in 0..up.1.len() {
                            let v = sr * nt * geo.facet_mass(f.measure, i, j);
                            push_components(&mut out, d, (r, lr[i]), (up.0, up.1[j]), v);
                        }
                    }
                }
                out
            })
            .collect::<Vec<_>>(),
    );

    parts.extend(
        geo.mesh
            .boundary_facets
            .par_iter()
            .zip(&geo.boundary_local)
            .filter(|(f, _)| {
                !matches!(f.class, BoundaryClass::Sigma0 | BoundaryClass::SigmaD) && f.normal_time().abs() > tol
            })
            .map(|(f, loc)| {
                let nt = f.normal_time();
                let mut out = Vec::new();
                for i in 0..loc.len() {
                    for j in 0..loc.len() {
                        let v = nt * geo.facet_mass(f.measure, i, j);
                        push_components(&mut out, d, (f.owner, loc[i]), (f.owner, loc[j]), v);
                    }
                }
                out
            })
            .collect::<Vec<_>>(),
    );
    to_csr(ndofs, ndofs, parts)
}

/// Discrete divergence: `int_K q div v - int_F {q} [v] . n_x`.
pub fn assemble_b_p<T: Real>(geo: &DgGeometry<'_, T>) -> CsrMatrix<T> {
    let n = geo.n();
    let d = geo.space_dim();
    let ne = geo.mesh.num_elements();
    let mut parts: Vec<Triplets<T>> = geo
        .elements
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let mut out = Vec::with_capacity((n + 1) * d);
            for b in 0..=n {
                for c in 0..d {
                    out.push((k, velocity_dof(k, b, c, d), g.volume * g.grads[b][c]));
                }
            }
            out
        })
        .collect();
    parts.extend(
        geo.mesh
            .interior_facets
            .par_iter()
            .zip(&geo.interior_local)
            .map(|(f, (lk, ll))| {
                let nx = space_part(&f.normal, d);
                let mean = f.measure / T::from_usize_lossy(n);
                let half = T::c(0.5);
                let mut out = Vec::new();
                for q in [f.owner, f.neighbor] {
                    for &(s, ls, ss) in &[(f.owner, lk, T::one()), (f.neighbor, ll, -T::one())] {
                        for &b in ls.iter() {
                            for c in 0..d {
                                out.push((q, velocity_dof(s, b, c, d), -half * ss * nx[c] * mean));
                            }
                        }
                    }
                }
                out
            })
            .collect::<Vec<_>>(),
    );
    to_csr(ne, geo.num_velocity_dofs(), parts)
}

/// Pressure jump stabilisation `sigma_p h_bar int_F [p] . [q]`.
pub fn assemble_d_p<T: Real>(geo: &DgGeometry<'_, T>, sigma_p: T) -> CsrMatrix<T> {
    let d = geo.space_dim();
    let ne = geo.mesh.num_elements();
    let parts: Vec<Triplets<T>> = geo
        .mesh
        .interior_facets
        .par_iter()
        .map(|f| {
            let nx = space_part(&f.normal, d);
            let nx2 = linalg::dot(nx, nx);
            if nx2 == T::zero() {
                return Vec::new();
            }
            let v = sigma_p * geo.h_bar(f.owner, f.neighbor) * f.measure * nx2;
            vec![
                (f.owner, f.owner, v),
                (f.owner, f.neighbor, -v),
                (f.neighbor, f.owner, -v),
                (f.neighbor, f.neighbor, v),
            ]
        })
        .collect();
    to_csr(ne, ne, parts)
}

/// Velocity dofs fixed by Dirichlet data: vertices of each element's own
/// Dirichlet facets.
pub fn dirichlet_dofs<T: Real>(geo: &DgGeometry<'_, T>) -> Vec<bool> {
    let d = geo.space_dim();
    let mut mask = vec![false; geo.num_velocity_dofs()];
    for (f, loc) in geo.mesh.boundary_facets.iter().zip(&geo.boundary_local) {
        if f.class == BoundaryClass::SigmaD {
            for &a in loc {
                for c in 0..d {
                    mask[velocity_dof(f.owner, a, c, d)] = true;
                }
            }
        }
    }
    mask
}

/// Elementwise `L2` projection of the Dirichlet data on every element that
/// owns a Dirichlet facet; zero elsewhere. Moving walls take priority when an
/// element touches both kinds.
pub fn l2_project_dirichlet<T: Real>(geo: &DgGeometry<'_, T>, problem: &ProblemData<T>) -> Vec<T> {
    let n = geo.n();
    let d = geo.space_dim();
    let ne = geo.mesh.num_elements();
    let mut tags: Vec<Option<BoundaryTag>> = vec![None; ne];
    for f in geo.mesh.boundary_of_class(BoundaryClass::SigmaD) {
        let tag = f.tag.unwrap_or(BoundaryTag::Dirichlet);
        let slot = &mut tags[f.owner];
        if *slot != Some(BoundaryTag::DirichletMoving) {
            *slot = Some(tag);
        }
    }
    // P1 mass matrix on the reference element, scaled by the volume below
    let nv = n + 1;
    let mut mass = vec![T::zero(); nv * nv];
    let denom = T::from_usize_lossy((n + 1) * (n + 2));
    for i in 0..nv {
        for j in 0..nv {
            mass[i * nv + j] = if i == j { T::c(2.0) } else { T::one() } / denom;
        }
    }
    let inv = linalg::invert(&mass, nv).expect("mass matrix is invertible");
    let mut out = vec![T::zero(); geo.num_velocity_dofs()];
    out.par_chunks_mut(nv * d).enumerate().for_each(|(k, chunk)| {
        let Some(tag) = tags[k] else { return };
        let nodes = &geo.mesh.elements[k].nodes;
        let vol = geo.elements[k].volume;
        let mut rhs = vec![T::zero(); nv * d];
        for (x, w, b) in geo.element_quadrature(k, &geo.volume_rule) {
            let reference = geo.reference_point(nodes, &b);
            let g = (problem.dirichlet)(&x[..d], x[d], &reference, tag);
            for a in 0..nv {
                for c in 0..d {
                    rhs[a * d + c] += w * g[c] * b[a];
                }
            }
        }
        for a in 0..nv {
            for c in 0..d {
                chunk[a * d + c] = (0..nv).map(|b| inv[a * nv + b] * rhs[b * d + c]).sum::<T>() / vol;
            }
        }
    });
    out
}

/// Right-hand sides before lifting: sources, initial data and Robin data.
fn assemble_rhs<T: Real>(geo: &DgGeometry<'_, T>, problem: &ProblemData<T>) -> (Vec<T>, Vec<T>) {
    let n = geo.n();
    let d = geo.space_dim();
    let nv = n + 1;
    let mut f1 = vec![T::zero(); geo.num_velocity_dofs()];
    f1.par_chunks_mut(nv * d).enumerate().for_each(|(k, chunk)| {
        for (x, w, b) in geo.element_quadrature(k, &geo.volume_rule) {
            let f = (problem.source)(&x[..d], x[d]);
            for a in 0..nv {
                for c in 0..d {
                    chunk[a * d + c] += w * f[c] * b[a];
                }
            }
        }
    });
    for (f, loc) in geo.mesh.boundary_facets.iter().zip(&geo.boundary_local) {
        let data: Box<dyn Fn(&[T]) -> Vec<T>> = match f.class {
            BoundaryClass::Sigma0 => {
                let nt = f.normal_time();
                Box::new(move |x: &[T]| (problem.initial)(&x[..d], x[d]).into_iter().map(|v| -nt * v).collect())
            }
            BoundaryClass::SigmaR => match &problem.robin_data {
                Some(g) => {
                    let tag = f.tag.unwrap_or(BoundaryTag::RobinOut);
                    Box::new(move |x: &[T]| g(&x[..d], x[d], tag))
                }
                None => continue,
            },
            _ => continue,
        };
        for (x, w, b) in geo.facet_quadrature(&f.nodes, f.measure) {
            let g = data(&x);
            for (i, &a) in loc.iter().enumerate() {
                for c in 0..d {
                    f1[velocity_dof(f.owner, a, c, d)] += w * g[c] * b[i];
                }
            }
        }
    }
    let f2 = (0..geo.mesh.num_elements())
        .into_par_iter()
        .map(|k| match &problem.divergence {
            Some(g) => geo
                .element_quadrature(k, &geo.volume_rule)
                .iter()
                .map(|(x, w, _)| *w * g(&x[..d], x[d]))
                .sum(),
            None => T::zero(),
        })
        .collect();
    (f1, f2)
}

/// Assembled saddle point system with Dirichlet rows eliminated.
#[derive(Clone, Debug)]
pub struct BlockSystem<T> {
    pub k: CsrMatrix<T>,
    pub b: CsrMatrix<T>,
    pub bt: CsrMatrix<T>,
    pub d: CsrMatrix<T>,
    pub f1: Vec<T>,
    pub f2: Vec<T>,
    /// Projected Dirichlet data; the velocity is `lift + u`.
    pub lift: Vec<T>,
    pub dirichlet: Vec<bool>,
    /// Elements whose pressure is fixed to zero.
    pub pinned: Vec<usize>,
    pub space_dim: usize,
}

impl<T: Real> BlockSystem<T> {
    pub fn num_velocity(&self) -> usize {
        self.k.nrows
    }

    pub fn num_pressure(&self) -> usize {
        self.d.nrows
    }

    pub fn dim(&self) -> usize {
        self.num_velocity() + self.num_pressure()
    }

    pub fn rhs(&self) -> Vec<T> {
        let mut r = self.f1.clone();
        r.extend_from_slice(&self.f2);
        r
    }

    /// The whole operator as one matrix, for export.
    pub fn monolithic(&self) -> CsrMatrix<T> {
        let nv = self.num_velocity();
        let mut t: Vec<(usize, usize, T)> = self.k.triplets().collect();
        t.extend(self.bt.triplets().map(|(i, j, v)| (i, nv + j, -v)));
        t.extend(self.b.triplets().map(|(i, j, v)| (nv + i, j, v)));
        t.extend(self.d.triplets().map(|(i, j, v)| (nv + i, nv + j, v)));
        CsrMatrix::from_triplets(self.dim(), self.dim(), &t)
    }
}

/// Assembles `K`, `B`, `D` and the right-hand sides, lifts the Dirichlet
/// data and fixes the pressure level where needed.
pub fn build_block_system<T: Real>(
    mesh: &SpaceTimeMesh<T>,
    problem: &ProblemData<T>,
    cfg: &SolverConfig<T>,
) -> Result<BlockSystem<T>, DgError> {
    cfg.validate()?;
    if problem.dim != mesh.space_dim() {
        return Err(DgError::Dimension {
            problem: problem.dim,
            mesh: mesh.space_dim(),
        });
    }
    let geo = DgGeometry::new(mesh)?;
    let k_full = assemble_a_h(&geo, problem, cfg).add(&assemble_b_t(&geo));
    let b_full = assemble_b_p(&geo);
    let mut d_mat = assemble_d_p(&geo, cfg.sigma_p);
    let (mut f1, mut f2) = assemble_rhs(&geo, problem);
    let lift = l2_project_dirichlet(&geo, problem);
    k_full.mul_vec_add(-T::one(), &lift, &mut f1);
    b_full.mul_vec_add(-T::one(), &lift, &mut f2);

    let mask = dirichlet_dofs(&geo);
    let mut kt: Vec<(usize, usize, T)> = k_full.triplets().filter(|&(i, j, _)| !mask[i] && !mask[j]).collect();
    for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        kt.push((i, i, T::one()));
        f1[i] = T::zero();
    }
    let k = CsrMatrix::from_triplets(k_full.nrows, k_full.ncols, &kt);

    let ne = mesh.num_elements();
    let has_robin = mesh.boundary_facets.iter().any(|f| f.class == BoundaryClass::SigmaR);
    let mut pinned = Vec::new();
    if cfg.pressure_pin == PressurePin::Auto && !has_robin {
        let mut first = vec![usize::MAX; mesh.num_slabs()];
        for e in 0..ne {
            let s = mesh.element_slab(e);
            first[s] = first[s].min(e);
        }
        pinned = first.into_iter().filter(|&e| e != usize::MAX).collect();
    }
    let mut is_pinned = vec![false; ne];
    for &e in &pinned {
        is_pinned[e] = true;
        f2[e] = T::zero();
    }
    let bt: Vec<(usize, usize, T)> = b_full
        .triplets()
        .filter(|&(i, j, _)| !mask[j] && !is_pinned[i])
        .collect();
    let b = CsrMatrix::from_triplets(b_full.nrows, b_full.ncols, &bt);
    if !pinned.is_empty() {
        let diag = d_mat.diagonal();
        let positive: Vec<T> = diag.into_iter().filter(|&v| v > T::zero()).collect();
        let scale = if positive.is_empty() {
            T::one()
        } else {
            positive.iter().copied().sum::<T>() / T::from_usize_lossy(positive.len())
        };
        let mut dt: Vec<(usize, usize, T)> = d_mat
            .triplets()
            .filter(|&(i, j, _)| !is_pinned[i] && !is_pinned[j])
            .collect();
        dt.extend(pinned.iter().map(|&e| (e, e, scale)));
        d_mat = CsrMatrix::from_triplets(ne, ne, &dt);
    }
    Ok(BlockSystem {
        bt: b.transpose(),
        k,
        b,
        d: d_mat,
        f1,
        f2,
        lift,
        dirichlet: mask,
        pinned,
        space_dim: mesh.space_dim(),
    })
}
