//! Iterative solution of the block system and post-processing.

use rayon::prelude::*;

use super::assemble::{build_block_system, BlockSystem, DgGeometry};
use super::quadrature::simplex_rule;
use super::space::velocity_dof;
use super::{DgError, PreconditionerKind, ProblemData, SolverConfig};
use crate::krylov::{gmres, Identity, Ilu, LinearOperator, Preconditioner, SolveOutcome};
use crate::mesh::{SimplexMesh, SpaceTimeMesh};
use crate::scalar::Real;
use crate::slicing::Field;

/// `[K -B^T; B D]` applied blockwise.
pub struct BlockOperator<'a, T> {
    pub system: &'a BlockSystem<T>,
}

impl<T: Real> LinearOperator<T> for BlockOperator<'_, T> {
    fn dim(&self) -> usize {
        self.system.dim()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let s = self.system;
        let nv = s.num_velocity();
        let (xu, xp) = x.split_at(nv);
        let (yu, yp) = y.split_at_mut(nv);
        s.k.mul_vec(xu, yu);
        s.bt.mul_vec_add(-T::one(), xp, yu);
        s.b.mul_vec(xu, yp);
        s.d.mul_vec_add(T::one(), xp, yp);
    }
}

/// Block diagonal preconditioner: ILU(0) of `K` and ILU(2) of the Schur
/// complement approximation `D + B |diag K|^-1 B^T`.
pub struct BlockDiag<T> {
    velocity: Ilu<T>,
    pressure: Ilu<T>,
    split: usize,
}

impl<T: Real> BlockDiag<T> {
    pub fn new(system: &BlockSystem<T>) -> Self {
        let w: Vec<T> = system
            .k
            .diagonal()
            .into_iter()
            .map(|v| if v != T::zero() { T::one() / v.abs() } else { T::one() })
            .collect();
        let schur = system.d.add(&system.b.mul_diag_mul(&w, &system.bt));
        Self {
            velocity: Ilu::new(&system.k, 0),
            pressure: Ilu::new(&schur, 2),
            split: system.num_velocity(),
        }
    }
}

impl<T: Real> Preconditioner<T> for BlockDiag<T> {
    fn apply(&self, r: &[T], z: &mut [T]) {
        let (ru, rp) = r.split_at(self.split);
        let (zu, zp) = z.split_at_mut(self.split);
        self.velocity.apply(ru, zu);
        self.pressure.apply(rp, zp);
    }
}

/// Runs preconditioned GMRES on the assembled system.
pub fn gmres_solve<T: Real>(system: &BlockSystem<T>, cfg: &SolverConfig<T>) -> Result<SolveOutcome<T>, DgError> {
    cfg.validate()?;
    let op = BlockOperator { system };
    let rhs = system.rhs();
    let out = match cfg.preconditioner {
        PreconditionerKind::None => gmres(&op, &Identity, &rhs, None, &cfg.gmres)?,
        PreconditionerKind::BlockDiag => gmres(&op, &BlockDiag::new(system), &rhs, None, &cfg.gmres)?,
    };
    Ok(out)
}

/// Discrete velocity and pressure on a space-time mesh.
#[derive(Clone, Debug)]
pub struct DgSolution<T> {
    pub space_dim: usize,
    /// Element-local vertex values, see [`velocity_dof`].
    pub velocity: Vec<T>,
    /// One value per element.
    pub pressure: Vec<T>,
    pub iterations: usize,
    pub history: Vec<T>,
}

/// Assembles and solves the transient Stokes problem on `mesh`.
pub fn solve<T: Real>(
    mesh: &SpaceTimeMesh<T>,
    problem: &ProblemData<T>,
    cfg: &SolverConfig<T>,
) -> Result<DgSolution<T>, DgError> {
    let system = build_block_system(mesh, problem, cfg)?;
    let out = gmres_solve(&system, cfg)?;
    let nv = system.num_velocity();
    let velocity = system.lift.iter().zip(&out.x[..nv]).map(|(&g, &u)| g + u).collect();
    Ok(DgSolution {
        space_dim: system.space_dim,
        velocity,
        pressure: out.x[nv..].to_vec(),
        iterations: out.iterations,
        history: out.history,
    })
}

const ERROR_DEGREE: usize = 5;

impl<T: Real> DgSolution<T> {
    /// Velocity in element `e` at barycentric coordinates `bary`.
    pub fn velocity_at(&self, e: usize, bary: &[T]) -> Vec<T> {
        let d = self.space_dim;
        let mut u = vec![T::zero(); d];
        for (a, &w) in bary.iter().enumerate() {
            for (c, uc) in u.iter_mut().enumerate() {
                *uc += w * self.velocity[velocity_dof(e, a, c, d)];
            }
        }
        u
    }

    pub fn velocity_field(&self, name: &str) -> Field<T> {
        Field::discontinuous(name, self.space_dim, self.velocity.clone())
    }

    pub fn pressure_field(&self, name: &str) -> Field<T> {
        Field::element(name, 1, self.pressure.clone())
    }

    /// `L2(Q)` norm of the velocity error.
    pub fn velocity_l2_error(
        &self,
        mesh: &SpaceTimeMesh<T>,
        exact: impl Fn(&[T], T) -> Vec<T> + Sync,
    ) -> Result<T, DgError> {
        let geo = DgGeometry::new(mesh)?;
        let rule = simplex_rule::<T>(mesh.points.dim(), ERROR_DEGREE);
        let d = self.space_dim;
        let sum: T = (0..mesh.num_elements())
            .into_par_iter()
            .map(|k| {
                geo.element_quadrature(k, &rule)
                    .iter()
                    .map(|(x, w, b)| {
                        let uh = self.velocity_at(k, b);
                        let u = exact(&x[..d], x[d]);
                        *w * uh.iter().zip(&u).map(|(&a, &c)| (a - c) * (a - c)).sum::<T>()
                    })
                    .sum::<T>()
            })
            .collect::<Vec<T>>()
            .into_iter()
            .sum();
        Ok(sum.sqrt())
    }

    /// `L2(Q)` norm of the pressure error after removing its mean on every
    /// slab, where the pressure level is not determined.
    pub fn pressure_l2_error(
        &self,
        mesh: &SpaceTimeMesh<T>,
        exact: impl Fn(&[T], T) -> T + Sync,
    ) -> Result<T, DgError> {
        let geo = DgGeometry::new(mesh)?;
        let rule = simplex_rule::<T>(mesh.points.dim(), ERROR_DEGREE);
        let d = self.space_dim;
        let ns = mesh.num_slabs();
        let samples: Vec<Vec<(T, T)>> = (0..mesh.num_elements())
            .into_par_iter()
            .map(|k| {
                geo.element_quadrature(k, &rule)
                    .iter()
                    .map(|(x, w, _)| (*w, self.pressure[k] - exact(&x[..d], x[d])))
                    .collect()
            })
            .collect();
        let mut mean = vec![T::zero(); ns];
        let mut vol = vec![T::zero(); ns];
        for (k, s) in samples.iter().enumerate() {
            let slab = mesh.element_slab(k);
            for &(w, e) in s {
                mean[slab] += w * e;
                vol[slab] += w;
            }
        }
        for (m, v) in mean.iter_mut().zip(&vol) {
            if *v > T::zero() {
                *m /= *v;
            }
        }
        let mut sum = T::zero();
        for (k, s) in samples.iter().enumerate() {
            let m = mean[mesh.element_slab(k)];
            for &(w, e) in s {
                sum += w * (e - m) * (e - m);
            }
        }
        Ok(sum.sqrt())
    }

    /// Largest velocity error over all element vertices.
    pub fn velocity_max_error(&self, mesh: &SpaceTimeMesh<T>, exact: impl Fn(&[T], T) -> Vec<T>) -> T {
        let d = self.space_dim;
        let mut m = T::zero();
        for (k, e) in mesh.elements.iter().enumerate() {
            for (a, &node) in e.nodes.iter().enumerate() {
                let x = mesh.points.get(node);
                let u = exact(&x[..d], x[d]);
                for (c, &uc) in u.iter().enumerate() {
                    m = m.max((self.velocity[velocity_dof(k, a, c, d)] - uc).abs());
                }
            }
        }
        m
    }

    /// Largest pressure deviation from the slab mean, for a constant exact
    /// pressure.
    pub fn pressure_max_deviation(&self, mesh: &SpaceTimeMesh<T>) -> T {
        let ns = mesh.num_slabs();
        let mut sum = vec![T::zero(); ns];
        let mut vol = vec![T::zero(); ns];
        for k in 0..mesh.num_elements() {
            let s = mesh.element_slab(k);
            let v = crate::mesh::simplex_measure(&mesh.elements[k], &mesh.points);
            sum[s] += v * self.pressure[k];
            vol[s] += v;
        }
        (0..mesh.num_elements())
            .map(|k| {
                let s = mesh.element_slab(k);
                (self.pressure[k] - sum[s] / vol[s]).abs()
            })
            .fold(T::zero(), T::max)
    }
}
