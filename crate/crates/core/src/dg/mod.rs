//! Space-time discontinuous Galerkin discretisation of the transient Stokes
//! equations with piecewise linear velocities and piecewise constant
//! pressures.
//!
//! The discrete system is the saddle point problem
//!
//! ```text
//! [ K  -B^T ] [u]   [F1]
//! [ B   D   ] [p] = [F2]
//! ```
//!
//! where `K` collects the interior penalty viscous form and the upwind time
//! derivative, `B` the discrete divergence and `D` the pressure jump
//! stabilisation. Dirichlet data is imposed strongly at the vertices of
//! Dirichlet facets.

mod assemble;
mod facet;
mod problems;
pub mod quadrature;
mod solve;
mod space;

use std::sync::Arc;

use crate::krylov::{GmresConfig, KrylovError};
use crate::mesh::{BoundaryTag, MeshError};
use crate::scalar::Real;

pub use assemble::{
    assemble_a_h, assemble_b_p, assemble_b_t, assemble_d_p, assemble_velocity_penalty,
    build_block_system, l2_project_dirichlet, BlockSystem, DgGeometry,
};
pub use facet::{facet_jump_average_upwind, FacetTraces, UPWIND_TOL};
pub use problems::{manufactured_1d, patch_problem, pump_problem, robin_valve, ManufacturedSolution, VALVE_CLOSED};
pub use solve::{gmres_solve, solve, BlockDiag, BlockOperator, DgSolution};
pub use space::{count_dofs, velocity_dof, DgSpace, DofCount, SpaceKind};

pub type VectorField<T> = Arc<dyn Fn(&[T], T) -> Vec<T> + Send + Sync>;
pub type ScalarField<T> = Arc<dyn Fn(&[T], T) -> T + Send + Sync>;
/// `g_D(x, t, X, tag)` with `X` the reference position of `x`.
pub type DirichletField<T> = Arc<dyn Fn(&[T], T, &[T], BoundaryTag) -> Vec<T> + Send + Sync>;
pub type BoundaryVectorField<T> = Arc<dyn Fn(&[T], T, BoundaryTag) -> Vec<T> + Send + Sync>;
pub type BoundaryScalarField<T> = Arc<dyn Fn(&[T], T, BoundaryTag) -> T + Send + Sync>;

/// Coefficients and data of the transient Stokes problem in `d` space
/// dimensions. Points passed to the closures are spatial.
#[derive(Clone)]
pub struct ProblemData<T> {
    pub dim: usize,
    pub viscosity: T,
    pub source: VectorField<T>,
    /// Prescribed divergence; zero for incompressible flow.
    pub divergence: Option<ScalarField<T>>,
    pub dirichlet: DirichletField<T>,
    pub robin_data: Option<BoundaryVectorField<T>>,
    pub robin_coeff: BoundaryScalarField<T>,
    pub initial: VectorField<T>,
}

impl<T: Real> ProblemData<T> {
    /// Homogeneous data: no source, fluid at rest, walls at rest.
    pub fn zero(dim: usize, viscosity: T) -> Self {
        let zero = move |_: &[T], _: T| vec![T::zero(); dim];
        Self {
            dim,
            viscosity,
            source: Arc::new(zero),
            divergence: None,
            dirichlet: Arc::new(move |_, _, _, _| vec![T::zero(); dim]),
            robin_data: None,
            robin_coeff: Arc::new(|_, _, _| T::zero()),
            initial: Arc::new(zero),
        }
    }
}

impl<T> std::fmt::Debug for ProblemData<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemData").field("dim", &self.dim).finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreconditionerKind {
    None,
    /// ILU(0) of `K` and ILU(2) of `D + B |diag K|^-1 B^T`.
    #[default]
    BlockDiag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PressurePin {
    /// Fix one pressure per slab when no Robin boundary determines the level.
    #[default]
    Auto,
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub sigma_u: T,
    pub sigma_p: T,
    pub gmres: GmresConfig<T>,
    pub preconditioner: PreconditionerKind,
    pub pressure_pin: PressurePin,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            sigma_u: T::c(40.0),
            sigma_p: T::c(0.1),
            gmres: GmresConfig::default(),
            preconditioner: PreconditionerKind::BlockDiag,
            pressure_pin: PressurePin::Auto,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<(), DgError> {
        if !(self.sigma_u > T::zero()) || !(self.sigma_p > T::zero()) {
            return Err(DgError::Config("penalties must be positive".into()));
        }
        let tol = self.gmres.rel_tol;
        if !(tol > T::zero() && tol < T::one()) {
            return Err(DgError::Config(format!("rel_tol {tol} outside (0, 1)")));
        }
        if self.gmres.restart == 0 || self.gmres.max_iter == 0 {
            return Err(DgError::Config("restart and max_iter must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DgError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("problem is posed in {problem} dimensions, mesh in {mesh}")]
    Dimension { problem: usize, mesh: usize },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solver(#[from] KrylovError),
}
