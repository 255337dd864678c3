//! Ready-made problem data: manufactured solutions, the patch test and the
//! pump with its valves.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{ProblemData, ScalarField, VectorField};
use crate::mesh::BoundaryTag;
use crate::motion::{motion_velocity, MotionSpec};
use crate::scalar::Real;

/// Robin coefficient of a closed valve.
pub const VALVE_CLOSED: f64 = 1e6;

/// Exact velocity and pressure of a test problem.
#[derive(Clone)]
pub struct ManufacturedSolution<T> {
    pub velocity: VectorField<T>,
    pub pressure: ScalarField<T>,
}

/// `u = sin(pi x) e^-t`, `p = cos(pi x) e^-t` on `(0, 1)` with matching
/// source and divergence.
pub fn manufactured_1d<T: Real>(viscosity: T) -> (ProblemData<T>, ManufacturedSolution<T>) {
    let pi = T::c(PI);
    let u = move |x: &[T], t: T| vec![(pi * x[0]).sin() * (-t).exp()];
    let p = move |x: &[T], t: T| (pi * x[0]).cos() * (-t).exp();
    let mut data = ProblemData::zero(1, viscosity);
    data.source = Arc::new(move |x: &[T], t: T| {
        let s = (pi * x[0]).sin() * (-t).exp();
        vec![-s + viscosity * pi * pi * s - pi * s]
    });
    data.divergence = Some(Arc::new(move |x: &[T], t: T| pi * (pi * x[0]).cos() * (-t).exp()));
    data.dirichlet = Arc::new(move |x: &[T], t: T, _: &[T], _| u(x, t));
    data.initial = Arc::new(u);
    (
        data,
        ManufacturedSolution {
            velocity: Arc::new(u),
            pressure: Arc::new(p),
        },
    )
}

/// Constant velocity `u`, zero pressure, no sources.
pub fn patch_problem<T: Real>(u: Vec<T>) -> (ProblemData<T>, ManufacturedSolution<T>) {
    let d = u.len();
    let mut data = ProblemData::zero(d, T::one());
    let a = u.clone();
    data.dirichlet = Arc::new(move |_, _, _, _| a.clone());
    let b = u.clone();
    data.initial = Arc::new(move |_, _| b.clone());
    (
        data,
        ManufacturedSolution {
            velocity: Arc::new(move |_, _| u.clone()),
            pressure: Arc::new(|_, _| T::zero()),
        },
    )
}

/// Robin coefficient of the pump valves: the outlet is closed during the
/// first half of each period, the inlet during the second.
pub fn robin_valve<T: Real>(t: T, tag: BoundaryTag) -> T {
    let phase = t - t.floor();
    let first_half = phase < T::c(0.5);
    let closed = match tag {
        BoundaryTag::RobinOut => first_half,
        BoundaryTag::RobinIn => !first_half,
        _ => false,
    };
    if closed {
        T::c(VALVE_CLOSED)
    } else {
        T::zero()
    }
}

/// Flow driven by a moving wall: the wall velocity on moving Dirichlet
/// facets, no-slip elsewhere, valves on the Robin facets.
pub fn pump_problem<T: Real>(motion: MotionSpec<T>, viscosity: T) -> ProblemData<T> {
    let mut data = ProblemData::zero(3, viscosity);
    data.dirichlet = Arc::new(move |x: &[T], t: T, reference: &[T], tag| match tag {
        BoundaryTag::DirichletMoving => {
            motion_velocity(&motion, reference, t).unwrap_or_else(|_| vec![T::zero(); x.len()])
        }
        _ => vec![T::zero(); x.len()],
    });
    data.robin_coeff = Arc::new(|_, t, tag| robin_valve(t, tag));
    data
}
