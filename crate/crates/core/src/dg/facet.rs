use crate::scalar::Real;

/// `|n_t|` below this counts as a purely spatial facet without upwinding.
pub const UPWIND_TOL: f64 = 1e-12;

/// Facet operators of a vector field at one point of an interior facet.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetTraces<T> {
    /// `u_k (x) n_x + u_l (x) (-n_x)`, row-major `d x d`.
    pub jump: Vec<T>,
    pub average: Vec<T>,
    /// Trace from the element upstream in time; the average on spatial facets.
    pub upwind: Vec<T>,
}

/// Jump, average and upwind value of the traces `u_k`, `u_l` on a facet
/// whose space-time unit normal `normal` points from `k` into `l`.
pub fn facet_jump_average_upwind<T: Real>(u_k: &[T], u_l: &[T], normal: &[T]) -> FacetTraces<T> {
    let d = u_k.len();
    let nx = &normal[..d];
    let nt = normal[d];
    let mut jump = vec![T::zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            jump[i * d + j] = (u_k[i] - u_l[i]) * nx[j];
        }
    }
    let average: Vec<T> = u_k.iter().zip(u_l).map(|(&a, &b)| (a + b) / T::c(2.0)).collect();
    let upwind = if nt > T::c(UPWIND_TOL) {
        u_k.to_vec()
    } else if nt < -T::c(UPWIND_TOL) {
        u_l.to_vec()
    } else {
        average.clone()
    };
    FacetTraces { jump, average, upwind }
}
