//! Iterative solvers: preconditioned conjugate gradients, restarted GMRES with
//! right preconditioning, and incomplete LU factorisations with level-of-fill.

use std::collections::BTreeMap;

use crate::linalg::{dot, norm};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

pub trait LinearOperator<T> {
    fn dim(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[T], y: &mut [T]);
}

pub trait Preconditioner<T> {
    /// `z = P^{-1} r`
    fn apply(&self, r: &[T], z: &mut [T]);
}

impl<T: Real> LinearOperator<T> for CsrMatrix<T> {
    fn dim(&self) -> usize {
        assert_eq!(self.nrows, self.ncols, "operator must be square");
        self.nrows
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        self.mul_vec(x, y)
    }
}

/// No preconditioning.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl<T: Real> Preconditioner<T> for Identity {
    fn apply(&self, r: &[T], z: &mut [T]) {
        z.copy_from_slice(r);
    }
}

/// Inverse diagonal scaling.
#[derive(Clone, Debug)]
pub struct Jacobi<T> {
    inv_diag: Vec<T>,
}

impl<T: Real> Jacobi<T> {
    pub fn new(a: &CsrMatrix<T>) -> Self {
        let inv_diag = a
            .diagonal()
            .into_iter()
            .map(|d| if d != T::zero() { T::one() / d } else { T::one() })
            .collect();
        Self { inv_diag }
    }
}

impl<T: Real> Preconditioner<T> for Jacobi<T> {
    fn apply(&self, r: &[T], z: &mut [T]) {
        for ((zi, &ri), &d) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * d;
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum KrylovError {
    #[error("no convergence after {iterations} iterations, relative residual {residual:e}")]
    NotConverged {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("dimension mismatch: operator {operator}, vector {vector}")]
    Dimension { operator: usize, vector: usize },
    #[error("breakdown: {0}")]
    Breakdown(String),
}

#[derive(Clone, Debug)]
pub struct SolveOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// Relative residual after each iteration, starting with the initial one.
    pub history: Vec<T>,
    pub converged: bool,
}

impl<T: Real> SolveOutcome<T> {
    pub fn final_residual(&self) -> T {
        *self.history.last().expect("history starts with the initial residual")
    }
}

/// Preconditioned conjugate gradients for symmetric positive definite `a`.
pub fn cg<T: Real, A: LinearOperator<T>, P: Preconditioner<T>>(
    a: &A,
    prec: &P,
    b: &[T],
    rel_tol: T,
    max_iter: usize,
) -> Result<SolveOutcome<T>, KrylovError> {
    let n = a.dim();
    if b.len() != n {
        return Err(KrylovError::Dimension {
            operator: n,
            vector: b.len(),
        });
    }
    let mut x = vec![T::zero(); n];
    let b_norm = norm(b);
    if b_norm == T::zero() {
        return Ok(SolveOutcome {
            x,
            iterations: 0,
            history: vec![T::zero()],
            converged: true,
        });
    }
    let mut r = b.to_vec();
    let mut z = vec![T::zero(); n];
    prec.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![T::zero(); n];
    let mut history = vec![T::one()];
    for it in 1..=max_iter {
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= T::zero() {
            return Err(KrylovError::Breakdown(format!(
                "p^T A p = {pap} is not positive"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rel = norm(&r) / b_norm;
        history.push(rel);
        if rel <= rel_tol {
            return Ok(SolveOutcome {
                x,
                iterations: it,
                history,
                converged: true,
            });
        }
        prec.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(KrylovError::NotConverged {
        iterations: max_iter,
        residual: history.last().unwrap().as_f64(),
        history: history.iter().map(|v| v.as_f64()).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresConfig<T> {
    /// Krylov dimension per restart cycle.
    pub restart: usize,
    /// Total number of inner iterations.
    pub max_iter: usize,
    pub rel_tol: T,
}

impl<T: Real> Default for GmresConfig<T> {
    fn default() -> Self {
        Self {
            restart: 100,
            max_iter: 500,
            rel_tol: T::c(1e-5),
        }
    }
}

fn givens<T: Real>(a: T, b: T) -> (T, T) {
    if b == T::zero() {
        (T::one(), T::zero())
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// Restarted GMRES with right preconditioning: solves `A P^{-1} y = b`,
/// `x = P^{-1} y`, so the monitored residual is the true residual of `A x = b`.
pub fn gmres<T: Real, A: LinearOperator<T>, P: Preconditioner<T>>(
    a: &A,
    prec: &P,
    b: &[T],
    x0: Option<&[T]>,
    cfg: &GmresConfig<T>,
) -> Result<SolveOutcome<T>, KrylovError> {
    let n = a.dim();
    if b.len() != n {
        return Err(KrylovError::Dimension {
            operator: n,
            vector: b.len(),
        });
    }
    let mut x = x0.map_or_else(|| vec![T::zero(); n], <[T]>::to_vec);
    let b_norm = norm(b);
    if b_norm == T::zero() {
        return Ok(SolveOutcome {
            x: vec![T::zero(); n],
            iterations: 0,
            history: vec![T::zero()],
            converged: true,
        });
    }
    let m = cfg.restart.max(1).min(n.max(1));
    let mut history = Vec::new();
    let mut total = 0;
    let mut r = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut last_cycle_start = T::infinity();

    loop {
        a.apply(&x, &mut r);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        let beta = norm(&r);
        let rel = beta / b_norm;
        if history.is_empty() {
            history.push(rel);
        } else if let Some(last) = history.last_mut() {
            // replace the estimate of the previous cycle by the true residual
            *last = rel;
        }
        if rel <= cfg.rel_tol {
            return Ok(SolveOutcome {
                x,
                iterations: total,
                history,
                converged: true,
            });
        }
        if total >= cfg.max_iter || !(rel < last_cycle_start * T::c(1.0 - 1e-12)) {
            return Err(KrylovError::NotConverged {
                iterations: total,
                residual: rel.as_f64(),
                history: history.iter().map(|v| v.as_f64()).collect(),
            });
        }
        last_cycle_start = rel;

        let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|&v| v / beta).collect());
        let mut h = vec![vec![T::zero(); m]; m + 1];
        let mut cs = vec![T::zero(); m];
        let mut sn = vec![T::zero(); m];
        let mut g = vec![T::zero(); m + 1];
        g[0] = beta;
        let mut k = 0;
        for j in 0..m {
            prec.apply(&basis[j], &mut z);
            a.apply(&z, &mut w);
            // modified Gram-Schmidt, two passes
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let hij = dot(&w, v);
                    h[i][j] += hij;
                    for (wl, &vl) in w.iter_mut().zip(v) {
                        *wl -= hij * vl;
                    }
                }
            }
            let hn = norm(&w);
            h[j + 1][j] = hn;
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let (c, s) = givens(h[j][j], h[j + 1][j]);
            cs[j] = c;
            sn[j] = s;
            h[j][j] = c * h[j][j] + s * h[j + 1][j];
            h[j + 1][j] = T::zero();
            g[j + 1] = -s * g[j];
            g[j] = c * g[j];
            total += 1;
            k = j + 1;
            let est = g[j + 1].abs() / b_norm;
            history.push(est);
            let breakdown = hn <= T::epsilon() * beta;
            if est <= cfg.rel_tol || total >= cfg.max_iter || breakdown {
                break;
            }
            basis.push(w.iter().map(|&v| v / hn).collect());
        }
        // back substitution for the k x k triangular system
        let mut y = vec![T::zero(); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for l in i + 1..k {
                s -= h[i][l] * y[l];
            }
            if h[i][i] == T::zero() {
                return Err(KrylovError::Breakdown("singular Hessenberg matrix".into()));
            }
            y[i] = s / h[i][i];
        }
        let mut vy = vec![T::zero(); n];
        for (yi, v) in y.iter().zip(&basis) {
            for (acc, &vl) in vy.iter_mut().zip(v) {
                *acc += *yi * vl;
            }
        }
        prec.apply(&vy, &mut z);
        for (xi, &zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
}

/// Incomplete LU factorisation with level-of-fill `k`.
#[derive(Clone, Debug)]
pub struct Ilu<T> {
    n: usize,
    /// strictly lower part of `L` (unit diagonal implied)
    lower: CsrMatrix<T>,
    /// `U` rows with the diagonal stored first
    upper: CsrMatrix<T>,
}

impl<T: Real> Ilu<T> {
    pub fn new(a: &CsrMatrix<T>, fill_level: usize) -> Self {
        let n = a.nrows;
        assert_eq!(n, a.ncols, "ILU needs a square matrix");
        // U rows: (col, value, level), diagonal first
        let mut u_rows: Vec<Vec<(usize, T, usize)>> = Vec::with_capacity(n);
        let mut l_trip = Vec::new();
        let mut u_trip = Vec::new();
        for i in 0..n {
            let (cols, vals) = a.row(i);
            let row_norm = vals.iter().map(|v| v.abs()).fold(T::zero(), T::max);
            let mut work: BTreeMap<usize, (T, usize)> =
                cols.iter().zip(vals).map(|(&j, &v)| (j, (v, 0))).collect();
            work.entry(i).or_insert((T::zero(), 0));
            let mut cursor = 0;
            loop {
                let next = work.range(cursor..i).next().map(|(&k, &e)| (k, e));
                let Some((k, (wk, lev_ik))) = next else { break };
                cursor = k + 1;
                let urow = &u_rows[k];
                let lik = wk / urow[0].1;
                work.insert(k, (lik, lev_ik));
                for &(j, ukj, lev_kj) in &urow[1..] {
                    let lev = lev_ik + lev_kj + 1;
                    match work.get_mut(&j) {
                        Some(e) => {
                            e.0 -= lik * ukj;
                            e.1 = e.1.min(lev);
                        }
                        None if lev <= fill_level => {
                            work.insert(j, (-lik * ukj, lev));
                        }
                        None => {}
                    }
                }
            }
            let mut urow = Vec::new();
            let (mut d, _) = work[&i];
            let floor = T::c(1e-14) * if row_norm > T::zero() { row_norm } else { T::one() };
            if d.abs() < floor {
                d = if d < T::zero() { -floor } else { floor };
            }
            urow.push((i, d, 0));
            for (&j, &(v, lev)) in &work {
                if j < i {
                    l_trip.push((i, j, v));
                } else if j > i {
                    urow.push((j, v, lev));
                }
            }
            for &(j, v, _) in &urow {
                u_trip.push((i, j, v));
            }
            u_rows.push(urow);
        }
        let lower = CsrMatrix::from_triplets(n, n, &l_trip);
        // keep the diagonal first in each U row
        let mut upper = CsrMatrix::from_triplets(n, n, &u_trip);
        for i in 0..n {
            let s = upper.row_ptr[i];
            debug_assert_eq!(upper.col_idx[s], i);
            let _ = s;
        }
        upper.nrows = n;
        Self { n, lower, upper }
    }

    pub fn nnz(&self) -> usize {
        self.lower.nnz() + self.upper.nnz()
    }
}

impl<T: Real> Preconditioner<T> for Ilu<T> {
    fn apply(&self, r: &[T], z: &mut [T]) {
        for i in 0..self.n {
            let (c, v) = self.lower.row(i);
            let s: T = c.iter().zip(v).map(|(&j, &l)| l * z[j]).sum();
            z[i] = r[i] - s;
        }
        for i in (0..self.n).rev() {
            let (c, v) = self.upper.row(i);
            // columns sorted ascending, diagonal is the first entry of the row
            let s: T = c[1..].iter().zip(&v[1..]).map(|(&j, &u)| u * z[j]).sum();
            z[i] = (z[i] - s) / v[0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplace_1d(n: usize) -> CsrMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, &t)
    }

    fn dense_solve(a: &CsrMatrix<f64>, b: &[f64]) -> Vec<f64> {
        let n = a.nrows;
        let flat: Vec<f64> = a.to_dense().into_iter().flatten().collect();
        crate::linalg::solve(&flat, n, b).unwrap()
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let a = CsrMatrix::<f64>::identity(5);
        let b = [1.0, -2.0, 3.0, 0.5, 7.0];
        let out = gmres(&a, &Identity, &b, None, &GmresConfig::default()).unwrap();
        assert_eq!(out.iterations, 1);
        for (x, y) in out.x.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn gmres_matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0 + rng.gen::<f64>()));
            for _ in 0..4 {
                let j = rng.gen_range(0..n);
                t.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cfg = GmresConfig {
            restart: 10,
            max_iter: 500,
            rel_tol: 1e-12,
        };
        let exact = dense_solve(&a, &b);
        for prec in [0usize, 1, 2] {
            let out = match prec {
                0 => gmres(&a, &Identity, &b, None, &cfg),
                1 => gmres(&a, &Ilu::new(&a, 0), &b, None, &cfg),
                _ => gmres(&a, &Ilu::new(&a, 2), &b, None, &cfg),
            }
            .unwrap();
            for (x, e) in out.x.iter().zip(&exact) {
                assert!((x - e).abs() < 1e-8, "prec {prec}: {x} vs {e}");
            }
        }
    }

    #[test]
    fn ilu0_is_exact_for_tridiagonal() {
        let a = laplace_1d(20);
        let ilu = Ilu::new(&a, 0);
        let b: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let mut z = vec![0.0; 20];
        ilu.apply(&b, &mut z);
        let exact = dense_solve(&a, &b);
        for (x, e) in z.iter().zip(&exact) {
            assert!((x - e).abs() < 1e-10);
        }
    }

    #[test]
    fn fill_levels_grow_the_pattern() {
        // 2D five-point Laplacian: ILU(0) drops fill, ILU(2) keeps more
        let m = 6;
        let n = m * m;
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let p = i * m + j;
                t.push((p, p, 4.0));
                if i > 0 {
                    t.push((p, p - m, -1.0));
                }
                if i + 1 < m {
                    t.push((p, p + m, -1.0));
                }
                if j > 0 {
                    t.push((p, p - 1, -1.0));
                }
                if j + 1 < m {
                    t.push((p, p + 1, -1.0));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let i0 = Ilu::new(&a, 0);
        let i2 = Ilu::new(&a, 2);
        assert_eq!(i0.nnz(), a.nnz());
        assert!(i2.nnz() > i0.nnz());
    }

    #[test]
    fn cg_solves_laplacian() {
        let a = laplace_1d(50);
        let b = vec![1.0; 50];
        let out = cg(&a, &Jacobi::new(&a), &b, 1e-12, 200).unwrap();
        let exact = dense_solve(&a, &b);
        for (x, e) in out.x.iter().zip(&exact) {
            assert!((x - e).abs() < 1e-9);
        }
    }

    #[test]
    fn gmres_reports_history_on_failure() {
        let a = laplace_1d(200);
        let b = vec![1.0; 200];
        let cfg = GmresConfig {
            restart: 5,
            max_iter: 10,
            rel_tol: 1e-12,
        };
        match gmres(&a, &Identity, &b, None, &cfg) {
            Err(KrylovError::NotConverged { history, .. }) => assert!(history.len() > 1),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
