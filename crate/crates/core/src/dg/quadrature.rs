//! Conical product rules on the reference simplex.
//!
//! The collapsed map `x1 = u1, x2 = (1 - u1) u2, ...` turns the reference
//! `n`-simplex into the unit cube with Jacobian `prod (1 - u_i)^(n-i)`; each
//! direction then uses a Gauss-Jacobi rule for its weight. Weights are
//! positive for every dimension and degree.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::Real;

/// Points in reference coordinates `(x1, .., xn)` with weights summing to
/// the reference volume `1/n!`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    pub dim: usize,
    pub points: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Barycentric coordinates `(1 - sum x, x1, .., xn)` of point `q`.
    pub fn barycentric(&self, q: usize) -> Vec<T> {
        let x = &self.points[q];
        let mut b = Vec::with_capacity(self.dim + 1);
        b.push(T::one() - x.iter().copied().sum::<T>());
        b.extend_from_slice(x);
        b
    }

    /// Maps point `q` onto the simplex with the given vertices.
    pub fn map(&self, q: usize, vertices: &[&[T]]) -> Vec<T> {
        let b = self.barycentric(q);
        let mut out = vec![T::zero(); vertices[0].len()];
        for (v, &w) in vertices.iter().zip(&b) {
            for (o, &x) in out.iter_mut().zip(v.iter()) {
                *o += w * x;
            }
        }
        out
    }
}

/// Gauss-Jacobi nodes and weights on `[0, 1]` for the weight `(1 - u)^alpha`.
pub fn gauss_jacobi_unit(m: usize, alpha: usize) -> (Vec<f64>, Vec<f64>) {
    let a = alpha as f64;
    let b = 0.0;
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < m {
            let j = kf + 1.0;
            let s = 2.0 * j + a + b;
            let num = 4.0 * j * (j + a) * (j + b) * (j + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            let x = eig.eigenvalues[i];
            ((1.0 + x) / 2.0, mu0 * v0 * v0 / 2f64.powf(a + 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Rule on the reference `dim`-simplex exact for polynomials of total
/// degree `degree`.
pub fn simplex_rule<T: Real>(dim: usize, degree: usize) -> QuadratureRule<T> {
    if dim == 0 {
        return QuadratureRule {
            dim,
            points: vec![vec![]],
            weights: vec![T::one()],
        };
    }
    let m = (degree + 2) / 2;
    let lines: Vec<(Vec<f64>, Vec<f64>)> = (1..=dim).map(|i| gauss_jacobi_unit(m, dim - i)).collect();
    let total = m.pow(dim as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut x = vec![0.0; dim];
        let mut rest = 1.0;
        let mut w = 1.0;
        for (i, &j) in idx.iter().enumerate() {
            let u = lines[i].0[j];
            x[i] = rest * u;
            rest *= 1.0 - u;
            w *= lines[i].1[j];
        }
        points.push(x.into_iter().map(T::c).collect());
        weights.push(T::c(w));
        for i in (0..dim).rev() {
            idx[i] += 1;
            if idx[i] < m {
                break;
            }
            idx[i] = 0;
        }
    }
    QuadratureRule { dim, points, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn gauss_legendre_two_points() {
        let (x, w) = gauss_jacobi_unit(2, 0);
        let r = 0.5 / 3f64.sqrt();
        assert!((x[0] - (0.5 - r)).abs() < 1e-14 && (x[1] - (0.5 + r)).abs() < 1e-14);
        assert!((w[0] - 0.5).abs() < 1e-14 && (w[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn monomials_are_exact() {
        // int_simplex x^a y^b ... = a! b! ... / (n + sum)!
        for dim in 1..=4 {
            for degree in 0..=5 {
                let rule = simplex_rule::<f64>(dim, degree);
                assert!(rule.weights.iter().all(|&w| w > 0.0));
                let exps: Vec<Vec<usize>> = match dim {
                    1 => (0..=degree).map(|a| vec![a]).collect(),
                    _ => vec![
                        {
                            let mut e = vec![0; dim];
                            e[0] = degree;
                            e
                        },
                        {
                            let mut e = vec![0; dim];
                            e[dim - 1] = degree / 2;
                            e[0] = degree - degree / 2;
                            e
                        },
                    ],
                };
                for e in exps {
                    let exact = e.iter().map(|&k| fact(k)).product::<f64>()
                        / fact(dim + e.iter().sum::<usize>());
                    let approx: f64 = (0..rule.len())
                        .map(|q| {
                            rule.weights[q]
                                * rule.points[q]
                                    .iter()
                                    .zip(&e)
                                    .map(|(x, &k)| x.powi(k as i32))
                                    .product::<f64>()
                        })
                        .sum();
                    assert!((approx - exact).abs() < 1e-14, "dim {dim} exps {e:?}");
                }
            }
        }
    }
}
