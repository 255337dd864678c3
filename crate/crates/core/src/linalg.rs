//! Small dense linear algebra on row-major slices.
//!
//! Everything here works on matrices of size at most five or six, the
//! dimensions that appear in element-level computations.

use crate::scalar::{factorial, Real};

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

/// LU factorisation with partial pivoting, in place. Returns the permutation
/// sign, or `None` when a pivot vanishes exactly.
fn lu_in_place<T: Real>(a: &mut [T], n: usize, perm: &mut [usize]) -> Option<T> {
    debug_assert_eq!(a.len(), n * n);
    let mut sign = T::one();
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == T::zero() {
            return None;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            perm.swap(k, piv);
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            a[i * n + k] = f;
            if f != T::zero() {
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= f * u;
                }
            }
        }
    }
    Some(sign)
}

/// Determinant of an `n x n` row-major matrix.
pub fn determinant<T: Real>(a: &[T], n: usize) -> T {
    if n == 0 {
        return T::one();
    }
    let mut lu = a.to_vec();
    let mut perm = vec![0; n];
    match lu_in_place(&mut lu, n, &mut perm) {
        None => T::zero(),
        Some(sign) => (0..n).fold(sign, |acc, i| acc * lu[i * n + i]),
    }
}

/// Solves `a x = b`. Returns `None` for an exactly singular matrix; callers
/// that need a conditioning threshold check the determinant themselves.
pub fn solve<T: Real>(a: &[T], n: usize, b: &[T]) -> Option<Vec<T>> {
    let mut lu = a.to_vec();
    let mut perm = vec![0; n];
    lu_in_place(&mut lu, n, &mut perm)?;
    let mut x: Vec<T> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let l = lu[i * n + j];
            let xj = x[j];
            x[i] -= l * xj;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let u = lu[i * n + j];
            let xj = x[j];
            x[i] -= u * xj;
        }
        x[i] /= lu[i * n + i];
    }
    Some(x)
}

/// Inverse of an `n x n` matrix, row-major.
pub fn invert<T: Real>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut inv = vec![T::zero(); n * n];
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = T::zero());
        e[j] = T::one();
        let col = solve(a, n, &e)?;
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(inv)
}

/// Edge vectors `p_i - p_0` stored as the columns of an `m x n` matrix.
fn edge_matrix<T: Real>(points: &[&[T]]) -> (usize, usize, Vec<T>) {
    let n = points.len() - 1;
    let m = points[0].len();
    let mut e = vec![T::zero(); m * n];
    for j in 0..n {
        for i in 0..m {
            e[i * n + j] = points[j + 1][i] - points[0][i];
        }
    }
    (m, n, e)
}

/// Unsigned `n`-dimensional measure of the simplex spanned by `n + 1`
/// points in `R^m`, `m >= n`: `sqrt(det(E^T E)) / n!`.
pub fn simplex_measure<T: Real>(points: &[&[T]]) -> T {
    let n = points.len() - 1;
    if n == 0 {
        return T::one();
    }
    let (m, n, e) = edge_matrix(points);
    assert!(m >= n, "a {n}-simplex does not fit into R^{m}");
    if m == n {
        return determinant(&e, n).abs() / factorial(n);
    }
    let mut gram = vec![T::zero(); n * n];
    for a in 0..n {
        for b in a..n {
            let g: T = (0..m).map(|i| e[i * n + a] * e[i * n + b]).sum();
            gram[a * n + b] = g;
            gram[b * n + a] = g;
        }
    }
    determinant(&gram, n).abs().sqrt() / factorial(n)
}

/// Signed volume of a full-dimensional simplex (`n + 1` points in `R^n`).
pub fn signed_volume<T: Real>(points: &[&[T]]) -> T {
    let (m, n, e) = edge_matrix(points);
    assert_eq!(m, n);
    determinant(&e, n) / factorial(n)
}

/// Gradients of the barycentric coordinates of a full-dimensional simplex,
/// one vector per vertex. `None` for a degenerate simplex.
pub fn barycentric_gradients<T: Real>(points: &[&[T]]) -> Option<Vec<Vec<T>>> {
    let (m, n, e) = edge_matrix(points);
    assert_eq!(m, n);
    let inv = invert(&e, n)?;
    // row a-1 of E^{-1} is the gradient of lambda_a
    let mut grads = Vec::with_capacity(n + 1);
    let mut g0 = vec![T::zero(); n];
    for a in 0..n {
        let row = inv[a * n..(a + 1) * n].to_vec();
        for (s, &v) in g0.iter_mut().zip(&row) {
            *s -= v;
        }
        grads.push(row);
    }
    grads.insert(0, g0);
    Some(grads)
}

/// Vector orthogonal to `m - 1` vectors in `R^m` (generalised cross
/// product). Its length equals the `(m-1)`-volume of the parallelotope they
/// span. Component `i` is the signed cofactor obtained by deleting column `i`.
pub fn orthogonal_complement<T: Real>(vectors: &[Vec<T>], m: usize) -> Vec<T> {
    assert_eq!(vectors.len() + 1, m);
    let k = m - 1;
    let mut out = vec![T::zero(); m];
    let mut minor = vec![T::zero(); k * k];
    for (col, o) in out.iter_mut().enumerate() {
        for (r, v) in vectors.iter().enumerate() {
            let mut c = 0;
            for (j, &x) in v.iter().enumerate() {
                if j != col {
                    minor[r * k + c] = x;
                    c += 1;
                }
            }
        }
        let det = determinant(&minor, k);
        *o = if (col + k) % 2 == 0 { det } else { -det };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solve_small_system() {
        let a = [2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        let x = solve(&a, 3, &[1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
            assert_relative_eq!(r, [1.0, 2.0, 3.0][i], epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_matrix_has_no_solution() {
        let a = [1.0, 2.0, 2.0, 4.0];
        assert!(solve(&a, 2, &[1.0, 1.0]).is_none());
        assert_eq!(determinant(&a, 2), 0.0);
    }

    #[test]
    fn determinant_of_permutation() {
        let a = [0.0, 1.0, 1.0, 0.0];
        assert_eq!(determinant(&a, 2), -1.0);
    }

    #[test]
    fn triangle_in_three_space() {
        let p: [&[f64]; 3] = [&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]];
        assert_relative_eq!(simplex_measure(&p), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cross_product_matches_r3() {
        let n = orthogonal_complement(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 3);
        assert_eq!(n, vec![0.0, 0.0, 1.0]);
        let n1 = orthogonal_complement::<f64>(&[], 1);
        assert_eq!(n1, vec![1.0]);
        let n2 = orthogonal_complement::<f64>(&[vec![1.0, 0.0]], 2);
        assert!(dot(&n2, &[1.0, 0.0]).abs() < 1e-15);
        assert_relative_eq!(norm(&n2), 1.0);
    }

    #[test]
    fn complement_is_orthogonal_in_r4() {
        let v = vec![
            vec![1.0, 2.0, 0.5, -1.0],
            vec![0.3, -1.0, 2.0, 0.0],
            vec![0.0, 0.7, 1.0, 3.0],
        ];
        let n = orthogonal_complement::<f64>(&v, 4);
        for e in &v {
            assert!(dot(&n, e).abs() < 1e-13);
        }
        // |n| equals the 3-volume of the parallelotope: 3! times the simplex measure
        let o = [0.0; 4];
        let pts: Vec<Vec<f64>> = v.clone();
        let refs: Vec<&[f64]> = std::iter::once(&o[..]).chain(pts.iter().map(|p| &p[..])).collect();
        assert_relative_eq!(norm(&n), 6.0 * simplex_measure(&refs), epsilon = 1e-12);
    }

    #[test]
    fn barycentric_gradients_reproduce_kronecker() {
        let p = [[0.2, 0.1, 0.0], [1.4, 0.3, -0.2], [0.1, 1.1, 0.4], [0.3, 0.2, 0.9]];
        let refs: Vec<&[f64]> = p.iter().map(|r| &r[..]).collect();
        let g = barycentric_gradients(&refs).unwrap();
        // lambda_a(x_b) - lambda_a(x_0) = g_a . (x_b - x_0) = delta_ab - delta_a0
        for a in 0..4 {
            for b in 1..4 {
                let v = dot(&g[a], &sub(&p[b], &p[0]));
                let expect = f64::from(u8::from(a == b)) - f64::from(u8::from(a == 0));
                assert!((v - expect).abs() < 1e-13);
            }
        }
    }
}
