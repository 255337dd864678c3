//! Compressed sparse row matrices assembled from triplets.

use std::io::{self, Write};

use crate::io::format_sci;
use crate::scalar::Real;

/// Triplet accumulator. Duplicate entries are summed on conversion.
#[derive(Clone, Debug, Default)]
pub struct CooMatrix<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize, T)>,
}

impl<T: Real> CooMatrix<T> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.entries.push((i, j, v));
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = (usize, usize, T)>) {
        self.entries.extend(other);
    }

    pub fn to_csr(&self) -> CsrMatrix<T> {
        CsrMatrix::from_triplets(self.nrows, self.ncols, &self.entries)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds a matrix with sorted column indices; duplicates are summed in
    /// input order, so the result is deterministic.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: &[(usize, usize, T)]) -> Self {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, _, _) in entries {
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; entries.len()];
        let mut vals = vec![T::zero(); entries.len()];
        let mut next = counts.clone();
        for &(i, j, v) in entries {
            let p = next[i];
            cols[p] = j;
            vals[p] = v;
            next[i] += 1;
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        let mut order: Vec<usize> = Vec::new();
        for i in 0..nrows {
            let (s, e) = (counts[i], counts[i + 1]);
            order.clear();
            order.extend(s..e);
            // stable: equal columns keep insertion order
            order.sort_by_key(|&p| cols[p]);
            for &p in &order {
                if col_idx.len() > row_ptr[i] && *col_idx.last().unwrap() == cols[p] {
                    *values.last_mut().unwrap() += vals[p];
                } else {
                    col_idx.push(cols[p]);
                    values.push(vals[p]);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (c, v) = self.row(i);
        match c.binary_search(&j) {
            Ok(p) => v[p],
            Err(_) => T::zero(),
        }
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            *yi = c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum();
        }
    }

    /// `y += alpha A x`
    pub fn mul_vec_add(&self, alpha: T, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            let s: T = c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum();
            *yi += alpha * s;
        }
    }

    /// `y += alpha A^T x`
    pub fn mul_vec_transpose_add(&self, alpha: T, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        for (i, &xi) in x.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                y[j] += alpha * a * xi;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                t.push((j, i, a));
            }
        }
        Self::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &a)| (i, j, a))
        })
    }

    /// Entries with magnitude below `tol` are dropped.
    pub fn pruned(&self, tol: T) -> Self {
        let t: Vec<_> = self.triplets().filter(|&(_, _, v)| v.abs() > tol).collect();
        Self::from_triplets(self.nrows, self.ncols, &t)
    }

    /// `A diag(w) B` for `A: m x k`, `B: k x n`.
    pub fn mul_diag_mul(&self, w: &[T], other: &CsrMatrix<T>) -> Self {
        assert_eq!(self.ncols, other.nrows);
        assert_eq!(w.len(), self.ncols);
        let mut out = Vec::new();
        let mut acc = vec![T::zero(); other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.ncols];
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let s = a * w[k];
                let (cb, vb) = other.row(k);
                for (&j, &b) in cb.iter().zip(vb) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += s * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                out.push((i, j, acc[j]));
                acc[j] = T::zero();
                mark[j] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, &out)
    }

    /// Entry-wise sum of two matrices with equal shape.
    pub fn add(&self, other: &CsrMatrix<T>) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let t: Vec<_> = self.triplets().chain(other.triplets()).collect();
        Self::from_triplets(self.nrows, self.ncols, &t)
    }

    /// Largest absolute entry of `A - A^T`.
    pub fn asymmetry(&self) -> T {
        let t = self.transpose();
        let mut m = T::zero();
        for (i, j, v) in self.triplets() {
            m = m.max((v - t.get(i, j)).abs());
        }
        for (i, j, v) in t.triplets() {
            m = m.max((v - self.get(i, j)).abs());
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    /// Writes the matrix in MatrixMarket coordinate format (1-based).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(w, "{} {} {}", i + 1, j + 1, format_sci(v.as_f64()))?;
        }
        Ok(())
    }

    /// Reads a real MatrixMarket coordinate file (general or symmetric).
    pub fn read_matrix_market(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty MatrixMarket file")?;
        let lower = header.to_ascii_lowercase();
        if !lower.starts_with("%%matrixmarket matrix coordinate") {
            return Err(format!("unsupported header `{header}`"));
        }
        let symmetric = lower.contains("symmetric");
        let mut lines = lines.filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let size = lines.next().ok_or("missing size line")?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| format!("bad size line `{size}`")))
            .collect::<Result<_, _>>()?;
        let [m, n, nnz] = dims[..] else {
            return Err(format!("bad size line `{size}`"));
        };
        let mut t = Vec::with_capacity(nnz);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 3 {
                return Err(format!("bad entry `{line}`"));
            }
            let i: usize = f[0].parse().map_err(|_| format!("bad row in `{line}`"))?;
            let j: usize = f[1].parse().map_err(|_| format!("bad column in `{line}`"))?;
            let v: f64 = f[2].parse().map_err(|_| format!("bad value in `{line}`"))?;
            if i == 0 || j == 0 || i > m || j > n {
                return Err(format!("index out of range in `{line}`"));
            }
            t.push((i - 1, j - 1, T::c(v)));
            if symmetric && i != j {
                t.push((j - 1, i - 1, T::c(v)));
            }
        }
        Ok(Self::from_triplets(m, n, &t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix<f64> {
        CsrMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 1.0), (0, 2, 2.0), (1, 1, 3.0), (2, 0, 4.0), (0, 0, 0.5)],
        )
    }

    #[test]
    fn duplicates_are_summed() {
        let a = sample();
        assert_eq!(a.get(0, 0), 1.5);
        assert_eq!(a.nnz(), 4);
        assert_eq!(a.row(0).0, &[0, 2]);
    }

    #[test]
    fn products() {
        let a = sample();
        let mut y = vec![0.0; 3];
        a.mul_vec(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, vec![3.5, 3.0, 4.0]);
        let mut z = vec![0.0; 3];
        a.mul_vec_transpose_add(1.0, &[1.0, 1.0, 1.0], &mut z);
        assert_eq!(z, vec![5.5, 3.0, 2.0]);
        assert_eq!(a.transpose().get(2, 0), 2.0);
        let p = a.mul_diag_mul(&[1.0, 2.0, 3.0], &a.transpose());
        // (A diag(w) A^T)_{00} = 1.5^2 + 3 * 2^2
        assert_eq!(p.get(0, 0), 2.25 + 12.0);
        assert_eq!(a.asymmetry(), 2.0);
    }

    #[test]
    fn matrix_market_roundtrip() {
        let a = sample();
        let mut buf = Vec::new();
        a.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n3 3 4\n"));
        let b = CsrMatrix::<f64>::read_matrix_market(&text).unwrap();
        assert_eq!(a, b);
    }
}
