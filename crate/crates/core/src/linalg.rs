//! Small dense linear algebra over any [`Scalar`].
//!
//! Dimensions in this crate never exceed 16, so everything is stored densely
//! and eliminations are plain Gauss-Jordan. With rationals every result is
//! exact; with floats pivots below [`PIVOT_TOL`] (relative to the largest
//! entry) are treated as zero.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{max_abs, Scalar, PIVOT_TOL};

pub type Vector<S> = Vec<S>;

pub fn zeros<S: Scalar>(n: usize) -> Vector<S> {
    vec![S::zero(); n]
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vector<S> {
    let mut v = zeros(n);
    v[i] = S::one();
    v
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], s: &S) -> Vector<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

/// `acc += s * v`
pub fn axpy<S: Scalar>(acc: &mut [S], s: &S, v: &[S]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.clone() + s.clone() * x.clone();
    }
}

pub fn is_zero_vec<S: Scalar>(v: &[S], tol: f64) -> bool {
    v.iter().all(|x| x.is_zero_tol(tol))
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vector<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |r, c| rows[r][c].clone())
    }

    /// Matrix whose columns are the given vectors (of length `n`).
    pub fn from_cols(n: usize, cols: &[Vector<S>]) -> Self {
        Self::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn diagonal(values: &[S]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| if r == c { values[r].clone() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vector<S> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vector<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector<S>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vector<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| dot(&self.data[r * self.cols..(r + 1) * self.cols], v))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: sub(&self.data, &other.data),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: scale(&self.data, s),
        }
    }

    /// `A B - B A`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.data)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        is_zero_vec(&self.data, tol)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_zero_tol(tol)))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Frobenius inner product.
    pub fn frobenius_dot(&self, other: &Self) -> S {
        dot(&self.data, &other.data)
    }

    /// Bilinear form `x^T A y`.
    pub fn bilinear(&self, x: &[S], y: &[S]) -> S {
        dot(x, &self.mul_vec(y))
    }

    fn zero_threshold(&self) -> f64 {
        let scale = self.max_abs().to_f64().max(1.0);
        PIVOT_TOL * scale
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let tol = self.zero_threshold();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // largest magnitude pivot; exact arithmetic only needs nonzero
            let mut best: Option<(usize, S)> = None;
            for r in row..m.rows {
                let a = m[(r, col)].abs();
                if a.is_zero_tol(tol) {
                    continue;
                }
                if best.as_ref().map_or(true, |(_, b)| a > *b) {
                    best = Some((r, a));
                }
            }
            let Some((p, _)) = best else {
                for r in row..m.rows {
                    m[(r, col)] = S::zero();
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = S::one() / m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    m[(r, c)] = m[(r, c)].clone() - factor.clone() * m[(row, c)].clone();
                }
                m[(r, col)] = S::zero();
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, each with a 1 in
    /// its free position.
    pub fn null_space(&self) -> Vec<Vector<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zeros(self.cols);
                v[f] = S::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Unique solution of `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[S]) -> Result<Vector<S>> {
        let inv = self.inverse()?;
        Ok(inv.mul_vec(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Singular(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular(format!("{n}x{n} matrix has rank < {n}")));
        }
        Ok(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let tol = self.zero_threshold();
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = (col..n).max_by(|&a, &b| {
                m[(a, col)]
                    .abs()
                    .partial_cmp(&m[(b, col)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            }) else {
                return S::zero();
            };
            if m[(p, col)].is_zero_tol(tol) {
                return S::zero();
            }
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                let f = m[(r, col)].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    m[(r, c)] = m[(r, c)].clone() - f.clone() * m[(col, c)].clone();
                }
            }
        }
        det
    }

    /// Positive definiteness by symmetric elimination: every pivot must be
    /// strictly positive.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        if !self.is_symmetric(tol) {
            return false;
        }
        let n = self.rows;
        let mut m = self.clone();
        for k in 0..n {
            let p = m[(k, k)].clone();
            if p <= S::zero() || p.is_zero_tol(tol) {
                return false;
            }
            for r in k + 1..n {
                let f = m[(r, k)].clone() / p.clone();
                for c in k..n {
                    m[(r, c)] = m[(r, c)].clone() - f.clone() * m[(k, c)].clone();
                }
            }
        }
        true
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// A linear subspace of `S^n` held by a linearly independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the given vectors. Dependent vectors are dropped, keeping the
    /// earliest ones, so the basis order follows the input order.
    pub fn span(ambient: usize, vectors: &[Vector<S>]) -> Result<Self> {
        let mut basis: Vec<Vector<S>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
            let mut trial = basis.clone();
            trial.push(v.clone());
            if Matrix::from_rows(&trial).rank() == trial.len() {
                basis = trial;
            }
        }
        Ok(Self { ambient, basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
        }
    }

    /// Span of the listed coordinate axes.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Self {
        Self {
            ambient,
            basis: axes.iter().map(|&i| unit(ambient, i)).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    /// `n x dim` matrix whose columns are the basis.
    pub fn basis_matrix(&self) -> Matrix<S> {
        Matrix::from_cols(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        if is_zero_vec(v, 0.0) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(&rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }

    /// Orthogonal complement with respect to the Gram matrix `gram`.
    pub fn orthogonal_complement(&self, gram: &Matrix<S>) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        // x with <b, x>_g = 0 for every basis vector b
        let rows: Vec<Vector<S>> = self.basis.iter().map(|b| gram.transpose().mul_vec(b)).collect();
        let ns = Matrix::from_rows(&rows).null_space();
        Self {
            ambient: self.ambient,
            basis: ns,
        }
    }

    /// Orthogonal complement of `self` inside `outer`, with respect to `gram`.
    pub fn complement_within(&self, outer: &Self, gram: &Matrix<S>) -> Result<Self> {
        // parametrize outer = B y; require <b_i, B y> = 0
        let b = outer.basis_matrix();
        let rows: Vec<Vector<S>> = self
            .basis
            .iter()
            .map(|v| b.transpose().mul_vec(&gram.mul_vec(v)))
            .collect();
        if rows.is_empty() {
            return Ok(outer.clone());
        }
        let coeffs = Matrix::from_rows(&rows).null_space();
        let vecs: Vec<Vector<S>> = coeffs.iter().map(|y| b.mul_vec(y)).collect();
        Self::span(self.ambient, &vecs)
    }

    /// Coordinates of `v` in this basis; errors when `v` is outside.
    pub fn coordinates(&self, v: &[S]) -> Result<Vector<S>> {
        let b = self.basis_matrix();
        let k = self.dim();
        let aug = Matrix::from_fn(self.ambient, k + 1, |r, c| {
            if c < k {
                b[(r, c)].clone()
            } else {
                v[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.contains(&k) {
            return Err(Error::Precondition("vector is not in the subspace".into()));
        }
        let mut out = zeros(k);
        for (i, &p) in pivots.iter().enumerate() {
            out[p] = red[(i, k)].clone();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn inverse_and_determinant_exact() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert_eq!(a.determinant(), q(18));
        let singular = qm(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
        assert_eq!(singular.determinant(), q(0));
    }

    #[test]
    fn null_space_spans_kernel() {
        let a = qm(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let ns = a.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&a.mul_vec(v), 0.0));
        }
    }

    #[test]
    fn subspace_membership_and_complements() {
        let s = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(2), q(2), q(0)]]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[q(-3), q(-3), q(0)]));
        assert!(!s.contains(&[q(1), q(0), q(0)]));
        let comp = s.orthogonal_complement(&Matrix::identity(3));
        assert_eq!(comp.dim(), 2);
        for v in comp.basis() {
            assert_eq!(dot(v, &[q(1), q(1), q(0)]), q(0));
        }
        let outer = Subspace::coordinate(3, &[0, 1]);
        let inside = s.complement_within(&outer, &Matrix::identity(3)).unwrap();
        assert_eq!(inside.dim(), 1);
        assert!(inside.contains(&[q(1), q(-1), q(0)]));
        assert_eq!(s.coordinates(&[q(4), q(4), q(0)]).unwrap(), vec![q(4)]);
        assert!(s.coordinates(&[q(0), q(0), q(1)]).is_err());
    }

    #[test]
    fn positive_definiteness() {
        assert!(qm(&[&[2, 1], &[1, 2]]).is_positive_definite(0.0));
        assert!(!qm(&[&[1, 2], &[2, 1]]).is_positive_definite(0.0));
        assert!(!qm(&[&[1, 1], &[0, 1]]).is_positive_definite(0.0));
    }

    #[test]
    fn float_rank_uses_threshold() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0 + 1e-14]]);
        assert_eq!(a.rank(), 1);
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.5]]);
        assert_eq!(b.rank(), 2);
    }
}
