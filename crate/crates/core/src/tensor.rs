use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::scalar::{max_abs, Scalar};

/// Dense three-index array.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<S> {
    dims: [usize; 3],
    data: Vec<S>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn zeros(d0: usize, d1: usize, d2: usize) -> Self {
        Self {
            dims: [d0, d1, d2],
            data: vec![S::zero(); d0 * d1 * d2],
        }
    }

    pub fn cube(n: usize) -> Self {
        Self::zeros(n, n, n)
    }

    pub fn from_fn(dims: [usize; 3], f: impl Fn(usize, usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dims, data }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    /// The vector `t[(i, j, ..)]`.
    pub fn fiber(&self, i: usize, j: usize) -> Vec<S> {
        let n = self.dims[2];
        let start = (i * self.dims[1] + j) * n;
        self.data[start..start + n].to_vec()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor3<T> {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .fold(S::zero(), |acc, (a, b)| {
                let d = (a.clone() - b.clone()).abs();
                if d > acc {
                    d
                } else {
                    acc
                }
            })
    }

    /// Entries as nested arrays of report strings.
    pub fn to_nested_strings(&self) -> Vec<Vec<Vec<String>>> {
        (0..self.dims[0])
            .map(|i| {
                (0..self.dims[1])
                    .map(|j| self.fiber(i, j).iter().map(Scalar::to_report_string).collect())
                    .collect()
            })
            .collect()
    }

    /// Nonzero entries with 1-based indices.
    pub fn nonzero_entries(&self, tol: f64) -> Vec<TensorEntry> {
        let mut out = Vec::new();
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = &self[(i, j, k)];
                    if !v.is_zero_tol(tol) {
                        out.push(TensorEntry {
                            index: vec![i + 1, j + 1, k + 1],
                            value: v.to_report_string(),
                        });
                    }
                }
            }
        }
        out
    }
}

impl<S> Index<(usize, usize, usize)> for Tensor3<S> {
    type Output = S;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &S {
        &self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

impl<S> IndexMut<(usize, usize, usize)> for Tensor3<S> {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut S {
        &mut self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

/// Dense four-index array.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<S> {
    dims: [usize; 4],
    data: Vec<S>,
}

impl<S: Scalar> Tensor4<S> {
    pub fn zeros(dims: [usize; 4]) -> Self {
        Self {
            dims,
            data: vec![S::zero(); dims.iter().product()],
        }
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn max_abs(&self) -> S {
        max_abs(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .fold(S::zero(), |acc, (a, b)| {
                let d = (a.clone() - b.clone()).abs();
                if d > acc {
                    d
                } else {
                    acc
                }
            })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|v| v.is_zero_tol(tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor4<T> {
        Tensor4 {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_nested_strings(&self) -> Vec<Vec<Vec<Vec<String>>>> {
        let [a, b, c, d] = self.dims;
        (0..a)
            .map(|i| {
                (0..b)
                    .map(|j| {
                        (0..c)
                            .map(|k| (0..d).map(|l| self[(i, j, k, l)].to_report_string()).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

impl<S> Index<(usize, usize, usize, usize)> for Tensor4<S> {
    type Output = S;

    fn index(&self, (i, j, k, l): (usize, usize, usize, usize)) -> &S {
        let [_, b, c, d] = self.dims;
        &self.data[((i * b + j) * c + k) * d + l]
    }
}

impl<S> IndexMut<(usize, usize, usize, usize)> for Tensor4<S> {
    fn index_mut(&mut self, (i, j, k, l): (usize, usize, usize, usize)) -> &mut S {
        let [_, b, c, d] = self.dims;
        &mut self.data[((i * b + j) * c + k) * d + l]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorEntry {
    pub index: Vec<usize>,
    pub value: String,
}
