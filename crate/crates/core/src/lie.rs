//! Finite-dimensional Lie algebras given by structure constants, their
//! derived flags and Carnot gradings.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, is_zero_vec, zeros, Matrix, Subspace, Vector};
use crate::scalar::{Scalar, DEFAULT_TOL};
use crate::structure::OrthonormalFrame;
use crate::tensor::Tensor3;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

/// A Lie algebra with basis `e_1..e_n` and `[e_i, e_j] = sum_k c^k_ij e_k`.
///
/// Indices are zero-based in the API; reports and files use one-based labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<S> {
    name: String,
    dim: usize,
    /// `c[(i, j, k)] = c^k_ij`
    c: Tensor3<S>,
    labels: Vec<String>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds and validates the algebra (antisymmetry and Jacobi; `tol` is
    /// only used in float mode).
    pub fn new(name: impl Into<String>, c: Tensor3<S>, tol: f64) -> Result<Self> {
        let algebra = Self::new_unchecked(name, c)?;
        algebra.validate(tol)?;
        Ok(algebra)
    }

    /// Builds without the antisymmetry/Jacobi checks (dimension is still
    /// checked).
    pub fn new_unchecked(name: impl Into<String>, c: Tensor3<S>) -> Result<Self> {
        let [a, b, d] = c.dims();
        if a != b || b != d {
            return Err(Error::InvalidAlgebra(format!(
                "structure tensor must be n x n x n, got {a} x {b} x {d}"
            )));
        }
        if !(MIN_DIM..=MAX_DIM).contains(&a) {
            return Err(Error::InvalidAlgebra(format!(
                "dimension {a} outside {MIN_DIM}..={MAX_DIM}"
            )));
        }
        Ok(Self {
            name: name.into(),
            dim: a,
            c,
            labels: (1..=a).map(|i| format!("e{i}")).collect(),
        })
    }

    /// Builds from brackets `[e_i, e_j] = sum coeff e_k` listed for `i < j`
    /// (zero-based); the antisymmetric completion is implied.
    pub fn from_brackets(
        name: impl Into<String>,
        dim: usize,
        brackets: &[(usize, usize, Vec<(usize, S)>)],
    ) -> Result<Self> {
        let mut c: Tensor3<S> = Tensor3::cube(dim);
        for (i, j, terms) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || i == j {
                return Err(Error::InvalidAlgebra(format!("bad bracket indices ({i}, {j})")));
            }
            for (k, coeff) in terms {
                if *k >= dim {
                    return Err(Error::InvalidAlgebra(format!("bracket target index {k} >= {dim}")));
                }
                c[(i, j, *k)] = c[(i, j, *k)].clone() + coeff.clone();
                c[(j, i, *k)] = c[(j, i, *k)].clone() - coeff.clone();
            }
        }
        Self::new(name, c, DEFAULT_TOL)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_tensor(&self) -> &Tensor3<S> {
        &self.c
    }

    /// `c^k_ij`
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[(i, j, k)]
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = self.c[(i, j, k)].clone() + self.c[(j, i, k)].clone();
                    if !s.is_zero_tol(tol) {
                        return Err(Error::InvalidAlgebra(format!(
                            "{}: antisymmetry fails at c^{}_{}{}",
                            self.name,
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let defect = self.jacobi_defect();
        if !defect.is_zero_tol(tol) {
            return Err(Error::InvalidAlgebra(format!(
                "{}: Jacobi identity fails (defect {defect})",
                self.name
            )));
        }
        Ok(())
    }

    fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vector<S> {
        let n = self.dim;
        let mut out = zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                axpy(&mut out, &w, &self.c.fiber(i, j));
            }
        }
        out
    }

    /// `[e_i, e_j]` as a vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector<S> {
        self.c.fiber(i, j)
    }

    /// `max_{i,j,k} || [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] ||_inf`
    pub fn jacobi_defect(&self) -> S {
        let n = self.dim;
        let mut worst = S::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut sum = zeros(n);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.basis_bracket(b, c);
                        let outer = self.bracket_unchecked(&crate::linalg::unit(n, a), &inner);
                        axpy(&mut sum, &S::one(), &outer);
                    }
                    let m = crate::scalar::max_abs(&sum);
                    if m > worst {
                        worst = m;
                    }
                }
            }
        }
        worst
    }

    /// Matrix of `ad u = [u, .]`.
    pub fn ad_matrix(&self, u: &[S]) -> Result<Matrix<S>> {
        self.check_len(u)?;
        let n = self.dim;
        let cols: Vec<Vector<S>> = (0..n)
            .map(|j| self.bracket_unchecked(u, &crate::linalg::unit(n, j)))
            .collect();
        Ok(Matrix::from_cols(n, &cols))
    }

    /// `span{[x, y] : x in a, y in b}`
    pub fn bracket_space(&self, a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
        let mut vecs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let v = self.bracket_unchecked(x, y);
                if !is_zero_vec(&v, 0.0) {
                    vecs.push(v);
                }
            }
        }
        Subspace::span(self.dim, &vecs).expect("bracket vectors have ambient length")
    }

    /// `D_{i+1} = D_i + [D_i, D_i]` until the dimension stops growing.
    pub fn derived_flag(&self, d: &Subspace<S>) -> Flag<S> {
        let mut subspaces = vec![d.clone()];
        let mut growth = vec![d.dim()];
        loop {
            let last = subspaces.last().expect("nonempty");
            if last.dim() == self.dim {
                break;
            }
            let next = last
                .sum(&self.bracket_space(last, last))
                .expect("same ambient dimension");
            if next.dim() == last.dim() {
                // stalled below the full algebra; record the repeat
                growth.push(next.dim());
                break;
            }
            growth.push(next.dim());
            subspaces.push(next);
        }
        let generating = subspaces.last().map_or(false, |s| s.dim() == self.dim);
        Flag {
            r: subspaces.len() - 1,
            subspaces,
            growth_vector: growth,
            generating,
        }
    }

    /// Lower central series `g, [g,g], [g,[g,g]], ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace<S>> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.bracket_space(&full, last);
            if next.dim() == last.dim() {
                break;
            }
            let done = next.dim() == 0;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().map_or(false, |s| s.dim() == 0)
    }

    pub fn is_abelian(&self) -> bool {
        self.c.as_slice().iter().all(|x| x.is_zero_tol(DEFAULT_TOL))
    }

    /// `[g, g]`
    pub fn derived_algebra(&self) -> Subspace<S> {
        let full = Subspace::full(self.dim);
        self.bracket_space(&full, &full)
    }

    /// Layers `g_1 = V`, `g_k = D_{k-1} (-) D_{k-2}` (orthogonal complement in
    /// the flag under `gram`, identity by default), checked against
    /// `[g_a, g_b] in g_{a+b}`.
    pub fn carnot_grading(
        &self,
        v: &Subspace<S>,
        gram: Option<&Matrix<S>>,
    ) -> std::result::Result<Grading<S>, GradingFailure> {
        let flag = self.derived_flag(v);
        if !flag.generating {
            return Err(GradingFailure::NotBracketGenerating(flag.growth_vector));
        }
        if !self.is_nilpotent() {
            return Err(GradingFailure::NotNilpotent);
        }
        let identity = Matrix::identity(self.dim);
        let gram = gram.unwrap_or(&identity);
        let mut layers = vec![v.clone()];
        for w in flag.subspaces.windows(2) {
            let layer = w[0]
                .complement_within(&w[1], gram)
                .expect("flag subspaces share the ambient space");
            layers.push(layer);
        }
        let step = layers.len();
        for a in 0..step {
            for b in a..step {
                let br = self.bracket_space(&layers[a], &layers[b]);
                let target = if a + b + 1 < step {
                    layers[a + b + 1].clone()
                } else {
                    Subspace::zero(self.dim)
                };
                if !target.contains_subspace(&br) {
                    return Err(GradingFailure::IncompatibleLayers { a: a + 1, b: b + 1 });
                }
            }
        }
        Ok(Grading { layers, step })
    }

    /// `c_ijk = <[f_i, f_j], f_k>` in an orthonormal frame.
    pub fn structure_constants_metric(
        &self,
        frame: &OrthonormalFrame<S>,
        gram: &Matrix<S>,
        tol: f64,
    ) -> Result<Tensor3<S>> {
        frame.check_orthonormal(gram, tol)?;
        let n = self.dim;
        let f = frame.vectors();
        let gf: Vec<Vector<S>> = f.iter().map(|v| gram.mul_vec(v)).collect();
        let mut out = Tensor3::cube(n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let b = self.bracket_unchecked(&f[i], &f[j]);
                for k in 0..n {
                    out[(i, j, k)] = dot(&b, &gf[k]);
                }
            }
        }
        Ok(out)
    }

    /// The same algebra expressed in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.rows(),
            });
        }
        let inv = p.inverse()?;
        let cols = p.columns();
        let mut c = Tensor3::cube(n);
        for a in 0..n {
            for b in 0..n {
                let v = inv.mul_vec(&self.bracket_unchecked(&cols[a], &cols[b]));
                for k in 0..n {
                    c[(a, b, k)] = v[k].clone();
                }
            }
        }
        Ok(Self {
            name: self.name.clone(),
            dim: n,
            c,
            labels: (1..=n).map(|i| format!("b{i}")).collect(),
        })
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            c: self.c.map(f),
            labels: self.labels.clone(),
        }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map_scalars(Scalar::to_f64)
    }
}

/// Derived flag `D = D_0 < D_1 < ... < D_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag<S> {
    /// Strictly increasing subspaces.
    pub subspaces: Vec<Subspace<S>>,
    /// Dimensions of `subspaces`; a non-generating flag repeats its final
    /// dimension once to show where it stalled.
    pub growth_vector: Vec<usize>,
    /// Nonholonomy order (number of strict increases).
    pub r: usize,
    pub generating: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grading<S> {
    pub layers: Vec<Subspace<S>>,
    pub step: usize,
}

impl<S: Scalar> Grading<S> {
    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(Subspace::dim).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GradingFailure {
    #[error("subspace is not bracket-generating (growth {0:?})")]
    NotBracketGenerating(Vec<usize>),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("layer brackets [g_{a}, g_{b}] leave g_(a+b)")]
    IncompatibleLayers { a: usize, b: usize },
}
