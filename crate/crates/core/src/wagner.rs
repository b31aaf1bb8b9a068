//! Schouten tensor and the Wagner recursion for a bracket-generating
//! distribution.
//!
//! Everything is expressed in a flag-adapted basis
//! `B = [D frame | Theta_0 basis | Theta_1 basis | ...]` where the layers
//! `Theta_i = D_i^perp cap D_{i+1}` are mutually orthogonal. Each `D_i` is
//! then a coordinate prefix of length `n_i`, `H_i` keeps the first `n_i`
//! coordinates and `V_i` the rest, and `theta_i` is the identity on the
//! `Theta_i` block. The layer bases are not normalized, so exact inputs stay
//! exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::Flag;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::Scalar;
use crate::structure::SubRiemannianStructure;
use crate::tensor::{Tensor3, Tensor4};

/// How `O_[X O_Y] Z` is alternated in the curvature step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternation {
    /// `O_X O_Y - O_Y O_X`
    #[default]
    Difference,
    /// `(O_X O_Y - O_Y O_X) / 2`
    Half,
}

/// Index pairs `(p, q)`, `p < q < k`, in lexicographic order; the wedge
/// basis `b_p ^ b_q` of `Lambda^2` of a `k`-dimensional space.
pub fn wedge_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for p in 0..k {
        for q in p + 1..k {
            out.push((p, q));
        }
    }
    out
}

/// Gram matrix on the wedge basis:
/// `<u1^v1, u2^v2> = <u1,u2><v1,v2> - <u1,v2><v1,u2>`.
pub fn wedge_gram<S: Scalar>(gram: &Matrix<S>) -> Matrix<S> {
    let pairs = wedge_pairs(gram.rows());
    Matrix::from_fn(pairs.len(), pairs.len(), |a, b| {
        let (p, q) = pairs[a];
        let (r, s) = pairs[b];
        gram[(p, r)].clone() * gram[(q, s)].clone() - gram[(p, s)].clone() * gram[(q, r)].clone()
    })
}

/// `|u ^ v|^2` under `gram`.
pub fn wedge_norm2<S: Scalar>(gram: &Matrix<S>, u: &[S], v: &[S]) -> S {
    let uu = gram.bilinear(u, u);
    let vv = gram.bilinear(v, v);
    let uv = gram.bilinear(u, v);
    uu * vv - uv.clone() * uv
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlagDecomposition<S> {
    pub flag: Flag<S>,
    /// The adapted basis `B`, ambient coordinates.
    pub basis: Vec<Vector<S>>,
    /// `n_i = dim D_i`, `i = 0..=r`.
    pub dims: Vec<usize>,
    pub thetas: Vec<Subspace<S>>,
    /// Structure constants in `B`: `[b_p, b_q] = sum_k c[(p, q, k)] b_k`.
    pub structure: Tensor3<S>,
    /// `delta_i`: rows index `Theta_i` coordinates, columns the wedge pairs
    /// of `D_i`.
    pub delta: Vec<Matrix<S>>,
    /// `pi_i = [0 | I]`, `D_{i+1} -> Theta_i` coordinates.
    pub pi: Vec<Matrix<S>>,
    /// `theta_i = [0 ; I]`, right inverse of `pi_i`.
    pub theta: Vec<Matrix<S>>,
    /// Wedge Gram of `{.,.}` on `D_i`.
    pub wedge_grams: Vec<Matrix<S>>,
    /// Gram of `{.,.}` on `Theta_i`.
    pub vertical_gram: Vec<Matrix<S>>,
    /// `mu_i`: rows index wedge pairs of `D_i`, columns `D_{i+1}`.
    pub mu: Vec<Matrix<S>>,
    /// The canonical metric `{.,.}` on all of `g`, in `B` coordinates.
    pub metric: Matrix<S>,
}

impl<S: Scalar> FlagDecomposition<S> {
    pub fn r(&self) -> usize {
        self.dims.len() - 1
    }

    /// `{.,.}` as a Gram matrix in the algebra basis.
    pub fn ambient_metric(&self) -> Result<Matrix<S>> {
        let n = self.basis.len();
        let binv = Matrix::from_cols(n, &self.basis).inverse()?;
        Ok(binv.transpose().mul(&self.metric).mul(&binv))
    }

    /// `{.,.}` restricted to `D_i`.
    pub fn metric_on(&self, i: usize) -> Matrix<S> {
        let k = self.dims[i];
        Matrix::from_fn(k, k, |a, b| self.metric[(a, b)].clone())
    }
}

/// Builds the decomposition, the canonical metric and the `mu` maps.
pub fn flag_decomposition<S: Scalar>(s: &SubRiemannianStructure<S>) -> Result<FlagDecomposition<S>> {
    let algebra = s.algebra();
    let n = s.n();
    let m = s.m();
    let flag = algebra.derived_flag(s.distribution());
    if !flag.generating {
        return Err(Error::NotBracketGenerating(flag.growth_vector.clone()));
    }
    let frame = s.adapted_frame()?;
    let mut basis: Vec<Vector<S>> = frame.vectors()[..m].to_vec();
    let mut thetas = Vec::new();
    let mut dims = vec![m];
    for w in flag.subspaces.windows(2) {
        let theta = w[0].complement_within(&w[1], s.gram())?;
        basis.extend(theta.basis().iter().cloned());
        dims.push(basis.len());
        thetas.push(theta);
    }
    if basis.len() != n {
        return Err(Error::Inconsistency(format!(
            "flag layers span {} of {n} dimensions",
            basis.len()
        )));
    }
    let bmat = Matrix::from_cols(n, &basis);
    let binv = bmat.inverse()?;
    let mut structure = Tensor3::cube(n);
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let v = binv.mul_vec(&algebra.bracket(&basis[p], &basis[q])?);
            for (k, x) in v.into_iter().enumerate() {
                structure[(p, q, k)] = x;
            }
        }
    }

    let r = dims.len() - 1;
    let mut metric = Matrix::zeros(n, n);
    for a in 0..m {
        metric[(a, a)] = S::one();
    }
    let mut delta = Vec::with_capacity(r);
    let mut pi = Vec::with_capacity(r);
    let mut theta = Vec::with_capacity(r);
    let mut wedge_grams = Vec::with_capacity(r);
    let mut vertical_gram = Vec::with_capacity(r);
    let mut mu = Vec::with_capacity(r);
    for i in 0..r {
        let (lo, hi) = (dims[i], dims[i + 1]);
        let t = hi - lo;
        let pairs = wedge_pairs(lo);
        let a = Matrix::from_fn(t, pairs.len(), |row, col| {
            let (p, q) = pairs[col];
            structure[(p, q, lo + row)].clone()
        });
        let g_i = Matrix::from_fn(lo, lo, |x, y| metric[(x, y)].clone());
        let gw = wedge_gram(&g_i);
        let gw_inv = gw
            .inverse()
            .map_err(|_| Error::Inconsistency(format!("wedge Gram of D_{i} is singular")))?;
        let m_inv = a.mul(&gw_inv).mul(&a.transpose());
        let m_i = m_inv.inverse().map_err(|_| {
            Error::Inconsistency(format!("canonical metric composite on Theta_{i} is singular"))
        })?;
        for x in 0..t {
            for y in 0..t {
                metric[(lo + x, lo + y)] = m_i[(x, y)].clone();
            }
        }
        let pi_i = Matrix::from_fn(t, hi, |row, col| if col == lo + row { S::one() } else { S::zero() });
        let theta_i = pi_i.transpose();
        let mu_i = gw_inv.mul(&a.transpose()).mul(&m_i).mul(&pi_i);
        delta.push(a);
        pi.push(pi_i);
        theta.push(theta_i);
        wedge_grams.push(gw);
        vertical_gram.push(m_i);
        mu.push(mu_i);
    }
    Ok(FlagDecomposition {
        flag,
        basis,
        dims,
        thetas,
        structure,
        delta,
        pi,
        theta,
        wedge_grams,
        vertical_gram,
        mu,
        metric,
    })
}

/// Stage connection `nabla^(i) = H_i nabla^LC` on `(D_i, {.,.})`:
/// `out[(p, q, s)]` is the `s` coordinate of `nabla_{b_p} b_q`, all indices
/// below `n_i`.
pub fn stage_connection<S: Scalar>(f: &FlagDecomposition<S>, i: usize) -> Result<Tensor3<S>> {
    let k = f.dims[i];
    let g = f.metric_on(i);
    let ginv = g.inverse()?;
    let c = &f.structure;
    // <[b_p, b_q], b_t> with the bracket projected to D_i
    let lower = |p: usize, q: usize, t: usize| -> S {
        (0..k).fold(S::zero(), |acc, u| acc + c[(p, q, u)].clone() * g[(u, t)].clone())
    };
    let half = S::half();
    let mut out = Tensor3::cube(k);
    for p in 0..k {
        for q in 0..k {
            let kos: Vec<S> = (0..k)
                .map(|t| half.clone() * (lower(p, q, t) - lower(q, t, p) + lower(t, p, q)))
                .collect();
            for sidx in 0..k {
                out[(p, q, sidx)] = (0..k).fold(S::zero(), |acc, t| acc + ginv[(sidx, t)].clone() * kos[t].clone());
            }
        }
    }
    Ok(out)
}

/// Schouten tensor on `D`:
/// `K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{H[X,Y]} Z - H[V[X,Y], Z]`,
/// stored as `K[(a, b, c, d)]` = `d` coordinate of `K(b_a, b_b) b_c`.
pub fn schouten_tensor<S: Scalar>(f: &FlagDecomposition<S>) -> Result<Tensor4<S>> {
    let m = f.dims[0];
    let n = f.structure.dims()[0];
    let nab = stage_connection(f, 0)?;
    let c = &f.structure;
    let mut k = Tensor4::zeros([m; 4]);
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            for z in 0..m {
                for d in 0..m {
                    let mut s = S::zero();
                    for t in 0..m {
                        s = s + nab[(b, z, t)].clone() * nab[(a, t, d)].clone()
                            - nab[(a, z, t)].clone() * nab[(b, t, d)].clone()
                            - c[(a, b, t)].clone() * nab[(t, z, d)].clone();
                    }
                    for v in m..n {
                        s = s - c[(a, b, v)].clone() * c[(v, z, d)].clone();
                    }
                    k[(a, b, z, d)] = s;
                }
            }
        }
    }
    Ok(k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WagnerStage<S> {
    /// Stage index `i >= 1`.
    pub stage: usize,
    /// `O^(i)`: `connection[(x, y, z)]` is the `z` coordinate of
    /// `O_{b_x} b_y`, `x < n_i`, `y, z < n_{i-1}`.
    pub connection: Tensor3<S>,
    /// `K^(i)`: `tensor[(p, q, z, w)]` is the `w` coordinate of
    /// `K(b_p ^ b_q)(b_z)`, `p, q < n_i`, `z, w < n_{i-1}`.
    pub tensor: Tensor4<S>,
}

/// A place where a stage formula received an argument outside its stated
/// domain and the offending part was projected away.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainViolation {
    pub stage: usize,
    pub term: String,
    /// Number of basis evaluations affected.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WagnerResult<S> {
    pub decomposition: FlagDecomposition<S>,
    pub schouten: Tensor4<S>,
    pub stages: Vec<WagnerStage<S>>,
    pub alternation: Alternation,
    pub domain_violations: Vec<DomainViolation>,
}

impl<S: Scalar> WagnerResult<S> {
    /// The Wagner curvature tensor `K^(r)`.
    pub fn final_tensor(&self) -> &Tensor4<S> {
        &self.stages.last().expect("r >= 1").tensor
    }

    /// Whether the Wagner tensor vanishes.
    pub fn absolute_parallelism(&self, tol: f64) -> bool {
        self.final_tensor().is_zero(tol)
    }
}

/// Runs the full recursion `K^(0) -> K^(1) -> ... -> K^(r)`.
pub fn wagner<S: Scalar>(s: &SubRiemannianStructure<S>, alternation: Alternation) -> Result<WagnerResult<S>> {
    let tol = s.tol();
    let f = flag_decomposition(s)?;
    let r = f.r();
    if r == 0 {
        return Err(Error::Precondition(
            "distribution is the whole algebra; the recursion is empty".into(),
        ));
    }
    let n = f.structure.dims()[0];
    let c = f.structure.clone();
    let schouten = schouten_tensor(&f)?;
    let mut stages: Vec<WagnerStage<S>> = Vec::with_capacity(r);
    let mut violations = Vec::new();
    let factor = match alternation {
        Alternation::Difference => S::one(),
        Alternation::Half => S::half(),
    };
    for i in 0..r {
        let (lo, hi) = (f.dims[i], f.dims[i + 1]);
        // K^(i) acts on D_{i-1}; for i = 0 that is D itself
        let (prev_tensor, prev_dim) = if i == 0 {
            (&schouten, lo)
        } else {
            (&stages[i - 1].tensor, f.dims[i - 1])
        };
        let nab = stage_connection(&f, i)?;
        let pairs = wedge_pairs(lo);
        let mu = &f.mu[i];
        let mut conn = Tensor3::zeros(hi, lo, lo);
        let mut k_domain = 0usize;
        let mut bracket_dropped = 0usize;
        for x in 0..hi {
            for y in 0..lo {
                let mut val = vec![S::zero(); lo];
                if x < lo {
                    for (zz, v) in val.iter_mut().enumerate() {
                        *v = nab[(x, y, zz)].clone();
                    }
                } else {
                    for (zz, v) in val.iter_mut().enumerate() {
                        *v = c[(x, y, zz)].clone();
                    }
                    if (lo..n).any(|zz| !c[(x, y, zz)].is_zero_tol(tol)) {
                        bracket_dropped += 1;
                    }
                }
                let mu_x: Vec<S> = (0..pairs.len()).map(|pq| mu[(pq, x)].clone()).collect();
                if mu_x.iter().any(|v| !v.is_zero_tol(tol)) {
                    if y < prev_dim {
                        for (pq, &(p, q)) in pairs.iter().enumerate() {
                            if mu_x[pq].is_zero() {
                                continue;
                            }
                            for (w, v) in val.iter_mut().enumerate().take(prev_dim) {
                                *v = v.clone() + mu_x[pq].clone() * prev_tensor[(p, q, y, w)].clone();
                            }
                        }
                    } else {
                        k_domain += 1;
                    }
                }
                for (zz, v) in val.into_iter().enumerate() {
                    conn[(x, y, zz)] = v;
                }
            }
        }
        if k_domain > 0 {
            violations.push(DomainViolation {
                stage: i + 1,
                term: format!("K^({i})(mu_{i} X) applied to Y outside D_{}", i as isize - 1),
                count: k_domain,
            });
        }
        if bracket_dropped > 0 {
            violations.push(DomainViolation {
                stage: i + 1,
                term: format!("[V_{i} X, Y] leaves D_{i}; projected by H_{i}"),
                count: bracket_dropped,
            });
        }

        let mut kt = Tensor4::zeros([hi, hi, lo, lo]);
        for x1 in 0..hi {
            for x2 in 0..hi {
                if x1 == x2 {
                    continue;
                }
                for z in 0..lo {
                    for w in 0..lo {
                        let mut alt = S::zero();
                        for sidx in 0..lo {
                            alt = alt + conn[(x2, z, sidx)].clone() * conn[(x1, sidx, w)].clone()
                                - conn[(x1, z, sidx)].clone() * conn[(x2, sidx, w)].clone();
                        }
                        let mut v = factor.clone() * alt;
                        for u in 0..hi {
                            v = v - c[(x1, x2, u)].clone() * conn[(u, z, w)].clone();
                        }
                        for vv in lo..n {
                            v = v - c[(x1, x2, vv)].clone() * c[(vv, z, w)].clone();
                        }
                        kt[(x1, x2, z, w)] = v;
                    }
                }
            }
        }
        stages.push(WagnerStage {
            stage: i + 1,
            connection: conn,
            tensor: kt,
        });
    }
    Ok(WagnerResult {
        decomposition: f,
        schouten,
        stages,
        alternation,
        domain_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::linalg::unit;
    use crate::scalar::{Rational, DEFAULT_TOL};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn structure(a: LieAlgebra<Rational>) -> SubRiemannianStructure<Rational> {
        let n = a.dim();
        SubRiemannianStructure::new("s", a, &[unit(n, 0), unit(n, 1)], None, Matrix::identity(n), DEFAULT_TOL)
            .unwrap()
    }

    fn heis3(lambda: i64) -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets("heis3", 3, &[(0, 1, vec![(2, q(lambda))])]).unwrap()
    }

    fn so3() -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets(
            "so3",
            3,
            &[(0, 1, vec![(2, q(1))]), (1, 2, vec![(0, q(1))]), (0, 2, vec![(1, q(-1))])],
        )
        .unwrap()
    }

    #[test]
    fn wedge_rule() {
        let g = Matrix::<Rational>::identity(3);
        let gw = wedge_gram(&g);
        assert_eq!(gw, Matrix::identity(3));
        let u = vec![q(1), q(1), q(0)];
        let v = vec![q(0), q(1), q(0)];
        assert_eq!(wedge_norm2(&g, &u, &v), q(1));
    }

    #[test]
    fn heis3_decomposition() {
        let f = flag_decomposition(&structure(heis3(1))).unwrap();
        assert_eq!(f.dims, vec![2, 3]);
        assert!(f.thetas[0].same_as(&Subspace::coordinate(3, &[2])));
        assert_eq!(f.delta[0], Matrix::from_rows(&[vec![q(1)]]));
        assert_eq!(f.vertical_gram[0], Matrix::from_rows(&[vec![q(1)]]));
        // mu_0(e3) = e1 ^ e2, mu_0(e1) = 0
        assert_eq!(f.mu[0][(0, 2)], q(1));
        assert_eq!(f.mu[0][(0, 0)], q(0));

        let f = flag_decomposition(&structure(heis3(2))).unwrap();
        let g = f.ambient_metric().unwrap();
        assert_eq!(g[(2, 2)], Rational::from_ratio(1, 4));
        assert_eq!(g[(0, 0)], q(1));
    }

    #[test]
    fn heis3_is_parallel() {
        let w = wagner(&structure(heis3(1)), Alternation::Difference).unwrap();
        assert!(w.schouten.is_zero(0.0));
        assert_eq!(w.stages.len(), 1);
        assert!(w.stages[0].connection.max_abs() == q(0));
        assert!(w.absolute_parallelism(0.0));
    }

    #[test]
    fn so3_is_not_parallel() {
        let w = wagner(&structure(so3()), Alternation::Difference).unwrap();
        assert_eq!(w.schouten[(0, 1, 0, 1)], q(-1));
        assert_eq!(w.schouten[(0, 1, 1, 0)], q(1));
        assert!(w.stages[0].connection.max_abs() == q(0));
        let k = w.final_tensor();
        assert_eq!(k.dims(), [3, 3, 2, 2]);
        assert_eq!(k[(0, 1, 0, 1)], q(-1));
        assert_eq!(k[(0, 1, 1, 0)], q(1));
        let nonzero = k.as_slice().iter().filter(|x| **x != q(0)).count();
        // the (1,2) entries and their antisymmetric partners
        assert_eq!(nonzero, 4);
        assert!(!w.absolute_parallelism(0.0));
        let half = wagner(&structure(so3()), Alternation::Half).unwrap();
        assert_eq!(half.final_tensor()[(0, 1, 0, 1)], q(-1));
    }

    #[test]
    fn engel_layers() {
        let a = LieAlgebra::from_brackets("engel", 4, &[(0, 1, vec![(2, q(1))]), (0, 2, vec![(3, q(1))])])
            .unwrap();
        let w = wagner(&structure(a), Alternation::Difference).unwrap();
        assert_eq!(w.decomposition.dims, vec![2, 3, 4]);
        assert_eq!(w.stages[0].tensor.dims(), [3, 3, 2, 2]);
        assert_eq!(w.stages[1].tensor.dims(), [4, 4, 3, 3]);
        // delta_i mu_i is the identity on each layer
        for i in 0..2 {
            let f = &w.decomposition;
            let prod = f.delta[i].mul(&f.mu[i]).mul(&f.theta[i]);
            assert_eq!(prod, Matrix::identity(1));
        }
    }

    #[test]
    fn rejects_trivial_flags() {
        let a = LieAlgebra::<Rational>::new("r2", Tensor3::cube(2), 0.0).unwrap();
        let s = structure(a);
        assert!(matches!(wagner(&s, Alternation::Difference), Err(Error::Precondition(_))));
        let a = LieAlgebra::<Rational>::new("r3", Tensor3::cube(3), 0.0).unwrap();
        assert!(matches!(
            wagner(&structure(a), Alternation::Difference),
            Err(Error::NotBracketGenerating(_))
        ));
    }
}
