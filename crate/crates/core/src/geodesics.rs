//! Normal Pontryagin extremals on matrix Lie groups, the coadjoint action
//! and the search for abnormal covectors.
//!
//! Covectors are coordinate vectors against the algebra basis:
//! `xi(v) = sum_k xi_k v_k`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{dot, Matrix, Vector};
use crate::scalar::Scalar;
use crate::structure::SubRiemannianStructure;

/// A faithful-enough matrix representation `e_k -> B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModel<S> {
    rep_dim: usize,
    basis: Vec<Matrix<S>>,
}

impl<S: Scalar> MatrixModel<S> {
    /// Checks that `[B_i, B_j] = sum_k c^k_ij B_k` and that the `B_k` are
    /// linearly independent.
    pub fn new(algebra: &LieAlgebra<S>, basis: Vec<Matrix<S>>, tol: f64) -> Result<Self> {
        let n = algebra.dim();
        if basis.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: basis.len(),
            });
        }
        let rep_dim = basis[0].rows();
        if basis.iter().any(|b| b.rows() != rep_dim || b.cols() != rep_dim) {
            return Err(Error::InvalidStructure("model matrices must share one square size".into()));
        }
        let model = Self { rep_dim, basis };
        for i in 0..n {
            for j in i + 1..n {
                let lhs = model.basis[i].commutator(&model.basis[j]);
                let rhs = model.element(&algebra.basis_bracket(i, j));
                let d = lhs.sub(&rhs).max_abs();
                if !d.is_zero_tol(tol) {
                    return Err(Error::InvalidStructure(format!(
                        "model commutator [B{}, B{}] differs from the bracket by {d}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let flat: Vec<Vector<S>> = model.basis.iter().map(|b| b.as_slice().to_vec()).collect();
        if Matrix::from_rows(&flat).rank() != n {
            return Err(Error::InvalidStructure("model matrices are linearly dependent".into()));
        }
        Ok(model)
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn basis(&self) -> &[Matrix<S>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum_k v_k B_k`
    pub fn element(&self, v: &[S]) -> Matrix<S> {
        let mut out = Matrix::zeros(self.rep_dim, self.rep_dim);
        for (x, b) in v.iter().zip(&self.basis) {
            if !x.is_zero() {
                out = out.add(&b.scale(x));
            }
        }
        out
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> MatrixModel<T> {
        MatrixModel {
            rep_dim: self.rep_dim,
            basis: self.basis.iter().map(|b| b.map(f)).collect(),
        }
    }

    pub fn to_f64(&self) -> MatrixModel<f64> {
        self.map_scalars(Scalar::to_f64)
    }
}

impl MatrixModel<f64> {
    /// Coordinates of a matrix in the span of the basis (least squares in
    /// the Frobenius inner product).
    pub fn coordinates(&self, a: &Matrix<f64>) -> Result<Vector<f64>> {
        let n = self.dim();
        let gram = Matrix::from_fn(n, n, |i, j| self.basis[i].frobenius_dot(&self.basis[j]));
        let rhs: Vector<f64> = self.basis.iter().map(|b| b.frobenius_dot(a)).collect();
        gram.solve(&rhs)
    }

    /// `Ad(g) v = g B_v g^-1`, in coordinates.
    pub fn ad_group(&self, g: &Matrix<f64>, v: &[f64]) -> Result<Vector<f64>> {
        let ginv = g.inverse()?;
        self.coordinates(&g.mul(&self.element(v)).mul(&ginv))
    }

    /// `(Ad* g xi)(v) = xi(Ad(g)^-1 v)`.
    pub fn ad_star(&self, g: &Matrix<f64>, xi: &[f64]) -> Result<Vector<f64>> {
        let ginv = g.inverse()?;
        let n = self.dim();
        (0..n)
            .map(|j| {
                let e = crate::linalg::unit::<f64>(n, j);
                let w = self.coordinates(&ginv.mul(&self.element(&e)).mul(g))?;
                Ok(dot(xi, &w))
            })
            .collect()
    }

    /// `exp(sum_k v_k B_k)`
    pub fn exp(&self, v: &[f64]) -> Result<Matrix<f64>> {
        expm(&self.element(v))
    }
}

/// Matrix exponential by scaling and squaring with a degree-6 Pade
/// approximant.
pub fn expm(a: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = a.rows();
    let norm = (0..n)
        .map(|r| (0..n).map(|c| a[(r, c)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if !norm.is_finite() {
        return Err(Error::Numeric("non-finite matrix in exp".into()));
    }
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let x = a.scale(&(0.5f64).powi(squarings as i32));
    const Q: usize = 6;
    // c_k = (2q - k)! q! / ((2q)! k! (q - k)!)
    let mut coeffs = [0.0f64; Q + 1];
    coeffs[0] = 1.0;
    for k in 1..=Q {
        coeffs[k] = coeffs[k - 1] * ((Q - k + 1) as f64) / (((2 * Q - k + 1) * k) as f64);
    }
    let id = Matrix::<f64>::identity(n);
    let mut num = id.scale(&coeffs[0]);
    let mut den = id.scale(&coeffs[0]);
    let mut power = id;
    for (k, ck) in coeffs.iter().enumerate().skip(1) {
        power = power.mul(&x);
        num = num.add(&power.scale(ck));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        den = den.add(&power.scale(&(sign * ck)));
    }
    let mut e = den.inverse()?.mul(&num);
    for _ in 0..squarings {
        e = e.mul(&e);
    }
    if e.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(e)
}

/// `(ad*_u xi)(v) = xi([v, u])`
pub fn ad_star_algebra<S: Scalar>(algebra: &LieAlgebra<S>, u: &[S], xi: &[S]) -> Result<Vector<S>> {
    let n = algebra.dim();
    (0..n)
        .map(|j| {
            let e = crate::linalg::unit::<S>(n, j);
            Ok(dot(xi, &algebra.bracket(&e, u)?))
        })
        .collect()
}

/// `sigma = xi([u, v])`
pub fn symplectic_eval<S: Scalar>(algebra: &LieAlgebra<S>, xi: &[S], u: &[S], v: &[S]) -> Result<S> {
    Ok(dot(xi, &algebra.bracket(u, v)?))
}

/// Rank of the skew form `xi([e_i, e_j])`: the dimension of the coadjoint
/// orbit through `xi`.
pub fn orbit_tangent_dim<S: Scalar>(algebra: &LieAlgebra<S>, xi: &[S]) -> usize {
    let n = algebra.dim();
    Matrix::from_fn(n, n, |i, j| dot(xi, &algebra.basis_bracket(i, j))).rank()
}

/// Control normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    /// `u = sum xi(X_i) X_i / |xi|_D|`
    #[default]
    UnitSpeed,
    /// `u = sum xi(X_i) X_i`
    Raw,
}

/// The Hamiltonian problem for one structure: an orthonormal `D` frame in
/// algebra coordinates plus the float model.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    algebra: LieAlgebra<f64>,
    frame: Vec<Vector<f64>>,
    /// `ad_k = ad(e_k)`
    ad: Vec<Matrix<f64>>,
    mode: ControlMode,
    tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    Normal { u: Vector<f64>, h: f64 },
    /// `xi` annihilates `D`.
    Abnormal,
}

impl Hamiltonian {
    pub fn new<S: Scalar>(s: &SubRiemannianStructure<S>, mode: ControlMode) -> Result<Self> {
        let sf = s.to_f64();
        let frame = sf.adapted_frame()?;
        let algebra = sf.algebra().clone();
        let n = algebra.dim();
        let ad = (0..n)
            .map(|k| algebra.ad_matrix(&crate::linalg::unit(n, k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            frame: frame.vectors()[..sf.m()].to_vec(),
            algebra,
            ad,
            mode,
            tol: s.tol(),
        })
    }

    pub fn algebra(&self) -> &LieAlgebra<f64> {
        &self.algebra
    }

    pub fn frame(&self) -> &[Vector<f64>] {
        &self.frame
    }

    /// `|xi restricted to D|`
    pub fn value(&self, xi: &[f64]) -> f64 {
        self.frame.iter().map(|x| dot(xi, x).powi(2)).sum::<f64>().sqrt()
    }

    pub fn control(&self, xi: &[f64]) -> Control {
        let p: Vec<f64> = self.frame.iter().map(|x| dot(xi, x)).collect();
        let h = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if h <= self.tol {
            return Control::Abnormal;
        }
        let n = self.algebra.dim();
        let mut u = vec![0.0; n];
        let scale = match self.mode {
            ControlMode::UnitSpeed => 1.0 / h,
            ControlMode::Raw => 1.0,
        };
        for (pi, x) in p.iter().zip(&self.frame) {
            crate::linalg::axpy(&mut u, &(pi * scale), x);
        }
        Control::Normal { u, h }
    }

    /// `xi_dot = ad(u)^T xi`
    fn xi_dot(&self, u: &[f64], xi: &[f64]) -> Vector<f64> {
        let n = xi.len();
        let mut adu = Matrix::zeros(n, n);
        for (k, uk) in u.iter().enumerate() {
            if *uk != 0.0 {
                adu = adu.add(&self.ad[k].scale(uk));
            }
        }
        adu.transpose().mul_vec(xi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovectorState {
    pub t: f64,
    pub g: Matrix<f64>,
    pub xi: Vector<f64>,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<CovectorState>,
    pub step: f64,
    pub max_h_drift: f64,
    pub max_coadjoint_residual: f64,
}

fn rhs(
    ham: &Hamiltonian,
    model: &MatrixModel<f64>,
    g: &Matrix<f64>,
    xi: &[f64],
) -> Result<(Matrix<f64>, Vector<f64>)> {
    match ham.control(xi) {
        Control::Normal { u, .. } => Ok((g.mul(&model.element(&u)), ham.xi_dot(&u, xi))),
        Control::Abnormal => Err(Error::Abnormal),
    }
}

/// One classical Runge-Kutta step of `g_dot = g U`, `xi_dot = ad(u)^T xi`
/// with `u` recomputed at every stage.
pub fn rk4_step(
    ham: &Hamiltonian,
    model: &MatrixModel<f64>,
    g: &Matrix<f64>,
    xi: &[f64],
    h: f64,
) -> Result<(Matrix<f64>, Vector<f64>)> {
    let add = |a: &[f64], b: &[f64], s: f64| -> Vector<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
    let (g1, x1) = rhs(ham, model, g, xi)?;
    let (g2, x2) = rhs(ham, model, &g.add(&g1.scale(&(h / 2.0))), &add(xi, &x1, h / 2.0))?;
    let (g3, x3) = rhs(ham, model, &g.add(&g2.scale(&(h / 2.0))), &add(xi, &x2, h / 2.0))?;
    let (g4, x4) = rhs(ham, model, &g.add(&g3.scale(&h)), &add(xi, &x3, h))?;
    let gn = g.add(
        &g1.add(&g2.scale(&2.0))
            .add(&g3.scale(&2.0))
            .add(&g4)
            .scale(&(h / 6.0)),
    );
    let xn: Vector<f64> = (0..xi.len())
        .map(|k| xi[k] + h / 6.0 * (x1[k] + 2.0 * x2[k] + 2.0 * x3[k] + x4[k]))
        .collect();
    if gn.as_slice().iter().chain(&xn).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite state during integration".into()));
    }
    Ok((gn, xn))
}

/// `|xi(t) - xi_0(Ad(g(t)) .)|_inf`: the coadjoint section identity.
pub fn coadjoint_residual(model: &MatrixModel<f64>, g: &Matrix<f64>, xi0: &[f64], xi: &[f64]) -> Result<f64> {
    let n = model.dim();
    let mut worst = 0.0f64;
    for j in 0..n {
        let w = model.ad_group(g, &crate::linalg::unit(n, j))?;
        worst = worst.max((xi[j] - dot(xi0, &w)).abs());
    }
    Ok(worst)
}

/// Integrates from the identity over `[0, time]` with steps of about `h`
/// (the step is shrunk so an integer number of steps lands on `time`).
pub fn integrate(
    ham: &Hamiltonian,
    model: &MatrixModel<f64>,
    xi0: &[f64],
    time: f64,
    h: f64,
) -> Result<Trajectory> {
    if !(h > 0.0) || !(time >= 0.0) || !h.is_finite() || !time.is_finite() {
        return Err(Error::Precondition("step and time must be positive and finite".into()));
    }
    if xi0.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: xi0.len(),
        });
    }
    let steps = (time / h).ceil().max(1.0) as usize;
    let h = time / steps as f64;
    let h0 = ham.value(xi0);
    if let Control::Abnormal = ham.control(xi0) {
        return Err(Error::Abnormal);
    }
    let mut g = Matrix::identity(model.rep_dim());
    let mut xi = xi0.to_vec();
    let mut samples = vec![CovectorState {
        t: 0.0,
        g: g.clone(),
        xi: xi.clone(),
        h: h0,
    }];
    let mut max_drift = 0.0f64;
    let mut max_res = 0.0f64;
    for k in 1..=steps {
        let (gn, xn) = rk4_step(ham, model, &g, &xi, h)?;
        g = gn;
        xi = xn;
        let hv = ham.value(&xi);
        max_drift = max_drift.max((hv - h0).abs());
        max_res = max_res.max(coadjoint_residual(model, &g, xi0, &xi)?);
        samples.push(CovectorState {
            t: k as f64 * h,
            g: g.clone(),
            xi: xi.clone(),
            h: hv,
        });
    }
    if !max_drift.is_finite() || !max_res.is_finite() {
        return Err(Error::Numeric("diagnostics are not finite".into()));
    }
    Ok(Trajectory {
        samples,
        step: h,
        max_h_drift: max_drift,
        max_coadjoint_residual: max_res,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub h_drift: Vec<f64>,
    pub residual: Vec<f64>,
    /// Least-squares slope of `log(error)` against `log(h)` over the errors
    /// above [`ROUNDOFF_FLOOR`]; `None` when fewer than two remain.
    pub h_drift_order: Option<f64>,
    pub residual_order: Option<f64>,
}

impl ConvergenceStudy {
    /// Every error sits at the roundoff floor, so there is nothing to fit.
    pub fn h_drift_at_floor(&self) -> bool {
        self.h_drift.iter().all(|e| *e <= ROUNDOFF_FLOOR)
    }

    pub fn residual_at_floor(&self) -> bool {
        self.residual.iter().all(|e| *e <= ROUNDOFF_FLOOR)
    }

    /// Either the fitted order reaches `min_order` or the errors never
    /// leave the roundoff floor.
    pub fn order_ok(&self, min_order: f64) -> bool {
        let ok = |order: Option<f64>, floor: bool| floor || order.is_some_and(|o| o >= min_order);
        ok(self.h_drift_order, self.h_drift_at_floor()) && ok(self.residual_order, self.residual_at_floor())
    }
}

pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Slope of `log e` against `log h`, skipping errors at the roundoff floor.
pub fn fit_order(hs: &[f64], errs: &[f64]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = hs
        .iter()
        .zip(errs)
        .filter(|(_, e)| **e > ROUNDOFF_FLOOR)
        .map(|(h, e)| (h.ln(), e.ln()))
        .unzip();
    if xs.len() < 2 {
        return None;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Runs the same problem at each step size and fits the error orders.
pub fn convergence_study(
    ham: &Hamiltonian,
    model: &MatrixModel<f64>,
    xi0: &[f64],
    time: f64,
    steps: &[f64],
) -> Result<ConvergenceStudy> {
    let mut h_drift = Vec::new();
    let mut residual = Vec::new();
    for &h in steps {
        let t = integrate(ham, model, xi0, time, h)?;
        h_drift.push(t.max_h_drift);
        residual.push(t.max_coadjoint_residual);
    }
    Ok(ConvergenceStudy {
        h_drift_order: fit_order(steps, &h_drift),
        residual_order: fit_order(steps, &residual),
        steps: steps.to_vec(),
        h_drift,
        residual,
    })
}

pub const DEFAULT_ABNORMAL_TIMES: [f64; 5] = [0.0, 0.3, 0.7, 1.1, 1.9];

/// Covectors `xi_0` (a basis of them) with `xi_0(Ad(exp(t_k u)) X) = 0` for
/// every sampled `t_k` and every `X` in `D`.
pub fn abnormal_covector_search<S: Scalar>(
    s: &SubRiemannianStructure<S>,
    model: &MatrixModel<f64>,
    u: &[f64],
    times: &[f64],
) -> Result<Vec<Vector<f64>>> {
    let sf = s.to_f64();
    let n = sf.n();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    if !sf.distribution().contains(u) {
        return Err(Error::Precondition("search direction is not in D".into()));
    }
    let mut rows = Vec::new();
    for &t in times {
        let ut: Vector<f64> = u.iter().map(|x| x * t).collect();
        let e = model.exp(&ut)?;
        for x in sf.distribution().basis() {
            rows.push(model.ad_group(&e, x)?);
        }
    }
    Ok(Matrix::from_rows(&rows).null_space())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::scalar::{Rational, DEFAULT_TOL};
    use crate::tensor::Tensor3;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn heis3() -> (SubRiemannianStructure<Rational>, MatrixModel<f64>) {
        let a = LieAlgebra::from_brackets("heis3", 3, &[(0, 1, vec![(2, q(1))])]).unwrap();
        let e = |r: usize, c: usize| Matrix::from_fn(3, 3, |i, j| if (i, j) == (r, c) { q(1) } else { q(0) });
        let model = MatrixModel::new(&a, vec![e(0, 1), e(1, 2), e(0, 2)], 0.0).unwrap().to_f64();
        let s = SubRiemannianStructure::new("heis3", a, &[unit(3, 0), unit(3, 1)], None, Matrix::identity(3), DEFAULT_TOL)
            .unwrap();
        (s, model)
    }

    fn so3() -> (SubRiemannianStructure<Rational>, MatrixModel<f64>) {
        let a = LieAlgebra::from_brackets(
            "so3",
            3,
            &[(0, 1, vec![(2, q(1))]), (1, 2, vec![(0, q(1))]), (0, 2, vec![(1, q(-1))])],
        )
        .unwrap();
        let l = |k: usize| {
            Matrix::from_fn(3, 3, |i, j| {
                // (L_k)_ij = -eps_kij
                let eps = match (k, i, j) {
                    (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
                    (0, 2, 1) | (1, 0, 2) | (2, 1, 0) => -1,
                    _ => 0,
                };
                q(-eps)
            })
        };
        let model = MatrixModel::new(&a, vec![l(0), l(1), l(2)], 0.0).unwrap().to_f64();
        let s = SubRiemannianStructure::new("so3", a, &[unit(3, 0), unit(3, 1)], None, Matrix::identity(3), DEFAULT_TOL)
            .unwrap();
        (s, model)
    }

    #[test]
    fn expm_matches_rotation() {
        let (_, m) = so3();
        let e = m.exp(&[0.0, 0.0, 1.3]).unwrap();
        assert!((e[(0, 0)] - 1.3f64.cos()).abs() < 1e-14);
        assert!((e[(1, 0)] - 1.3f64.sin()).abs() < 1e-14);
        let big = m.exp(&[0.0, 0.0, 40.0]).unwrap();
        assert!((big[(0, 0)] - 40f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn controls() {
        let (s, _) = heis3();
        let ham = Hamiltonian::new(&s, ControlMode::UnitSpeed).unwrap();
        assert_eq!(ham.control(&[1.0, 0.0, 0.0]), Control::Normal { u: vec![1.0, 0.0, 0.0], h: 1.0 });
        assert_eq!(ham.control(&[0.0, 0.0, 1.0]), Control::Abnormal);
        let raw = Hamiltonian::new(&s, ControlMode::Raw).unwrap();
        assert_eq!(raw.control(&[2.0, 0.0, 5.0]), Control::Normal { u: vec![2.0, 0.0, 0.0], h: 2.0 });
    }

    #[test]
    fn coadjoint_action() {
        let (s, m) = heis3();
        let a = s.algebra();
        let xi = vec![q(0), q(0), q(1)];
        assert_eq!(ad_star_algebra(a, &unit(3, 0), &xi).unwrap(), vec![q(0), q(-1), q(0)]);
        assert_eq!(orbit_tangent_dim(a, &xi), 2);
        assert_eq!(orbit_tangent_dim(a, &[q(1), q(0), q(0)]), 0);
        assert_eq!(symplectic_eval(a, &xi, &unit(3, 0), &unit(3, 0)).unwrap(), q(0));
        let id = Matrix::identity(3);
        assert_eq!(m.ad_star(&id, &[0.3, 0.1, 2.0]).unwrap(), vec![0.3, 0.1, 2.0]);
    }

    #[test]
    fn ad_star_derivative_matches_algebra() {
        let (s, m) = so3();
        let a = s.algebra().to_f64();
        let u = [0.3, -0.7, 0.2];
        let xi = [1.0, 2.0, -0.5];
        let fd_h = 1e-4;
        let plus = m.ad_star(&m.exp(&u.map(|x| x * fd_h)).unwrap(), &xi).unwrap();
        let minus = m.ad_star(&m.exp(&u.map(|x| -x * fd_h)).unwrap(), &xi).unwrap();
        let exact = ad_star_algebra(&a, &u, &xi).unwrap();
        for k in 0..3 {
            let fd = (plus[k] - minus[k]) / (2.0 * fd_h);
            assert!((fd - exact[k]).abs() < 1e-7, "{fd} vs {}", exact[k]);
        }
    }

    #[test]
    fn so3_norm_is_coadjoint_invariant() {
        let (_, m) = so3();
        let g = m.exp(&[0.4, 1.1, -0.3]).unwrap();
        let xi = [0.2, -1.0, 0.7];
        let out = m.ad_star(&g, &xi).unwrap();
        let n0: f64 = xi.iter().map(|x| x * x).sum();
        let n1: f64 = out.iter().map(|x| x * x).sum();
        assert!((n0 - n1).abs() < 1e-13);
    }

    #[test]
    fn heis3_flow_conserves() {
        let (s, m) = heis3();
        let ham = Hamiltonian::new(&s, ControlMode::UnitSpeed).unwrap();
        let t = integrate(&ham, &m, &[1.0, 0.0, 2.0], 1.0, 1e-2).unwrap();
        assert!(t.max_h_drift < 1e-9);
        assert!(t.max_coadjoint_residual < 1e-6);
        let study = convergence_study(&ham, &m, &[1.0, 0.0, 2.0], 1.0, &[0.2, 0.1, 0.05]).unwrap();
        assert!(study.h_drift_order.unwrap() > 3.8, "{study:?}");
        assert!(study.residual_at_floor());
        assert!(study.order_ok(3.8));
    }

    #[test]
    fn so3_flow_orders() {
        let (s, m) = so3();
        let ham = Hamiltonian::new(&s, ControlMode::UnitSpeed).unwrap();
        let study = convergence_study(&ham, &m, &[1.0, 0.0, 2.0], 1.0, &[0.2, 0.1, 0.05]).unwrap();
        assert!(study.h_drift_order.unwrap() > 3.8);
        assert!(study.residual_order.unwrap() > 3.8);
        let fine = integrate(&ham, &m, &[1.0, 0.0, 2.0], 1.0, 1e-2).unwrap();
        assert!(fine.max_h_drift < 1e-9 && fine.max_coadjoint_residual < 1e-9);
        assert_eq!(fit_order(&[0.1, 0.05], &[0.0, 0.0]), None);
    }

    #[test]
    fn abelian_flow_is_a_line() {
        let a = LieAlgebra::<Rational>::new("r2", Tensor3::cube(2), 0.0).unwrap();
        let affine = |k: usize| Matrix::from_fn(3, 3, |i, j| if i == k && j == 2 { q(1) } else { q(0) });
        let m = MatrixModel::new(&a, vec![affine(0), affine(1)], 0.0).unwrap().to_f64();
        let s = SubRiemannianStructure::new("r2", a, &[unit(2, 0), unit(2, 1)], None, Matrix::identity(2), DEFAULT_TOL)
            .unwrap();
        let ham = Hamiltonian::new(&s, ControlMode::UnitSpeed).unwrap();
        let t = integrate(&ham, &m, &[1.0, 0.0], 1.0, 0.1).unwrap();
        let last = t.samples.last().unwrap();
        assert!((last.g[(0, 2)] - 1.0).abs() < 1e-14);
        assert_eq!(last.xi, vec![1.0, 0.0]);
        assert_eq!(t.max_coadjoint_residual, 0.0);
        let found = abnormal_covector_search(&s, &m, &[1.0, 0.0], &DEFAULT_ABNORMAL_TIMES).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn heis3_has_no_abnormal_certificate() {
        let (s, m) = heis3();
        for u in [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0]] {
            let found = abnormal_covector_search(&s, &m, &u, &DEFAULT_ABNORMAL_TIMES).unwrap();
            assert!(found.is_empty());
        }
        assert!(abnormal_covector_search(&s, &m, &[0.0, 0.0, 1.0], &DEFAULT_ABNORMAL_TIMES).is_err());
    }
}
