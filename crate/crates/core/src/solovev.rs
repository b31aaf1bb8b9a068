//! Curvature of a distribution with a rigging, computed on an adapted
//! orthonormal frame of left-invariant fields.
//!
//! Frame index conventions: `0..m` spans `D`, `m..n` spans the rigging. A
//! connection is stored as `coeffs[(i, j, k)] = <nabla_{f_i} f_j, f_k>`, and
//! a 4-tensor as `K[(a, b, c, d)] = <K(f_a, f_b) f_c, f_d>`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, zeros, Vector};
use crate::scalar::Scalar;
use crate::structure::{FrameData, SubRiemannianStructure};
use crate::tensor::{Tensor3, Tensor4};

/// Connection coefficients on the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraConnection<S> {
    pub coeffs: Tensor3<S>,
}

impl<S: Scalar> AlgebraConnection<S> {
    /// `nabla_x y` for frame-coordinate vectors.
    pub fn apply(&self, x: &[S], y: &[S]) -> Vector<S> {
        let n = x.len();
        let mut out: Vector<S> = zeros(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    *o = o.clone() + w.clone() * self.coeffs[(i, j, k)].clone();
                }
            }
        }
        out
    }
}

/// `<R(f_a, f_b) f_c, f_d>` for `a, b, c, d < range` of a left-invariant
/// connection, with `R(x,y) = [nabla_x, nabla_y] - nabla_[x,y]`.
pub fn curvature_of<S: Scalar>(gamma: &Tensor3<S>, c: &Tensor3<S>, range: usize) -> Tensor4<S> {
    let n = c.dims()[0];
    let mut r = Tensor4::zeros([range; 4]);
    for a in 0..range {
        for b in 0..range {
            if a == b {
                continue;
            }
            for cc in 0..range {
                for d in 0..range {
                    let mut s = S::zero();
                    for k in 0..n {
                        s = s + gamma[(b, cc, k)].clone() * gamma[(a, k, d)].clone()
                            - gamma[(a, cc, k)].clone() * gamma[(b, k, d)].clone()
                            - c[(a, b, k)].clone() * gamma[(k, cc, d)].clone();
                    }
                    r[(a, b, cc, d)] = s;
                }
            }
        }
    }
    r
}

/// Every object of the construction, on one adapted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SolovevPipeline<S> {
    n: usize,
    m: usize,
    tol: f64,
    /// Frame structure constants.
    pub c: Tensor3<S>,
    pub levi_civita: AlgebraConnection<S>,
    pub induced: AlgebraConnection<S>,
    /// `h = nabla - induced`
    pub h: Tensor3<S>,
    pub h_plus: Tensor3<S>,
    pub h_minus: Tensor3<S>,
    /// `torsion[(a, b, k)] = <T(f_a, f_b), f_k>` for `a, b < m`, `k < n`.
    pub torsion: Tensor3<S>,
    pub connection_c: AlgebraConnection<S>,
    /// Ambient Riemannian curvature on the `D` slots.
    pub riemann: Tensor4<S>,
    /// Curvature of the induced connection on the `D` slots.
    pub induced_curvature: Tensor4<S>,
    /// The curvature tensor of the distribution on the `D` slots.
    pub tensor: Tensor4<S>,
}

impl<S: Scalar> SolovevPipeline<S> {
    /// Builds everything and cross-checks the three curvature routes; a
    /// disagreement is an [`Error::Inconsistency`].
    pub fn new(fd: &FrameData<S>, tol: f64) -> Result<Self> {
        let n = fd.n();
        let m = fd.m();
        let c = fd.c.clone();
        let lc = levi_civita(&c, tol)?;
        let induced = induced_connection(&lc, m);
        let (h, h_plus, h_minus) = second_fundamental_form(&lc, &induced);
        let torsion = torsion_t(&c, m);

        // T = -2 h^- on D x D
        for a in 0..m {
            for b in 0..m {
                for k in 0..n {
                    let d = torsion[(a, b, k)].clone() + S::from_i64(2) * h_minus[(a, b, k)].clone();
                    if !d.is_zero_tol(tol) {
                        return Err(Error::Inconsistency(format!(
                            "torsion differs from -2h^- at ({}, {}, {})",
                            a + 1,
                            b + 1,
                            k + 1
                        )));
                    }
                }
            }
        }

        let conn_c = connection_c(&induced, &torsion, m);
        let riemann = curvature_of(&lc.coeffs, &c, m);
        let rbar = curvature_of(&induced.coeffs, &c, m);

        let route1 = induced_torsion_route(&rbar, &torsion, m);
        let route2 = gauss_route(&riemann, &h, &h_minus, m);
        // route (iii): curvature of C directly
        let route3 = curvature_of(&conn_c.coeffs, &c, m);

        for (label, other) in [("Gauss-type", &route2), ("connection C", &route3)] {
            let diff = route1.max_abs_diff(other);
            if !diff.is_zero_tol(tol) {
                return Err(Error::Inconsistency(format!(
                    "curvature routes disagree ({label} vs induced-torsion route, max diff {diff})"
                )));
            }
        }

        Ok(Self {
            n,
            m,
            tol,
            c,
            levi_civita: lc,
            induced,
            h,
            h_plus,
            h_minus,
            torsion,
            connection_c: conn_c,
            riemann,
            induced_curvature: rbar,
            tensor: route1,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Frame-coordinate bracket.
    pub fn bracket(&self, x: &[S], y: &[S]) -> Vector<S> {
        frame_bracket(&self.c, x, y)
    }

    fn wedge_norm2(u: &[S], v: &[S]) -> S {
        dot(u, u) * dot(v, v) - dot(u, v) * dot(u, v)
    }

    fn check_plane(&self, u: &[S], v: &[S]) -> Result<S> {
        for w in [u, v] {
            if w.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: w.len(),
                });
            }
            if w[self.m..].iter().any(|x| !x.is_zero_tol(self.tol)) {
                return Err(Error::Precondition("plane vector is not horizontal".into()));
            }
        }
        let w2 = Self::wedge_norm2(u, v);
        if w2.is_zero_tol(self.tol) {
            return Err(Error::Precondition("u and v are linearly dependent".into()));
        }
        Ok(w2)
    }

    /// `<T(u, v) w, z>`-style contraction of a D-slot 4-tensor.
    fn contract(t: &Tensor4<S>, x: &[S], y: &[S], z: &[S], w: &[S], m: usize) -> S {
        let mut s = S::zero();
        for a in 0..m {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..m {
                if y[b].is_zero() {
                    continue;
                }
                for c in 0..m {
                    if z[c].is_zero() {
                        continue;
                    }
                    for d in 0..m {
                        if w[d].is_zero() {
                            continue;
                        }
                        s = s + x[a].clone() * y[b].clone() * z[c].clone() * w[d].clone() * t[(a, b, c, d)].clone();
                    }
                }
            }
        }
        s
    }

    /// Sectional curvature of the plane `u ^ v` (frame coordinates).
    pub fn sectional(&self, u: &[S], v: &[S]) -> Result<S> {
        let w2 = self.check_plane(u, v)?;
        Ok(Self::contract(&self.tensor, u, v, v, u, self.m) / w2)
    }

    /// Ambient Riemannian sectional curvature of `u ^ v`.
    pub fn riemannian_sectional(&self, u: &[S], v: &[S]) -> Result<S> {
        let w2 = self.check_plane(u, v)?;
        Ok(Self::contract(&self.riemann, u, v, v, u, self.m) / w2)
    }

    /// `|T(u,v)|^2 / |u ^ v|^2`
    pub fn sectional_torsion(&self, u: &[S], v: &[S]) -> Result<S> {
        let w2 = self.check_plane(u, v)?;
        let t = self.torsion_of(u, v);
        Ok(dot(&t, &t) / w2)
    }

    /// `T(u, v) = -V[u, v]`
    pub fn torsion_of(&self, u: &[S], v: &[S]) -> Vector<S> {
        let mut b = self.bracket(u, v);
        for (k, x) in b.iter_mut().enumerate() {
            *x = if k < self.m { S::zero() } else { -x.clone() };
        }
        b
    }

    /// `k_a = sum_{b != a} K_{b a a b}` and their sum.
    pub fn ricci_and_scalar(&self) -> (Vec<S>, S) {
        let m = self.m;
        let ricci: Vec<S> = (0..m)
            .map(|a| {
                (0..m)
                    .filter(|&b| b != a)
                    .fold(S::zero(), |acc, b| acc + self.tensor[(b, a, a, b)].clone())
            })
            .collect();
        let scalar = ricci.iter().fold(S::zero(), |acc, x| acc + x.clone());
        (ricci, scalar)
    }

    pub fn report(&self) -> CurvatureReport<S> {
        let m = self.m;
        let mut sectional = Vec::new();
        let mut sectional_torsion = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                sectional.push(PairValue {
                    pair: (a + 1, b + 1),
                    value: self.tensor[(a, b, b, a)].clone(),
                });
                let t = (self.m..self.n).fold(S::zero(), |acc, k| {
                    acc + self.torsion[(a, b, k)].clone() * self.torsion[(a, b, k)].clone()
                });
                sectional_torsion.push(PairValue {
                    pair: (a + 1, b + 1),
                    value: t,
                });
            }
        }
        let (ricci, scalar) = self.ricci_and_scalar();
        CurvatureReport {
            sectional,
            ricci,
            scalar,
            sectional_torsion,
            tensor: self.tensor.clone(),
        }
    }

    /// Whether `h^+` vanishes on `D x D`.
    pub fn is_totally_geodesic(&self) -> bool {
        let m = self.m;
        (0..m).all(|a| (0..m).all(|b| (0..self.n).all(|k| self.h_plus[(a, b, k)].is_zero_tol(self.tol))))
    }

    /// Whether `h^-` vanishes on `D x D`.
    pub fn is_involutive(&self) -> bool {
        let m = self.m;
        (0..m).all(|a| (0..m).all(|b| (0..self.n).all(|k| self.h_minus[(a, b, k)].is_zero_tol(self.tol))))
    }
}

/// `Rbar(a,b,c,d) - <T(a,b), T(c,d)>/2`
pub fn induced_torsion_route<S: Scalar>(rbar: &Tensor4<S>, torsion: &Tensor3<S>, m: usize) -> Tensor4<S> {
    let n = torsion.dims()[2];
    let mut out = Tensor4::zeros([m; 4]);
    for a in 0..m {
        for b in 0..m {
            for cc in 0..m {
                for d in 0..m {
                    out[(a, b, cc, d)] = rbar[(a, b, cc, d)].clone() - S::half() * pair(torsion, a, b, cc, d, n);
                }
            }
        }
    }
    out
}

/// `R(a,b,c,d) - 2<h^-(a,b), h^-(c,d)> + <h(a,d), h(b,c)> - <h(b,d), h(a,c)>`
pub fn gauss_route<S: Scalar>(riemann: &Tensor4<S>, h: &Tensor3<S>, h_minus: &Tensor3<S>, m: usize) -> Tensor4<S> {
    let n = h.dims()[2];
    let two = S::from_i64(2);
    let mut out = Tensor4::zeros([m; 4]);
    for a in 0..m {
        for b in 0..m {
            for cc in 0..m {
                for d in 0..m {
                    out[(a, b, cc, d)] = riemann[(a, b, cc, d)].clone()
                        - two.clone() * pair(h_minus, a, b, cc, d, n)
                        + pair(h, a, d, b, cc, n)
                        - pair(h, b, d, a, cc, n);
                }
            }
        }
    }
    out
}

fn pair<S: Scalar>(t: &Tensor3<S>, a: usize, b: usize, c: usize, d: usize, n: usize) -> S {
    (0..n).fold(S::zero(), |acc, k| acc + t[(a, b, k)].clone() * t[(c, d, k)].clone())
}

pub(crate) fn frame_bracket<S: Scalar>(c: &Tensor3<S>, x: &[S], y: &[S]) -> Vector<S> {
    let n = x.len();
    let mut out: Vector<S> = zeros(n);
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let w = x[i].clone() * y[j].clone();
            for (k, o) in out.iter_mut().enumerate() {
                *o = o.clone() + w.clone() * c[(i, j, k)].clone();
            }
        }
    }
    out
}

/// Koszul formula on an orthonormal frame:
/// `Gamma_ijk = (c_ijk - c_jki + c_kij) / 2`. Torsion-freeness and metric
/// compatibility are checked.
pub fn levi_civita<S: Scalar>(c: &Tensor3<S>, tol: f64) -> Result<AlgebraConnection<S>> {
    let n = c.dims()[0];
    let half = S::half();
    let g = Tensor3::from_fn([n, n, n], |i, j, k| {
        half.clone() * (c[(i, j, k)].clone() - c[(j, k, i)].clone() + c[(k, i, j)].clone())
    });
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let tf = g[(i, j, k)].clone() - g[(j, i, k)].clone() - c[(i, j, k)].clone();
                let mc = g[(i, j, k)].clone() + g[(i, k, j)].clone();
                if !tf.is_zero_tol(tol) || !mc.is_zero_tol(tol) {
                    return Err(Error::Inconsistency("Koszul connection check failed".into()));
                }
            }
        }
    }
    Ok(AlgebraConnection { coeffs: g })
}

/// `H nabla_X HY + V nabla_X VY`: keeps only the blocks with `j, k` on the
/// same side of the splitting.
pub fn induced_connection<S: Scalar>(lc: &AlgebraConnection<S>, m: usize) -> AlgebraConnection<S> {
    let dims = lc.coeffs.dims();
    AlgebraConnection {
        coeffs: Tensor3::from_fn(dims, |i, j, k| {
            if (j < m) == (k < m) {
                lc.coeffs[(i, j, k)].clone()
            } else {
                S::zero()
            }
        }),
    }
}

/// `(h, h^+, h^-)` with the symmetric/skew split taken in the first two slots.
pub fn second_fundamental_form<S: Scalar>(
    lc: &AlgebraConnection<S>,
    induced: &AlgebraConnection<S>,
) -> (Tensor3<S>, Tensor3<S>, Tensor3<S>) {
    let dims = lc.coeffs.dims();
    let h = Tensor3::from_fn(dims, |i, j, k| lc.coeffs[(i, j, k)].clone() - induced.coeffs[(i, j, k)].clone());
    let half = S::half();
    let hp = Tensor3::from_fn(dims, |i, j, k| half.clone() * (h[(i, j, k)].clone() + h[(j, i, k)].clone()));
    let hm = Tensor3::from_fn(dims, |i, j, k| half.clone() * (h[(i, j, k)].clone() - h[(j, i, k)].clone()));
    (h, hp, hm)
}

/// `T(f_a, f_b) = -V[f_a, f_b]` for `a, b < m`; other slots are zero.
pub fn torsion_t<S: Scalar>(c: &Tensor3<S>, m: usize) -> Tensor3<S> {
    let n = c.dims()[0];
    Tensor3::from_fn([n, n, n], |a, b, k| {
        if a < m && b < m && k >= m {
            -c[(a, b, k)].clone()
        } else {
            S::zero()
        }
    })
}

/// `<C_X HY, Z> = <induced_X HY, HZ> - <X, T(HY, HZ)>/2`, `C_X VY = 0`.
pub fn connection_c<S: Scalar>(
    induced: &AlgebraConnection<S>,
    torsion: &Tensor3<S>,
    m: usize,
) -> AlgebraConnection<S> {
    let dims = induced.coeffs.dims();
    let half = S::half();
    AlgebraConnection {
        coeffs: Tensor3::from_fn(dims, |i, j, k| {
            if j < m && k < m {
                induced.coeffs[(i, j, k)].clone() - half.clone() * torsion[(j, k, i)].clone()
            } else {
                S::zero()
            }
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue<S> {
    /// One-based frame indices.
    pub pair: (usize, usize),
    pub value: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<S> {
    pub sectional: Vec<PairValue<S>>,
    pub ricci: Vec<S>,
    pub scalar: S,
    pub sectional_torsion: Vec<PairValue<S>>,
    pub tensor: Tensor4<S>,
}

impl<S: Scalar> CurvatureReport<S> {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.tensor.is_zero(tol)
            && self.sectional.iter().all(|p| p.value.is_zero_tol(tol))
            && self.ricci.iter().all(|x| x.is_zero_tol(tol))
            && self.scalar.is_zero_tol(tol)
    }

    pub fn sectional_of(&self, a: usize, b: usize) -> Option<&S> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.sectional.iter().find(|p| p.pair == key).map(|p| &p.value)
    }
}

/// Closed-form sectional curvatures `K_ab` for `a < b < m` (zero-based),
/// evaluated directly from the frame constants.
pub fn milnor_closed_form<S: Scalar>(c: &Tensor3<S>, m: usize) -> Vec<PairValue<S>> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            out.push(PairValue {
                pair: (a + 1, b + 1),
                value: milnor_pair(c, m, a, b),
            });
        }
    }
    out
}

/// Closed-form `K_ab`; `a != b` required.
pub fn milnor_pair<S: Scalar>(c: &Tensor3<S>, m: usize, a: usize, b: usize) -> S {
    assert_ne!(a, b, "closed form needs a != b");
    let n = c.dims()[0];
    let half = S::half();
    let quarter = S::from_ratio(1, 4);
    let three_quarters = S::from_ratio(3, 4);
    let mut s = S::zero();
    for i in 0..n {
        s = s + half.clone() * c[(a, b, i)].clone() * (c[(b, i, a)].clone() + c[(i, a, b)].clone());
    }
    for j in 0..m {
        let sym = c[(j, a, b)].clone() + c[(j, b, a)].clone();
        s = s + quarter.clone() * sym.clone() * sym
            - three_quarters.clone() * c[(a, b, j)].clone() * c[(a, b, j)].clone()
            - c[(j, a, a)].clone() * c[(j, b, b)].clone();
    }
    s
}

/// Whether `<[x,y],z> + <y,[x,z]> = 0` on the frame; returns a failing
/// triple otherwise.
pub fn ad_invariance_witness<S: Scalar>(c: &Tensor3<S>, tol: f64) -> Option<(usize, usize, usize)> {
    let n = c.dims()[0];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !(c[(i, j, k)].clone() + c[(i, k, j)].clone()).is_zero_tol(tol) {
                    return Some((i + 1, j + 1, k + 1));
                }
            }
        }
    }
    None
}

/// Curvature from the bi-invariant formula
/// `K(X,Y)Z = H[X,H[Y,Z]]/4 + H[Y,H[Z,X]]/4 + H[Z,H[X,Y]]/2 + H[Z,V[X,Y]]`.
pub fn biinvariant_tensor<S: Scalar>(c: &Tensor3<S>, m: usize, tol: f64) -> Result<Tensor4<S>> {
    if let Some((i, j, k)) = ad_invariance_witness(c, tol) {
        return Err(Error::Precondition(format!(
            "metric is not bi-invariant (fails on f{i}, f{j}, f{k})"
        )));
    }
    let n = c.dims()[0];
    let hpart = |v: Vector<S>| -> Vector<S> {
        v.into_iter().enumerate().map(|(k, x)| if k < m { x } else { S::zero() }).collect()
    };
    let vpart = |v: Vector<S>| -> Vector<S> {
        v.into_iter().enumerate().map(|(k, x)| if k < m { S::zero() } else { x }).collect()
    };
    let e = |i: usize| crate::linalg::unit::<S>(n, i);
    let br = |x: &[S], y: &[S]| frame_bracket(c, x, y);
    let quarter = S::from_ratio(1, 4);
    let half = S::half();
    let mut out = Tensor4::zeros([m; 4]);
    for a in 0..m {
        for b in 0..m {
            for cc in 0..m {
                let (x, y, z) = (e(a), e(b), e(cc));
                let t1 = hpart(br(&x, &hpart(br(&y, &z))));
                let t2 = hpart(br(&y, &hpart(br(&z, &x))));
                let t3 = hpart(br(&z, &hpart(br(&x, &y))));
                let t4 = hpart(br(&z, &vpart(br(&x, &y))));
                for d in 0..m {
                    out[(a, b, cc, d)] = quarter.clone() * t1[d].clone()
                        + quarter.clone() * t2[d].clone()
                        + half.clone() * t3[d].clone()
                        + t4[d].clone();
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubmersionCheck<S> {
    pub preconditions_hold: bool,
    /// Why the preconditions fail, when they do.
    pub failure: Option<String>,
    pub ambient_sectional: S,
    pub base_sectional: S,
    pub solovev_sectional: S,
    pub equal: bool,
}

/// Base curvature `K^M + 3/4 |V[u,v]|^2 / |u^v|^2` of the quotient by the
/// rigging subgroup, compared with the distribution's sectional curvature.
/// `u, v` are frame coordinates.
pub fn submersion_base_curvature<S: Scalar>(
    p: &SolovevPipeline<S>,
    u: &[S],
    v: &[S],
) -> Result<SubmersionCheck<S>> {
    let (n, m, c, tol) = (p.n, p.m, &p.c, p.tol);
    let mut failure = None;
    'outer: for q in m..n {
        for r in m..n {
            for k in 0..m {
                if !c[(q, r, k)].is_zero_tol(tol) {
                    failure = Some(format!("rigging is not a subalgebra: [f{}, f{}] has f{} component", q + 1, r + 1, k + 1));
                    break 'outer;
                }
            }
        }
        for a in 0..m {
            for k in m..n {
                if !c[(q, a, k)].is_zero_tol(tol) {
                    failure = Some(format!("condition 1 fails: [f{}, f{}] has f{} component", q + 1, a + 1, k + 1));
                    break 'outer;
                }
            }
            for b in 0..m {
                if !(c[(q, a, b)].clone() + c[(q, b, a)].clone()).is_zero_tol(tol) {
                    failure = Some(format!(
                        "metric on D is not invariant under ad f{} (pair f{}, f{})",
                        q + 1,
                        a + 1,
                        b + 1
                    ));
                    break 'outer;
                }
            }
        }
    }
    let ambient = p.riemannian_sectional(u, v)?;
    let vb: Vector<S> = p.bracket(u, v).into_iter().skip(m).collect();
    let w2 = SolovevPipeline::<S>::wedge_norm2(u, v);
    let base = ambient.clone() + S::from_ratio(3, 4) * dot(&vb, &vb) / w2;
    let solovev = p.sectional(u, v)?;
    let equal = (base.clone() - solovev.clone()).is_zero_tol(tol);
    Ok(SubmersionCheck {
        preconditions_hold: failure.is_none(),
        failure,
        ambient_sectional: ambient,
        base_sectional: base,
        solovev_sectional: solovev,
        equal,
    })
}

/// Frame coordinates of an ambient vector: `<v, f_k>_g`.
pub fn to_frame_coords<S: Scalar>(s: &SubRiemannianStructure<S>, fd: &FrameData<S>, v: &[S]) -> Vector<S> {
    fd.frame.vectors().iter().map(|f| s.inner(v, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::linalg::{unit, Matrix};
    use crate::scalar::{Rational, DEFAULT_TOL};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qr(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn e(i: usize) -> Vector<Rational> {
        unit(3, i)
    }

    fn pipeline(a: LieAlgebra<Rational>) -> SolovevPipeline<Rational> {
        let s = SubRiemannianStructure::new("s", a, &[e(0), e(1)], None, Matrix::identity(3), DEFAULT_TOL).unwrap();
        SolovevPipeline::new(&s.frame_constants().unwrap(), DEFAULT_TOL).unwrap()
    }

    fn heis3() -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets("heis3", 3, &[(0, 1, vec![(2, q(1))])]).unwrap()
    }

    fn so3(scale: i64) -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets(
            "so3",
            3,
            &[
                (0, 1, vec![(2, q(scale))]),
                (1, 2, vec![(0, q(scale))]),
                (0, 2, vec![(1, q(-scale))]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn heis3_connections() {
        let p = pipeline(heis3());
        let g = &p.levi_civita.coeffs;
        assert_eq!(g[(0, 1, 2)], qr(1, 2));
        assert_eq!(g[(0, 2, 1)], qr(-1, 2));
        assert_eq!(g[(2, 0, 1)], qr(-1, 2));
        assert_eq!(p.induced.coeffs[(0, 1, 2)], q(0));
        assert_eq!(p.h[(0, 1, 2)], qr(1, 2));
        assert_eq!(p.h[(1, 0, 2)], qr(-1, 2));
        assert_eq!(p.h_plus[(0, 1, 2)], q(0));
        assert_eq!(p.h_minus[(0, 1, 2)], qr(1, 2));
        assert_eq!(p.torsion_of(&e(0), &e(1)), vec![q(0), q(0), q(-1)]);
        // <C_e3 e1, e2> = <induced_e3 e1, e2> - <e3, T(e1, e2)>/2 = -1/2 + 1/2
        assert_eq!(p.induced.coeffs[(2, 0, 1)], qr(-1, 2));
        assert_eq!(-qr(1, 2) * p.torsion[(0, 1, 2)].clone(), qr(1, 2));
        assert_eq!(p.connection_c.coeffs[(2, 0, 1)], q(0));
        assert!(p.tensor.is_zero(0.0));
        assert_eq!(p.sectional_torsion(&e(0), &e(1)).unwrap(), q(1));
        assert_eq!(milnor_pair(&p.c, 2, 0, 1), q(0));
        assert_eq!(p.ricci_and_scalar(), (vec![q(0), q(0)], q(0)));
    }

    #[test]
    fn so3_biinvariant() {
        let p = pipeline(so3(1));
        let g = &p.levi_civita.coeffs;
        // nabla_x y = [x, y] / 2
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(g[(i, j, k)], qr(1, 2) * p.c[(i, j, k)].clone());
                }
            }
        }
        assert!(p.is_totally_geodesic());
        let bi = biinvariant_tensor(&p.c, 2, 0.0).unwrap();
        assert_eq!(bi, p.tensor);
    }

    #[test]
    fn su2_submersion() {
        let p = pipeline(so3(2));
        let check = submersion_base_curvature(&p, &e(0), &e(1)).unwrap();
        assert!(check.preconditions_hold);
        assert_eq!(check.ambient_sectional, q(1));
        assert_eq!(check.base_sectional, q(4));
        assert_eq!(check.solovev_sectional, q(4));
        assert!(check.equal);
    }

    #[test]
    fn heis3_submersion() {
        let p = pipeline(heis3());
        let check = submersion_base_curvature(&p, &e(0), &e(1)).unwrap();
        assert!(check.preconditions_hold);
        assert_eq!(check.ambient_sectional, qr(-3, 4));
        assert_eq!(check.base_sectional, q(0));
        assert!(check.equal);
    }

    #[test]
    fn sectional_is_plane_invariant() {
        let p = pipeline(so3(1));
        let u = e(0);
        let v = e(1);
        let k = p.sectional(&u, &v).unwrap();
        let u2 = vec![q(2), q(3), q(0)];
        let v2 = vec![q(-1), q(5), q(0)];
        assert_eq!(p.sectional(&u2, &v2).unwrap(), k);
        assert!(p.sectional(&u, &u).is_err());
        assert!(p.sectional(&u, &e(2)).is_err());
    }

    #[test]
    fn abelian_is_flat() {
        let a = LieAlgebra::<Rational>::new("r3", Tensor3::cube(3), 0.0).unwrap();
        let p = pipeline(a);
        assert!(p.report().is_zero(0.0));
        assert!(p.levi_civita.coeffs.max_abs() == q(0));
        assert!(biinvariant_tensor(&p.c, 2, 0.0).unwrap().is_zero(0.0));
    }

    #[test]
    fn rejects_non_biinvariant() {
        let p = pipeline(heis3());
        assert!(biinvariant_tensor(&p.c, 2, 0.0).is_err());
    }
}
