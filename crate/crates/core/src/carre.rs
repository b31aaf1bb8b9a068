//! Pointwise carre du champ calculus by finite differences along
//! left-invariant flows `t -> g0 exp(tX)` in a matrix model.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesics::{expm, MatrixModel};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::structure::SubRiemannianStructure;

/// Evaluator signature shared by every field.
pub type FieldFn = dyn Fn(&Matrix<f64>) -> Result<f64> + Send + Sync;

/// A smooth function on the group, evaluated on model matrices.
#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<FieldFn>,
    note: String,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("note", &self.note).finish()
    }
}

impl ScalarField {
    pub fn new(note: impl Into<String>, eval: impl Fn(&Matrix<f64>) -> Result<f64> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            note: note.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| Ok(c))
    }

    /// The `(r, c)` matrix entry, 0-based.
    pub fn entry(r: usize, c: usize) -> Self {
        Self::new(format!("g{}{}", r + 1, c + 1), move |g| {
            if r < g.rows() && c < g.cols() {
                Ok(g[(r, c)])
            } else {
                Err(Error::DimensionMismatch {
                    expected: r.max(c) + 1,
                    got: g.rows(),
                })
            }
        })
    }

    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({})*({})", self.note, other.note), move |g| Ok(a.eval(g)? * b.eval(g)?))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({})+({})", self.note, other.note), move |g| Ok(a.eval(g)? + b.eval(g)?))
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn eval(&self, g: &Matrix<f64>) -> Result<f64> {
        let v = (self.eval)(g)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("field {} is not finite at a stencil node", self.note)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdScheme {
    /// Step for first and second derivatives of the input field.
    pub h1: f64,
    /// Step for derivatives of fields that are themselves difference
    /// quotients.
    pub outer: f64,
}

impl Default for FdScheme {
    fn default() -> Self {
        Self { h1: 1e-3, outer: 1e-2 }
    }
}

impl FdScheme {
    pub fn validate(&self) -> Result<()> {
        if !(self.h1 > 0.0 && self.outer > 0.0 && self.h1.is_finite() && self.outer.is_finite()) {
            return Err(Error::Precondition("finite-difference steps must be positive".into()));
        }
        Ok(())
    }
}

/// Both routes to the carre du champ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaValue {
    /// `1/2 (L(fg) - f Lg - g Lf)`
    pub bag: f64,
    /// `sum_i (X_i f)(X_i g)`
    pub sum: f64,
    pub discrepancy: f64,
}

/// Fourth- against second-order stencil on the outermost derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StencilMonitor {
    pub fourth_order: f64,
    pub second_order: f64,
    pub discrepancy: f64,
    /// Second-order truncation estimated by halving the outer step.
    pub expected: f64,
    /// The discrepancy exceeds ten times the expected truncation.
    pub roundoff_dominated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gamma2Value {
    pub value: f64,
    pub monitor: StencilMonitor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdParams {
    pub rho1: f64,
    pub rho2: f64,
    pub kappa: f64,
    /// `f64::INFINITY` drops the `(Lf)^2` term.
    pub r: f64,
    pub nu: f64,
}

impl CdParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0) || !(self.rho2 > 0.0) || !(self.kappa >= 0.0) || !(self.r > 0.0) || self.rho1.is_nan() {
            return Err(Error::Precondition(
                "cd parameters need nu > 0, rho2 > 0, kappa >= 0, r > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdSample {
    pub point: Vec<f64>,
    pub params: CdParams,
    pub residual: f64,
}

/// The operators attached to one structure and one matrix model.
#[derive(Debug, Clone)]
pub struct Carre {
    model: MatrixModel<f64>,
    x: Vec<Vector<f64>>,
    z: Vec<Vector<f64>>,
    scheme: FdScheme,
}

const C1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const C2: [(f64, f64); 5] = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];

impl Carre {
    pub fn new<S: Scalar>(s: &SubRiemannianStructure<S>, model: &MatrixModel<S>, scheme: FdScheme) -> Result<Self> {
        scheme.validate()?;
        if model.dim() != s.n() {
            return Err(Error::DimensionMismatch {
                expected: s.n(),
                got: model.dim(),
            });
        }
        let sf = s.to_f64();
        let frame = sf.adapted_frame()?;
        let v = frame.vectors();
        Ok(Self {
            model: model.to_f64(),
            x: v[..sf.m()].to_vec(),
            z: v[sf.m()..].to_vec(),
            scheme,
        })
    }

    pub fn scheme(&self) -> FdScheme {
        self.scheme
    }

    pub fn model(&self) -> &MatrixModel<f64> {
        &self.model
    }

    /// Orthonormal frame of `D` in algebra coordinates.
    pub fn horizontal_frame(&self) -> &[Vector<f64>] {
        &self.x
    }

    /// Orthonormal frame of the rigging.
    pub fn vertical_frame(&self) -> &[Vector<f64>] {
        &self.z
    }

    fn flow(&self, g0: &Matrix<f64>, x: &[f64], t: f64) -> Result<Matrix<f64>> {
        let tx: Vector<f64> = x.iter().map(|v| v * t).collect();
        Ok(g0.mul(&expm(&self.model.element(&tx))?))
    }

    fn stencil(
        &self,
        f: &dyn Fn(&Matrix<f64>) -> Result<f64>,
        x: &[f64],
        g0: &Matrix<f64>,
        order: usize,
        h: f64,
    ) -> Result<f64> {
        match order {
            1 => {
                let mut acc = 0.0;
                for (k, w) in C1 {
                    acc += w * f(&self.flow(g0, x, k * h)?)?;
                }
                Ok(acc / (12.0 * h))
            }
            2 => {
                let mut acc = 0.0;
                for (k, w) in C2 {
                    acc += w * f(&self.flow(g0, x, k * h)?)?;
                }
                Ok(acc / (12.0 * h * h))
            }
            _ => Err(Error::Precondition("derivative order must be 1 or 2".into())),
        }
    }

    fn stencil_low(
        &self,
        f: &dyn Fn(&Matrix<f64>) -> Result<f64>,
        x: &[f64],
        g0: &Matrix<f64>,
        order: usize,
        h: f64,
    ) -> Result<f64> {
        let p = f(&self.flow(g0, x, h)?)?;
        let m = f(&self.flow(g0, x, -h)?)?;
        match order {
            1 => Ok((p - m) / (2.0 * h)),
            2 => Ok((p - 2.0 * f(g0)? + m) / (h * h)),
            _ => Err(Error::Precondition("derivative order must be 1 or 2".into())),
        }
    }

    /// `d^k/dt^k f(g0 exp(tX))` at `t = 0`, `k` in `{1, 2}`.
    pub fn lie_derivative(&self, f: &ScalarField, x: &[f64], g0: &Matrix<f64>, order: usize) -> Result<f64> {
        self.check_point(g0)?;
        if x.iter().all(|v| *v == 0.0) && order >= 1 && order <= 2 {
            return Ok(0.0);
        }
        self.stencil(&|g| f.eval(g), x, g0, order, self.scheme.h1)
    }

    fn check_point(&self, g0: &Matrix<f64>) -> Result<()> {
        let r = self.model.rep_dim();
        if g0.rows() != r || g0.cols() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: g0.rows(),
            });
        }
        Ok(())
    }

    fn l_raw(&self, f: &dyn Fn(&Matrix<f64>) -> Result<f64>, g0: &Matrix<f64>, h: f64) -> Result<f64> {
        self.x.iter().map(|x| self.stencil(f, x, g0, 2, h)).sum()
    }

    /// `L f = sum_i X_i^2 f`
    pub fn operator_l(&self, f: &ScalarField, g0: &Matrix<f64>) -> Result<f64> {
        self.check_point(g0)?;
        self.l_raw(&|g| f.eval(g), g0, self.scheme.h1)
    }

    fn pair_raw(
        &self,
        frame: &[Vector<f64>],
        f: &dyn Fn(&Matrix<f64>) -> Result<f64>,
        g: &dyn Fn(&Matrix<f64>) -> Result<f64>,
        g0: &Matrix<f64>,
        hf: f64,
        hg: f64,
    ) -> Result<f64> {
        let mut acc = 0.0;
        for x in frame {
            acc += self.stencil(f, x, g0, 1, hf)? * self.stencil(g, x, g0, 1, hg)?;
        }
        Ok(acc)
    }

    pub fn gamma(&self, f: &ScalarField, g: &ScalarField, g0: &Matrix<f64>) -> Result<GammaValue> {
        self.check_point(g0)?;
        let h = self.scheme.h1;
        let fg = f.product(g);
        let bag = 0.5
            * (self.operator_l(&fg, g0)?
                - f.eval(g0)? * self.operator_l(g, g0)?
                - g.eval(g0)? * self.operator_l(f, g0)?);
        let sum = self.pair_raw(&self.x, &|p| f.eval(p), &|p| g.eval(p), g0, h, h)?;
        Ok(GammaValue {
            bag,
            sum,
            discrepancy: (bag - sum).abs(),
        })
    }

    /// `Gamma^Z(f, g) = sum_j (Z_j f)(Z_j g)`
    pub fn gamma_z(&self, f: &ScalarField, g: &ScalarField, g0: &Matrix<f64>) -> Result<f64> {
        self.check_point(g0)?;
        let h = self.scheme.h1;
        self.pair_raw(&self.z, &|p| f.eval(p), &|p| g.eval(p), g0, h, h)
    }

    /// `1/2 (L Gamma(f) - 2 Gamma(f, Lf))`
    pub fn gamma2(&self, f: &ScalarField, g0: &Matrix<f64>) -> Result<Gamma2Value> {
        self.second_order_form(f, g0, false)
    }

    /// `1/2 (L Gamma^Z(f) - 2 Gamma^Z(f, Lf))`
    pub fn gamma_z2(&self, f: &ScalarField, g0: &Matrix<f64>) -> Result<Gamma2Value> {
        self.second_order_form(f, g0, true)
    }

    fn second_order_form(&self, f: &ScalarField, g0: &Matrix<f64>, vertical: bool) -> Result<Gamma2Value> {
        self.check_point(g0)?;
        let h1 = self.scheme.h1;
        let frame = if vertical { &self.z } else { &self.x };
        let fe = |p: &Matrix<f64>| f.eval(p);
        let inner_gamma = |p: &Matrix<f64>| self.pair_raw(frame, &fe, &fe, p, h1, h1);
        let lf = |p: &Matrix<f64>| self.l_raw(&fe, p, h1);
        let at = |outer: f64, low: bool| -> Result<f64> {
            let mut l_gamma = 0.0;
            for x in &self.x {
                l_gamma += if low {
                    self.stencil_low(&inner_gamma, x, g0, 2, outer)?
                } else {
                    self.stencil(&inner_gamma, x, g0, 2, outer)?
                };
            }
            let mut cross = 0.0;
            for z in frame {
                let df = self.stencil(&fe, z, g0, 1, h1)?;
                let dl = if low {
                    self.stencil_low(&lf, z, g0, 1, outer)?
                } else {
                    self.stencil(&lf, z, g0, 1, outer)?
                };
                cross += df * dl;
            }
            Ok(0.5 * (l_gamma - 2.0 * cross))
        };
        let outer = self.scheme.outer;
        let value = at(outer, false)?;
        let low = at(outer, true)?;
        let low_half = at(outer / 2.0, true)?;
        let expected = (low - low_half).abs() * 4.0 / 3.0;
        let discrepancy = (value - low).abs();
        let floor = 1e-6 * (1.0 + value.abs());
        Ok(Gamma2Value {
            value,
            monitor: StencilMonitor {
                fourth_order: value,
                second_order: low,
                discrepancy,
                expected,
                roundoff_dominated: discrepancy > 10.0 * expected + floor,
            },
        })
    }

    /// `|Gamma(f, Gamma^Z(f)) - Gamma^Z(f, Gamma(f))|`
    pub fn hypothesis2_check(&self, f: &ScalarField, g0: &Matrix<f64>) -> Result<f64> {
        self.check_point(g0)?;
        let h1 = self.scheme.h1;
        let outer = self.scheme.outer;
        let fe = |p: &Matrix<f64>| f.eval(p);
        let gz = |p: &Matrix<f64>| self.pair_raw(&self.z, &fe, &fe, p, h1, h1);
        let gx = |p: &Matrix<f64>| self.pair_raw(&self.x, &fe, &fe, p, h1, h1);
        let lhs = self.pair_raw(&self.x, &fe, &gz, g0, h1, outer)?;
        let rhs = self.pair_raw(&self.z, &fe, &gx, g0, h1, outer)?;
        Ok((lhs - rhs).abs())
    }

    /// `Gamma2 + nu Gamma2^Z - (Lf)^2 / r - (rho1 - kappa/nu) Gamma(f) - rho2 Gamma^Z(f)`
    pub fn cd_probe(&self, f: &ScalarField, g0: &Matrix<f64>, p: &CdParams) -> Result<f64> {
        p.validate()?;
        let g2 = self.gamma2(f, g0)?.value;
        let gz2 = self.gamma_z2(f, g0)?.value;
        let lf = self.operator_l(f, g0)?;
        let gamma = self.gamma(f, f, g0)?.sum;
        let gz = self.gamma_z(f, f, g0)?;
        let dim_term = if p.r.is_infinite() { 0.0 } else { lf * lf / p.r };
        Ok(g2 + p.nu * gz2 - dim_term - (p.rho1 - p.kappa / p.nu) * gamma - p.rho2 * gz)
    }

    /// `cd_probe` at `exp(point)` for every point and parameter set.
    pub fn cd_sweep(&self, f: &ScalarField, points: &[Vector<f64>], params: &[CdParams]) -> Result<Vec<CdSample>> {
        let mut out = Vec::with_capacity(points.len() * params.len());
        for pt in points {
            let g0 = self.model.exp(pt)?;
            for p in params {
                out.push(CdSample {
                    point: pt.clone(),
                    params: *p,
                    residual: self.cd_probe(f, &g0, p)?,
                });
            }
        }
        Ok(out)
    }
}
