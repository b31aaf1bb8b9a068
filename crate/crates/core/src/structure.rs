//! Left-invariant sub-Riemannian structures: a distribution `D`, a rigging
//! `Dperp` and an ambient inner product with `D` orthogonal to `Dperp`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{dot, is_zero_vec, scale, unit, zeros, Matrix, Subspace, Vector};
use crate::scalar::{Rational, Scalar, DEFAULT_TOL};
use crate::tensor::Tensor3;

#[derive(Debug, Clone, PartialEq)]
pub struct SubRiemannianStructure<S> {
    name: String,
    algebra: LieAlgebra<S>,
    d: Subspace<S>,
    dperp: Subspace<S>,
    gram: Matrix<S>,
    /// Inverse of `[D | Dperp]`; maps a vector to its split coordinates.
    split_inv: Matrix<S>,
    tol: f64,
}

impl<S: Scalar> SubRiemannianStructure<S> {
    /// `rigging = None` takes the `gram`-orthogonal complement of `D`.
    pub fn new(
        name: impl Into<String>,
        algebra: LieAlgebra<S>,
        distribution: &[Vector<S>],
        rigging: Option<&[Vector<S>]>,
        gram: Matrix<S>,
        tol: f64,
    ) -> Result<Self> {
        let n = algebra.dim();
        let name = name.into();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.rows(),
            });
        }
        if !gram.is_positive_definite(tol) {
            return Err(Error::NotPositiveDefinite(format!("{name}: ambient Gram matrix")));
        }
        let d = Subspace::span(n, distribution)?;
        if d.dim() != distribution.len() {
            return Err(Error::InvalidStructure(format!(
                "{name}: distribution vectors are linearly dependent"
            )));
        }
        if d.dim() < 2 {
            return Err(Error::InvalidStructure(format!(
                "{name}: distribution must have rank at least 2"
            )));
        }
        let dperp = match rigging {
            Some(r) => {
                let s = Subspace::span(n, r)?;
                if s.dim() != r.len() {
                    return Err(Error::InvalidStructure(format!(
                        "{name}: rigging vectors are linearly dependent"
                    )));
                }
                s
            }
            None => d.orthogonal_complement(&gram),
        };
        if d.dim() + dperp.dim() != n {
            return Err(Error::InvalidStructure(format!(
                "{name}: dim D + dim Dperp = {} + {} != {n}",
                d.dim(),
                dperp.dim()
            )));
        }
        for x in d.basis() {
            for w in dperp.basis() {
                if !gram.bilinear(x, w).is_zero_tol(tol) {
                    return Err(Error::InvalidStructure(format!(
                        "{name}: rigging is not orthogonal to the distribution"
                    )));
                }
            }
        }
        let mut cols = d.basis().to_vec();
        cols.extend(dperp.basis().iter().cloned());
        let split_inv = Matrix::from_cols(n, &cols)
            .inverse()
            .map_err(|_| Error::InvalidStructure(format!("{name}: D + Dperp is not all of g")))?;
        Ok(Self {
            name,
            algebra,
            d,
            dperp,
            gram,
            split_inv,
            tol,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.algebra.dim()
    }

    /// Rank of the distribution.
    pub fn m(&self) -> usize {
        self.d.dim()
    }

    pub fn distribution(&self) -> &Subspace<S> {
        &self.d
    }

    pub fn rigging(&self) -> &Subspace<S> {
        &self.dperp
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        self.gram.bilinear(x, y)
    }

    /// Coordinates of `v` against `[D basis | Dperp basis]`.
    pub fn split_coordinates(&self, v: &[S]) -> Vector<S> {
        self.split_inv.mul_vec(v)
    }

    /// `(Hv, Vv)`
    pub fn split(&self, v: &[S]) -> (Vector<S>, Vector<S>) {
        let c = self.split_coordinates(v);
        let m = self.m();
        let mut h = zeros(self.n());
        let mut vert = zeros(self.n());
        for (i, b) in self.d.basis().iter().enumerate() {
            crate::linalg::axpy(&mut h, &c[i], b);
        }
        for (i, b) in self.dperp.basis().iter().enumerate() {
            crate::linalg::axpy(&mut vert, &c[m + i], b);
        }
        (h, vert)
    }

    pub fn horizontal(&self, v: &[S]) -> Vector<S> {
        self.split(v).0
    }

    pub fn vertical(&self, v: &[S]) -> Vector<S> {
        self.split(v).1
    }

    pub fn is_bracket_generating(&self) -> bool {
        self.algebra.derived_flag(&self.d).generating
    }

    /// Gram-Schmidt over the `D` basis, then over the rigging basis, in input
    /// order. Exact mode fails with [`Error::IrrationalNorm`] when a norm is
    /// not rational.
    pub fn adapted_frame(&self) -> Result<OrthonormalFrame<S>> {
        let mut vectors: Vec<Vector<S>> = Vec::with_capacity(self.n());
        for block in [self.d.basis(), self.dperp.basis()] {
            let start = vectors.len();
            for v in block {
                let mut w = v.clone();
                for f in &vectors[start..] {
                    let c = self.inner(&w, f);
                    crate::linalg::axpy(&mut w, &(-c), f);
                }
                let norm2 = self.inner(&w, &w);
                if norm2 <= S::zero() || norm2.is_zero_tol(self.tol) {
                    return Err(Error::NotPositiveDefinite(format!(
                        "{}: nonpositive pivot in Gram-Schmidt",
                        self.name
                    )));
                }
                let norm = norm2.sqrt_exact().ok_or_else(|| {
                    Error::IrrationalNorm(format!("{}: squared norm {norm2}", self.name))
                })?;
                vectors.push(scale(&w, &(S::one() / norm)));
            }
        }
        Ok(OrthonormalFrame {
            vectors,
            m: self.m(),
        })
    }

    /// Structure constants `c_ijk = <[f_i, f_j], f_k>` in the adapted frame.
    pub fn frame_constants(&self) -> Result<FrameData<S>> {
        let frame = self.adapted_frame()?;
        let c = self
            .algebra
            .structure_constants_metric(&frame, &self.gram, self.tol)?;
        Ok(FrameData { frame, c })
    }

    /// Rigging conditions 1), 2), 3) with violation witnesses.
    pub fn rigging_conditions(&self) -> RiggingReport {
        let n = self.n();
        let m = self.m();
        let full: Vec<Vector<S>> = (0..n).map(|i| unit(n, i)).collect();
        let mut report = RiggingReport {
            cond1: true,
            cond2: true,
            cond2_ideal: true,
            cond3: true,
            witnesses: Vec::new(),
        };
        let record = |report: &mut RiggingReport, condition: &str, w: usize, x: usize, comp: usize, val: &S| {
            let flag = match condition {
                "cond1" => &mut report.cond1,
                "cond2" => &mut report.cond2,
                "cond2_ideal" => &mut report.cond2_ideal,
                _ => &mut report.cond3,
            };
            if *flag {
                *flag = false;
                report.witnesses.push(RiggingWitness {
                    condition: condition.to_string(),
                    w: w + 1,
                    x: x + 1,
                    component: comp + 1,
                    value: val.to_report_string(),
                });
            }
        };
        for (wi, w) in self.dperp.basis().iter().enumerate() {
            for (xi, x) in self.d.basis().iter().enumerate() {
                let c = self.split_coordinates(&self.algebra.bracket_unchecked(w, x));
                for i in m..n {
                    if !c[i].is_zero_tol(self.tol) {
                        record(&mut report, "cond1", wi, xi, i, &c[i]);
                    }
                }
                for i in 0..m {
                    if !c[i].is_zero_tol(self.tol) {
                        record(&mut report, "cond2", wi, xi, i, &c[i]);
                    }
                }
            }
            for (xi, x) in full.iter().enumerate() {
                let c = self.split_coordinates(&self.algebra.bracket_unchecked(w, x));
                for i in 0..m {
                    if !c[i].is_zero_tol(self.tol) {
                        record(&mut report, "cond2_ideal", wi, xi, i, &c[i]);
                    }
                }
            }
        }
        for (wi, w) in full.iter().enumerate() {
            for (xi, x) in full.iter().enumerate().skip(wi + 1) {
                let c = self.split_coordinates(&self.algebra.bracket_unchecked(w, x));
                for i in 0..m {
                    if !c[i].is_zero_tol(self.tol) {
                        record(&mut report, "cond3", wi, xi, i, &c[i]);
                    }
                }
            }
        }
        report
    }

    /// Contact test for a corank-one distribution in odd dimension.
    pub fn contact_check(&self) -> Result<ContactReport<S>> {
        let n = self.n();
        let m = self.m();
        if m + 1 != n {
            return Err(Error::Precondition(format!(
                "contact check needs corank 1, got rank {m} in dimension {n}"
            )));
        }
        if n % 2 == 0 {
            return Err(Error::Precondition(format!("contact check needs odd dimension, got {n}")));
        }
        let omega = annihilator(&self.algebra, &self.d)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Inconsistency("corank-1 distribution without annihilator".into()))?;
        let omega = normalize_first_positive(&omega, self.tol);
        let domega = Matrix::from_fn(n, n, |i, j| {
            -dot(&omega, &self.algebra.basis_bracket(i, j))
        });
        let db = self.d.basis();
        let domega_d = Matrix::from_fn(m, m, |a, b| {
            -dot(&omega, &self.algebra.bracket_unchecked(&db[a], &db[b]))
        });
        let is_contact = domega_d.rank() == m;
        let mut reeb = None;
        let mut rigging_is_reeb = None;
        if is_contact {
            let kernel = domega.null_space();
            if kernel.len() != 1 {
                return Err(Error::Inconsistency(format!(
                    "d omega has kernel of dimension {} on a contact distribution",
                    kernel.len()
                )));
            }
            let k = &kernel[0];
            let wk = dot(&omega, k);
            if wk.is_zero_tol(self.tol) {
                return Err(Error::Inconsistency("Reeb candidate lies in D".into()));
            }
            let r = scale(k, &(S::one() / wk));
            rigging_is_reeb = Some(self.dperp.contains(&r));
            reeb = Some(r);
        }
        Ok(ContactReport {
            is_contact,
            omega,
            reeb,
            domega_on_d: domega_d,
            domega,
            rigging_is_reeb,
        })
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> SubRiemannianStructure<T> {
        let mapv = |v: &Vector<S>| v.iter().map(f).collect::<Vector<T>>();
        let d: Vec<Vector<T>> = self.d.basis().iter().map(mapv).collect();
        let r: Vec<Vector<T>> = self.dperp.basis().iter().map(mapv).collect();
        let n = self.n();
        SubRiemannianStructure {
            name: self.name.clone(),
            algebra: self.algebra.map_scalars(f),
            d: Subspace::span(n, &d).expect("same ambient"),
            dperp: Subspace::span(n, &r).expect("same ambient"),
            gram: self.gram.map(f),
            split_inv: self.split_inv.map(f),
            tol: self.tol,
        }
    }

    pub fn to_f64(&self) -> SubRiemannianStructure<f64> {
        self.map_scalars(Scalar::to_f64)
    }
}

impl SubRiemannianStructure<Rational> {
    /// Frame constants in exact arithmetic when every norm is rational,
    /// otherwise in floats.
    pub fn frame_constants_any(&self) -> Result<AnyFrameData> {
        match self.frame_constants() {
            Ok(fd) => Ok(AnyFrameData::Exact(fd)),
            Err(Error::IrrationalNorm(_)) => Ok(AnyFrameData::Float(self.to_f64().frame_constants()?)),
            Err(e) => Err(e),
        }
    }
}

/// Scales a covector so its first nonzero coordinate is 1.
fn normalize_first_positive<S: Scalar>(v: &[S], tol: f64) -> Vector<S> {
    match v.iter().find(|x| !x.is_zero_tol(tol)) {
        Some(lead) => scale(v, &(S::one() / lead.clone())),
        None => v.to_vec(),
    }
}

/// Adapted orthonormal frame: the first `m` vectors span `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame<S> {
    vectors: Vec<Vector<S>>,
    m: usize,
}

impl<S: Scalar> OrthonormalFrame<S> {
    /// Wraps explicit vectors; orthonormality is checked by the consumers.
    pub fn from_vectors(vectors: Vec<Vector<S>>, m: usize) -> Self {
        Self { vectors, m }
    }

    pub fn vectors(&self) -> &[Vector<S>] {
        &self.vectors
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Columns are the frame vectors.
    pub fn matrix(&self) -> Matrix<S> {
        let n = self.vectors.first().map_or(0, Vec::len);
        Matrix::from_cols(n, &self.vectors)
    }

    pub fn check_orthonormal(&self, gram: &Matrix<S>, tol: f64) -> Result<()> {
        let n = gram.rows();
        if self.vectors.len() != n || self.vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.vectors.len(),
            });
        }
        let mut worst = S::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { S::one() } else { S::zero() };
                let d = (gram.bilinear(&self.vectors[i], &self.vectors[j]) - target).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        if !worst.is_zero_tol(tol) {
            return Err(Error::NotOrthonormal(worst.to_report_string()));
        }
        Ok(())
    }
}

/// Adapted frame together with its structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameData<S> {
    pub frame: OrthonormalFrame<S>,
    /// `c[(i, j, k)] = <[f_i, f_j], f_k>`
    pub c: Tensor3<S>,
}

impl<S: Scalar> FrameData<S> {
    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn m(&self) -> usize {
        self.frame.m()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyFrameData {
    Exact(FrameData<Rational>),
    Float(FrameData<f64>),
}

/// Basis of the covectors vanishing on `d`.
pub fn annihilator<S: Scalar>(algebra: &LieAlgebra<S>, d: &Subspace<S>) -> Vec<Vector<S>> {
    if d.dim() == 0 {
        return (0..algebra.dim()).map(|i| unit(algebra.dim(), i)).collect();
    }
    Matrix::from_rows(d.basis()).null_space()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiggingReport {
    /// `[Dperp, D] in D`
    pub cond1: bool,
    /// `[Dperp, D] in Dperp`
    pub cond2: bool,
    /// `[Dperp, g] in Dperp`
    pub cond2_ideal: bool,
    /// `[g, g] in Dperp`
    pub cond3: bool,
    pub witnesses: Vec<RiggingWitness>,
}

/// First violation found for a condition; indices are 1-based. `w` indexes
/// the rigging basis (the algebra basis for cond3), `x` the distribution
/// basis (the algebra basis for cond2_ideal and cond3), `component` the
/// split coordinate that fails to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiggingWitness {
    pub condition: String,
    pub w: usize,
    pub x: usize,
    pub component: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactReport<S> {
    pub is_contact: bool,
    /// Annihilator of `D`, first nonzero coordinate equal to 1.
    pub omega: Vector<S>,
    pub reeb: Option<Vector<S>>,
    /// `d omega` on the `D` basis.
    pub domega_on_d: Matrix<S>,
    /// `d omega(e_i, e_j) = -omega([e_i, e_j])`
    pub domega: Matrix<S>,
    /// Whether the rigging is spanned by the Reeb field.
    pub rigging_is_reeb: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification3d<S> {
    NoNonholonomicRank2,
    /// A bracket-generating plane `ker omega`.
    ContactAdmitting { witness: Subspace<S>, omega: Vector<S> },
}

impl<S> Classification3d<S> {
    pub fn label(&self) -> &'static str {
        match self {
            Classification3d::NoNonholonomicRank2 => "no_nonholonomic_rank2",
            Classification3d::ContactAdmitting { .. } => "contact_admitting",
        }
    }
}

/// True when some `x` outside `[g, g]` acts on a two-dimensional abelian
/// `[g, g]` as a nonzero multiple of the identity.
fn is_hyperbolic_plane_type<S: Scalar>(algebra: &LieAlgebra<S>, tol: f64) -> bool {
    let derived = algebra.derived_algebra();
    if derived.dim() != 2 {
        return false;
    }
    let (y1, y2) = (&derived.basis()[0], &derived.basis()[1]);
    if !is_zero_vec(&algebra.bracket_unchecked(y1, y2), tol) {
        return false;
    }
    let n = algebra.dim();
    let Some(x) = (0..n).map(|i| unit::<S>(n, i)).find(|e| !derived.contains(e)) else {
        return false;
    };
    let (Ok(a1), Ok(a2)) = (
        derived.coordinates(&algebra.bracket_unchecked(&x, y1)),
        derived.coordinates(&algebra.bracket_unchecked(&x, y2)),
    ) else {
        return false;
    };
    a1[1].is_zero_tol(tol)
        && a2[0].is_zero_tol(tol)
        && (a1[0].clone() - a2[1].clone()).is_zero_tol(tol)
        && !a1[0].is_zero_tol(tol)
}

/// Whether a three-dimensional algebra carries a bracket-generating plane.
pub fn classify_3d<S: Scalar>(algebra: &LieAlgebra<S>) -> Result<Classification3d<S>> {
    if algebra.dim() != 3 {
        return Err(Error::Precondition(format!(
            "classify_3d needs dimension 3, got {}",
            algebra.dim()
        )));
    }
    if algebra.is_abelian() || is_hyperbolic_plane_type(algebra, DEFAULT_TOL) {
        return Ok(Classification3d::NoNonholonomicRank2);
    }
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                if a == 0 && b == 0 && c == 0 {
                    continue;
                }
                let omega = vec![S::from_i64(a), S::from_i64(b), S::from_i64(c)];
                let plane = Subspace::span(3, &Matrix::from_rows(&[omega.clone()]).null_space())?;
                if algebra.derived_flag(&plane).generating {
                    return Ok(Classification3d::ContactAdmitting { witness: plane, omega });
                }
            }
        }
    }
    Err(Error::Inconsistency(format!(
        "{}: no bracket-generating plane found on the search grid",
        algebra.name()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn v(xs: &[i64]) -> Vector<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn heis3() -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets("heis3", 3, &[(0, 1, vec![(2, q(1))])]).unwrap()
    }

    fn so3() -> LieAlgebra<Rational> {
        LieAlgebra::from_brackets(
            "so3",
            3,
            &[(0, 1, vec![(2, q(1))]), (1, 2, vec![(0, q(1))]), (0, 2, vec![(1, q(-1))])],
        )
        .unwrap()
    }

    fn abelian3() -> LieAlgebra<Rational> {
        LieAlgebra::new("r3", Tensor3::cube(3), 0.0).unwrap()
    }

    fn plane12(a: LieAlgebra<Rational>, gram: Matrix<Rational>) -> SubRiemannianStructure<Rational> {
        SubRiemannianStructure::new("s", a, &[v(&[1, 0, 0]), v(&[0, 1, 0])], None, gram, DEFAULT_TOL)
            .unwrap()
    }

    #[test]
    fn frames() {
        let s = plane12(heis3(), Matrix::identity(3));
        let f = s.adapted_frame().unwrap();
        assert_eq!(f.vectors(), &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);

        let s = plane12(heis3(), Matrix::diagonal(&[q(4), q(1), q(1)]));
        let f = s.adapted_frame().unwrap();
        assert_eq!(f.vectors()[0], vec![Rational::from_ratio(1, 2), q(0), q(0)]);
        assert_eq!(f.vectors()[1], v(&[0, 1, 0]));

        let s = plane12(heis3(), Matrix::diagonal(&[q(2), q(1), q(1)]));
        assert!(matches!(s.adapted_frame(), Err(Error::IrrationalNorm(_))));
        assert!(matches!(s.frame_constants_any(), Ok(AnyFrameData::Float(_))));
    }

    #[test]
    fn rejects_bad_structures() {
        let bad_gram = Matrix::diagonal(&[q(1), q(-1), q(1)]);
        assert!(SubRiemannianStructure::new("s", heis3(), &[v(&[1, 0, 0]), v(&[0, 1, 0])], None, bad_gram, 1e-9)
            .is_err());
        let skew_rigging = [v(&[1, 0, 1])];
        assert!(SubRiemannianStructure::new(
            "s",
            heis3(),
            &[v(&[1, 0, 0]), v(&[0, 1, 0])],
            Some(&skew_rigging),
            Matrix::identity(3),
            1e-9
        )
        .is_err());
    }

    #[test]
    fn heis3_constants() {
        let s = plane12(heis3(), Matrix::identity(3));
        let fd = s.frame_constants().unwrap();
        let nz = fd.c.nonzero_entries(0.0);
        assert_eq!(nz.len(), 2);
        assert_eq!(fd.c[(0, 1, 2)], q(1));
        assert_eq!(fd.c[(1, 0, 2)], q(-1));
    }

    #[test]
    fn annihilators() {
        let a = annihilator(&heis3(), &Subspace::coordinate(3, &[0, 1]));
        assert_eq!(a, vec![v(&[0, 0, 1])]);
        let a = annihilator(&abelian3(), &Subspace::coordinate(3, &[0]));
        assert_eq!(a, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn rigging_examples() {
        let r = plane12(heis3(), Matrix::identity(3)).rigging_conditions();
        assert!(r.cond1 && r.cond2 && r.cond2_ideal && r.cond3);
        assert!(r.witnesses.is_empty());

        let r = plane12(so3(), Matrix::identity(3)).rigging_conditions();
        assert!(r.cond1);
        assert!(!r.cond2);
        assert!(!r.cond3);
        assert_eq!(r.witnesses.iter().filter(|w| w.condition == "cond3").count(), 1);
    }

    #[test]
    fn contact_examples() {
        let c = plane12(heis3(), Matrix::identity(3)).contact_check().unwrap();
        assert!(c.is_contact);
        assert_eq!(c.reeb, Some(v(&[0, 0, 1])));
        assert_eq!(c.rigging_is_reeb, Some(true));
        assert_eq!(c.domega_on_d[(0, 1)], q(-1));

        let c = plane12(abelian3(), Matrix::identity(3)).contact_check().unwrap();
        assert!(!c.is_contact);
        assert!(c.reeb.is_none());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_3d(&abelian3()).unwrap(), Classification3d::NoNonholonomicRank2);
        let hyp = LieAlgebra::from_brackets(
            "hyp",
            3,
            &[(0, 1, vec![(1, q(1))]), (0, 2, vec![(2, q(1))])],
        )
        .unwrap();
        assert_eq!(classify_3d(&hyp).unwrap(), Classification3d::NoNonholonomicRank2);
        for a in [heis3(), so3()] {
            let c = classify_3d(&a).unwrap();
            let Classification3d::ContactAdmitting { witness, .. } = c else {
                panic!("expected a witness");
            };
            assert!(a.derived_flag(&witness).generating);
        }
        // [e1,e2]=e2, [e1,e3]=2 e3 is not of hyperbolic-plane type
        let other = LieAlgebra::from_brackets(
            "r3_2",
            3,
            &[(0, 1, vec![(1, q(1))]), (0, 2, vec![(2, q(2))])],
        )
        .unwrap();
        assert_eq!(classify_3d(&other).unwrap().label(), "contact_admitting");
    }
}
