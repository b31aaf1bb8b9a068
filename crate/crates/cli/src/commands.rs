use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use subriemann::carre::{Carre, CdParams, FdScheme};
use subriemann::catalog::{self, all_builtins, builtin, random_structure, CatalogEntry, ExpectedValue, RandomFamily, BUILTIN_IDS};
use subriemann::geodesics::{
    abnormal_covector_search, convergence_study, integrate, ControlMode, Hamiltonian, DEFAULT_ABNORMAL_TIMES,
};
use subriemann::linalg::unit;
use subriemann::scalar::parse_rational;
use subriemann::solovev::{
    ad_invariance_witness, biinvariant_tensor, gauss_route, induced_torsion_route, milnor_closed_form,
    submersion_base_curvature, SolovevPipeline,
};
use subriemann::structure::{classify_3d, Classification3d};
use subriemann::wagner::{wagner, Alternation};
use subriemann::{Error, Rational, Scalar, SubRiemannianStructure};

use crate::field::parse_field;
use crate::report::{floats, matrix, object, s, tensor4_entries, vector, vectors};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub input: Option<PathBuf>,
    pub builtin: Option<String>,
    pub tol: f64,
    pub seed: u64,
    pub float: bool,
}

pub struct Outcome {
    pub results: Value,
    pub diagnostics: Value,
    /// Text hashed into `input_digest`.
    pub digest_source: String,
    /// False when a check ran but failed.
    pub ok: bool,
}

impl Ctx {
    fn entry(&self) -> CliResult<CatalogEntry> {
        match (&self.input, &self.builtin) {
            (Some(p), None) => Ok(catalog::load(p)?),
            (None, Some(id)) => Ok(builtin(id)?),
            (Some(_), Some(_)) => Err(CliError::Input("give either --input or --builtin, not both".into())),
            (None, None) => Err(CliError::Input("one of --input PATH or --builtin ID is required".into())),
        }
    }

    fn diagnostics(&self, mode: &Mode, extra: Vec<(&str, Value)>) -> Value {
        let mut pairs = vec![("numeric_mode", json!(mode.label())), ("seed", json!(self.seed))];
        match mode {
            Mode::Exact => pairs.push(("tol", json!(0.0))),
            Mode::Float { fallback } => {
                pairs.push(("tol", json!(self.tol)));
                if let Some(why) = fallback {
                    pairs.push(("fallback", json!(why)));
                }
            }
        }
        pairs.extend(extra);
        object(pairs)
    }
}

#[derive(Debug, Clone)]
enum Mode {
    Exact,
    Float { fallback: Option<String> },
}

impl Mode {
    fn label(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float { .. } => "float",
        }
    }
}

/// Exact arithmetic unless `--float` is set or a frame needs an irrational
/// square root.
fn exact_or_float<R>(
    s: &SubRiemannianStructure<Rational>,
    ctx: &Ctx,
    exact: impl FnOnce(&SubRiemannianStructure<Rational>, f64) -> subriemann::Result<R>,
    float: impl FnOnce(&SubRiemannianStructure<f64>, f64) -> subriemann::Result<R>,
) -> CliResult<(R, Mode)> {
    if ctx.float {
        return Ok((float(&s.to_f64(), ctx.tol)?, Mode::Float { fallback: None }));
    }
    match exact(s, 0.0) {
        Ok(r) => Ok((r, Mode::Exact)),
        Err(Error::IrrationalNorm(why)) => Ok((
            float(&s.to_f64(), ctx.tol)?,
            Mode::Float { fallback: Some(format!("irrational norm: {why}")) },
        )),
        Err(e) => Err(e.into()),
    }
}

fn outcome(entry: &CatalogEntry, results: Value, diagnostics: Value, ok: bool) -> Outcome {
    Outcome {
        results,
        diagnostics,
        digest_source: entry.to_json(),
        ok,
    }
}

fn agrees<S: Scalar>(computed: &S, expected: &str, tol: f64) -> bool {
    parse_rational(expected)
        .map(|r| (computed.clone() - S::from_rational(&r)).abs().is_zero_tol(tol))
        .unwrap_or(false)
}

fn agrees_list<S: Scalar>(computed: &[S], expected: &str, tol: f64) -> bool {
    let parts: Vec<&str> = expected.split(',').map(str::trim).collect();
    parts.len() == computed.len() && computed.iter().zip(parts).all(|(c, e)| agrees(c, e, tol))
}

fn join<S: Scalar>(v: &[S]) -> String {
    v.iter().map(Scalar::to_report_string).collect::<Vec<_>>().join(",")
}

fn axis_label<S: Scalar>(v: &[S], tol: f64) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero_tol(tol)).collect();
    if nz.len() == 1 {
        format!("e{}", nz[0] + 1)
    } else {
        join(v)
    }
}

// ---------------------------------------------------------------- validate

fn expected_check<S: Scalar>(
    s: &SubRiemannianStructure<S>,
    p: Option<&SolovevPipeline<S>>,
    key: &str,
    want: &str,
    tol: f64,
) -> subriemann::Result<(Option<String>, Option<bool>)> {
    let n = s.n();
    let plane = || (unit::<S>(n, 0), unit::<S>(n, 1));
    let need_p = || p.ok_or_else(|| Error::Precondition(format!("{key}: no curvature pipeline")));
    Ok(match key {
        "curvature" => {
            let zero = need_p()?.report().is_zero(tol);
            (Some(if zero { "0" } else { "nonzero" }.to_string()), Some(zero == (want == "0")))
        }
        "sectional" => {
            let r = need_p()?.report();
            let k = r.sectional_of(1, 2).cloned();
            (k.as_ref().map(Scalar::to_report_string), Some(k.is_some_and(|k| agrees(&k, want, tol))))
        }
        "ricci" => {
            let r = need_p()?.report();
            (Some(join(&r.ricci)), Some(agrees_list(&r.ricci, want, tol)))
        }
        "scalar" => {
            let r = need_p()?.report();
            (Some(r.scalar.to_report_string()), Some(agrees(&r.scalar, want, tol)))
        }
        "ambient_sectional" => {
            let (u, v) = plane();
            let k = need_p()?.riemannian_sectional(&u, &v)?;
            (Some(k.to_report_string()), Some(agrees(&k, want, tol)))
        }
        "base_sectional" => {
            let (u, v) = plane();
            let chk = submersion_base_curvature(need_p()?, &u, &v)?;
            let ok = chk.preconditions_hold && agrees(&chk.base_sectional, want, tol);
            (Some(chk.base_sectional.to_report_string()), Some(ok))
        }
        "growth_vector" => {
            let g = s.algebra().derived_flag(s.distribution()).growth_vector;
            let text = g.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let ok = text == want.replace(' ', "");
            (Some(text), Some(ok))
        }
        "classify_3d" => {
            let label = classify_3d(s.algebra())?.label().to_string();
            let ok = label == want;
            (Some(label), Some(ok))
        }
        "reeb" => {
            let c = s.contact_check()?;
            let label = c.reeb.as_ref().map(|r| axis_label(r, tol));
            let ok = label.as_deref() == Some(want);
            (label, Some(ok))
        }
        _ => (None, None),
    })
}

fn validate_structure<S: Scalar>(
    s: &SubRiemannianStructure<S>,
    expected: &BTreeMap<String, ExpectedValue>,
    tol: f64,
) -> subriemann::Result<(Value, bool)> {
    let n = s.n();
    let jacobi = s.algebra().validate(tol).is_ok();
    let spd = s.gram().is_positive_definite(tol);
    let splitting = s.m() + s.rigging().dim() == n
        && s.distribution().sum(s.rigging()).map(|x| x.dim() == n).unwrap_or(false);
    let frame = s.adapted_frame()?;
    let orthonormal = frame.check_orthonormal(s.gram(), tol).is_ok();
    let flag = s.algebra().derived_flag(s.distribution());
    let p = match s.frame_constants() {
        Ok(fd) => Some(SolovevPipeline::new(&fd, tol)?),
        Err(e @ Error::IrrationalNorm(_)) => return Err(e),
        Err(_) => None,
    };
    let mut exp_out = serde_json::Map::new();
    let mut all = jacobi && spd && splitting && orthonormal;
    for (key, ev) in expected {
        let (computed, ok) = match expected_check(s, p.as_ref(), key, &ev.value, tol) {
            Ok(x) => x,
            Err(e @ Error::IrrationalNorm(_)) => return Err(e),
            Err(e) => (Some(format!("error: {e}")), Some(false)),
        };
        if ok == Some(false) {
            all = false;
        }
        exp_out.insert(
            key.clone(),
            json!({
                "expected": ev.value,
                "origin": ev.origin,
                "computed": computed,
                "ok": ok.map_or(json!("unchecked"), Value::Bool),
            }),
        );
    }
    let results = object(vec![
        ("name", json!(s.name())),
        ("dimension", json!(n)),
        ("rank", json!(s.m())),
        (
            "checks",
            object(vec![
                ("jacobi", json!(jacobi)),
                ("metric_positive_definite", json!(spd)),
                ("splitting", json!(splitting)),
                ("frame_orthonormal", json!(orthonormal)),
            ]),
        ),
        ("bracket_generating", json!(flag.generating)),
        ("growth_vector", json!(flag.growth_vector)),
        ("frame", vectors(frame.vectors())),
        ("expected", Value::Object(exp_out)),
        ("valid", json!(all)),
    ]);
    Ok((results, all))
}

pub fn validate(ctx: &Ctx) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let ((mut results, ok), mode) = exact_or_float(
        &entry.structure,
        ctx,
        |s, t| validate_structure(s, &entry.expected, t),
        |s, t| validate_structure(s, &entry.expected, t),
    )?;
    results["matrix_model"] = match &entry.matrix_model {
        Some(m) => json!({"rep_dim": m.rep_dim(), "commutators_checked": true}),
        None => Value::Null,
    };
    let diag = ctx.diagnostics(&mode, vec![]);
    Ok(outcome(&entry, results, diag, ok))
}

// ---------------------------------------------------------------- curvature

fn pair_values<S: Scalar>(pairs: &[subriemann::solovev::PairValue<S>]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|p| json!({"pair": [p.pair.0, p.pair.1], "value": s(&p.value)}))
            .collect(),
    )
}

fn curvature_structure<S: Scalar>(
    st: &SubRiemannianStructure<S>,
    tol: f64,
    plane: Option<(usize, usize)>,
) -> subriemann::Result<Value> {
    let fd = st.frame_constants()?;
    let p = SolovevPipeline::new(&fd, tol)?;
    let (n, m) = (p.n(), p.m());
    let r = p.report();

    let closed = milnor_closed_form(&fd.c, m);
    let mut closed_gap = S::zero();
    for (a, b) in closed.iter().zip(&r.sectional) {
        let d = (a.value.clone() - b.value.clone()).abs();
        if d.to_f64() > closed_gap.to_f64() {
            closed_gap = d;
        }
    }
    let route_gap = induced_torsion_route(&p.induced_curvature, &p.torsion, m)
        .max_abs_diff(&gauss_route(&p.riemann, &p.h, &p.h_minus, m));
    let bi = match ad_invariance_witness(&p.c, tol) {
        Some((i, j, k)) => json!({"applicable": false, "witness": [i, j, k]}),
        None => {
            let d = biinvariant_tensor(&p.c, m, tol)?.max_abs_diff(&p.tensor);
            json!({"applicable": true, "max_diff": s(&d), "agrees": d.is_zero_tol(tol)})
        }
    };

    let mut out = object(vec![
        ("dimension", json!(n)),
        ("rank", json!(m)),
        ("frame", vectors(fd.frame.vectors())),
        ("structure_constants", json!(fd.c.nonzero_entries(tol))),
        ("pairs", pair_values(&r.sectional)),
        ("ricci", vector(&r.ricci)),
        ("scalar", s(&r.scalar)),
        ("sectional_torsion", pair_values(&r.sectional_torsion)),
        ("tensor", tensor4_entries(&r.tensor, tol)),
        ("zero", json!(r.is_zero(tol))),
        ("totally_geodesic", json!(p.is_totally_geodesic())),
        ("involutive", json!(p.is_involutive())),
        (
            "checks",
            object(vec![
                ("closed_form_max_diff", s(&closed_gap)),
                ("closed_form_agrees", json!(closed_gap.is_zero_tol(tol) && closed.len() == r.sectional.len())),
                ("route_max_diff", s(&route_gap)),
                ("routes_agree", json!(route_gap.is_zero_tol(tol))),
                ("biinvariant", bi),
            ]),
        ),
    ]);
    if let Some((a, b)) = plane {
        if a == b || a == 0 || b == 0 || a > m || b > m {
            return Err(Error::Precondition(format!(
                "--plane needs two distinct frame indices in 1..={m}, got {a},{b}"
            )));
        }
        let k = r.sectional_of(a, b).cloned().expect("pair in range");
        let (u, v) = (unit::<S>(n, a - 1), unit::<S>(n, b - 1));
        let chk = submersion_base_curvature(&p, &u, &v)?;
        out["plane"] = json!([a, b]);
        out["sectional"] = s(&k);
        out["ambient_sectional"] = s(&chk.ambient_sectional);
        out["submersion"] = json!({
            "preconditions_hold": chk.preconditions_hold,
            "failure": chk.failure,
            "base_sectional": s(&chk.base_sectional),
            "equal": chk.equal,
        });
    }
    Ok(out)
}

pub fn curvature(ctx: &Ctx, plane: Option<(usize, usize)>) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let (results, mode) = exact_or_float(
        &entry.structure,
        ctx,
        |st, t| curvature_structure(st, t, plane),
        |st, t| curvature_structure(st, t, plane),
    )?;
    let diag = ctx.diagnostics(&mode, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

// ---------------------------------------------------------------- wagner

fn wagner_structure<S: Scalar>(
    st: &SubRiemannianStructure<S>,
    tol: f64,
    alternation: Alternation,
) -> subriemann::Result<Value> {
    let w = wagner(st, alternation)?;
    let f = &w.decomposition;
    let stages: Vec<Value> = w
        .stages
        .iter()
        .map(|sg| {
            json!({
                "stage": sg.stage,
                "shape": sg.tensor.dims(),
                "tensor": tensor4_entries(&sg.tensor, tol),
                "zero": sg.tensor.is_zero(tol),
            })
        })
        .collect();
    let spd: Vec<bool> = (0..f.dims.len()).map(|i| f.metric_on(i).is_positive_definite(tol)).collect();
    let wedge_spd: Vec<bool> = f.wedge_grams.iter().map(|g| g.is_positive_definite(tol)).collect();
    let solovev = match st.frame_constants() {
        Ok(fd) => {
            let p = SolovevPipeline::new(&fd, tol)?;
            if p.is_totally_geodesic() && st.m() < st.n() {
                let d = w.schouten.max_abs_diff(&p.tensor);
                json!({"totally_geodesic": true, "schouten_max_diff": s(&d), "schouten_equals_curvature": d.is_zero_tol(tol)})
            } else {
                json!({"totally_geodesic": false})
            }
        }
        Err(e) => json!({"unavailable": e.to_string()}),
    };
    Ok(object(vec![
        ("growth_vector", json!(f.dims)),
        ("adapted_basis", vectors(&f.basis)),
        ("metric", matrix(&f.ambient_metric()?)),
        ("metric_positive_definite", json!(spd)),
        ("wedge_grams_positive_definite", json!(wedge_spd)),
        ("alternation", json!(w.alternation)),
        ("stages", Value::Array(stages)),
        ("schouten", tensor4_entries(&w.schouten, tol)),
        ("absolute_parallelism", json!(w.absolute_parallelism(tol))),
        ("domain_violations", json!(w.domain_violations)),
        ("solovev_comparison", solovev),
    ]))
}

pub fn wagner_cmd(ctx: &Ctx, alternation: Alternation) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let (results, mode) = exact_or_float(
        &entry.structure,
        ctx,
        |st, t| wagner_structure(st, t, alternation),
        |st, t| wagner_structure(st, t, alternation),
    )?;
    let diag = ctx.diagnostics(&mode, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

// ---------------------------------------------------------------- rigging, contact, classify3d

pub fn rigging(ctx: &Ctx) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let st = &entry.structure;
    let report = st.rigging_conditions();
    let results = object(vec![
        ("distribution", vectors(st.distribution().basis())),
        ("rigging", vectors(st.rigging().basis())),
        ("conditions", serde_json::to_value(&report).expect("report serializes")),
    ]);
    let diag = ctx.diagnostics(&Mode::Exact, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

pub fn contact(ctx: &Ctx) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let c = entry.structure.contact_check()?;
    let results = object(vec![
        ("is_contact", json!(c.is_contact)),
        ("omega", vector(&c.omega)),
        ("reeb", c.reeb.as_ref().map_or(Value::Null, |r| vector(r))),
        ("reeb_axis", c.reeb.as_ref().map_or(Value::Null, |r| json!(axis_label(r, 0.0)))),
        ("domega", matrix(&c.domega)),
        ("domega_on_distribution", matrix(&c.domega_on_d)),
        ("rigging_is_reeb", json!(c.rigging_is_reeb)),
    ]);
    let diag = ctx.diagnostics(&Mode::Exact, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

pub fn classify3d(ctx: &Ctx) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let class = classify_3d(entry.algebra())?;
    let mut results = object(vec![("classification", json!(class.label()))]);
    if let Classification3d::ContactAdmitting { witness, omega } = &class {
        results["witness_plane"] = vectors(witness.basis());
        results["omega"] = vector(omega);
    }
    let diag = ctx.diagnostics(&Mode::Exact, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

// ---------------------------------------------------------------- geodesic, abnormal

pub struct GeodesicArgs {
    pub xi: Vec<f64>,
    pub time: f64,
    pub step: f64,
    pub raw: bool,
    pub trajectory: Option<PathBuf>,
    pub convergence: Option<Vec<f64>>,
}

fn write_trajectory(path: &Path, t: &subriemann::geodesics::Trajectory) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for st in &t.samples {
        let line = json!({"t": st.t, "g": st.g.as_slice(), "xi": st.xi, "H": st.h});
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn rows_f64(m: &subriemann::Matrix<f64>) -> Value {
    json!((0..m.rows()).map(|r| m.row(r)).collect::<Vec<_>>())
}

pub fn geodesic(ctx: &Ctx, a: &GeodesicArgs) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let model = entry.model()?.to_f64();
    let mode = if a.raw { ControlMode::Raw } else { ControlMode::UnitSpeed };
    let ham = Hamiltonian::new(&entry.structure, mode)?;
    let t = integrate(&ham, &model, &a.xi, a.time, a.step)?;
    if !(t.max_h_drift.is_finite() && t.max_coadjoint_residual.is_finite()) {
        return Err(CliError::Numeric("integration diverged".into()));
    }
    if let Some(path) = &a.trajectory {
        write_trajectory(path, &t)?;
    }
    let last = t.samples.last().expect("at least the initial sample");
    let mut results = object(vec![
        ("xi0", floats(&a.xi)),
        ("time", json!(a.time)),
        ("step", json!(t.step)),
        ("samples", json!(t.samples.len())),
        ("hamiltonian", json!(t.samples[0].h)),
        ("max_h_drift", json!(t.max_h_drift)),
        ("max_coadjoint_residual", json!(t.max_coadjoint_residual)),
        (
            "final",
            json!({"t": last.t, "g": rows_f64(&last.g), "xi": last.xi, "H": last.h}),
        ),
    ]);
    if let Some(steps) = &a.convergence {
        let study = convergence_study(&ham, &model, &a.xi, a.time, steps)?;
        results["convergence"] = json!({
            "steps": study.steps,
            "h_drift": study.h_drift,
            "residual": study.residual,
            "h_drift_order": study.h_drift_order,
            "residual_order": study.residual_order,
            "h_drift_at_roundoff": study.h_drift_at_floor(),
            "residual_at_roundoff": study.residual_at_floor(),
        });
    }
    let diag = ctx.diagnostics(
        &Mode::Float { fallback: None },
        vec![
            ("control", json!(mode)),
            ("integrator", json!("rk4")),
            ("roundoff_floor", json!(subriemann::geodesics::ROUNDOFF_FLOOR)),
        ],
    );
    Ok(outcome(&entry, results, diag, true))
}

pub fn abnormal(ctx: &Ctx, u: &[f64], times: Option<&[f64]>) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let model = entry.model()?.to_f64();
    let times = times.unwrap_or(&DEFAULT_ABNORMAL_TIMES);
    let found = abnormal_covector_search(&entry.structure, &model, u, times)?;
    let results = object(vec![
        ("direction", floats(u)),
        ("times", floats(times)),
        ("family_dimension", json!(found.len())),
        ("covectors", json!(found)),
    ]);
    let diag = ctx.diagnostics(&Mode::Float { fallback: None }, vec![]);
    Ok(outcome(&entry, results, diag, true))
}

// ---------------------------------------------------------------- gamma

pub struct GammaArgs {
    pub field: String,
    pub field2: Option<String>,
    pub point: Option<Vec<f64>>,
    pub scheme: FdScheme,
    pub cd: Option<Vec<f64>>,
}

pub fn gamma(ctx: &Ctx, a: &GammaArgs) -> CliResult<Outcome> {
    let entry = ctx.entry()?;
    let carre = Carre::new(&entry.structure, entry.model()?, a.scheme)?;
    let rep = carre.model().rep_dim();
    let f = parse_field(&a.field, rep)?;
    let g = match &a.field2 {
        Some(e) => parse_field(e, rep)?,
        None => f.clone(),
    };
    let n = entry.structure.n();
    let point = a.point.clone().unwrap_or_else(|| vec![0.0; n]);
    if point.len() != n {
        return Err(CliError::Input(format!("--point needs {n} coordinates, got {}", point.len())));
    }
    let g0 = carre.model().exp(&point)?;
    let gam = carre.gamma(&f, &g, &g0)?;
    let g2 = carre.gamma2(&f, &g0)?;
    let mut results = object(vec![
        ("point", floats(&point)),
        ("field", json!(f.note())),
        ("field2", json!(g.note())),
        ("l_field", json!(carre.operator_l(&f, &g0)?)),
        ("gamma", json!(gam)),
        ("gamma2", json!(g2)),
    ]);
    if entry.structure.m() < n {
        results["gamma_z"] = json!(carre.gamma_z(&f, &g, &g0)?);
        results["gamma_z2"] = json!(carre.gamma_z2(&f, &g0)?);
        results["hypothesis2_residual"] = json!(carre.hypothesis2_check(&f, &g0)?);
    }
    if let Some(cd) = &a.cd {
        let [rho1, rho2, kappa, r, nu] = cd[..] else {
            return Err(CliError::Input("--cd needs rho1,rho2,kappa,r,nu".into()));
        };
        let params = CdParams { rho1, rho2, kappa, r, nu };
        params.validate()?;
        let r_json = if r.is_infinite() { json!("inf") } else { json!(r) };
        results["cd"] = json!({
            "params": {"rho1": rho1, "rho2": rho2, "kappa": kappa, "r": r_json, "nu": nu},
            "residual": carre.cd_probe(&f, &g0, &params)?,
        });
    }
    let diag = ctx.diagnostics(
        &Mode::Float { fallback: None },
        vec![("scheme", json!(a.scheme)), ("stencil", json!("central, fourth order"))],
    );
    Ok(outcome(&entry, results, diag, true))
}

// ---------------------------------------------------------------- catalog

pub struct CatalogArgs {
    pub output: Option<PathBuf>,
    pub sweep: bool,
    pub random: Option<usize>,
    pub family: RandomFamily,
    pub jobs: Option<usize>,
}

fn summary_structure<S: Scalar>(st: &SubRiemannianStructure<S>, tol: f64) -> subriemann::Result<Value> {
    let fd = st.frame_constants()?;
    let p = SolovevPipeline::new(&fd, tol)?;
    let r = p.report();
    let closed = milnor_closed_form(&fd.c, p.m());
    let closed_ok = closed.len() == r.sectional.len()
        && closed
            .iter()
            .zip(&r.sectional)
            .all(|(a, b)| a.pair == b.pair && (a.value.clone() - b.value.clone()).abs().is_zero_tol(tol));
    let route_gap = induced_torsion_route(&p.induced_curvature, &p.torsion, p.m())
        .max_abs_diff(&gauss_route(&p.riemann, &p.h, &p.h_minus, p.m()));
    Ok(json!({
        "curvature_zero": r.is_zero(tol),
        "closed_form_agrees": closed_ok,
        "route_max_diff": s(&route_gap),
        "routes_agree": route_gap.is_zero_tol(tol),
    }))
}

fn summarize(st: &SubRiemannianStructure<Rational>, ctx: &Ctx) -> Value {
    let flag = st.algebra().derived_flag(st.distribution());
    let mut v = json!({
        "name": st.name(),
        "dimension": st.n(),
        "rank": st.m(),
        "growth_vector": flag.growth_vector,
        "nilpotent": st.algebra().is_nilpotent(),
        "condition3": st.rigging_conditions().cond3,
    });
    match exact_or_float(st, ctx, summary_structure, summary_structure) {
        Ok((x, mode)) => {
            v["numeric_mode"] = json!(mode.label());
            for (k, val) in x.as_object().expect("object") {
                v[k] = val.clone();
            }
        }
        Err(e) => v["error"] = json!(e.message()),
    }
    v
}

pub fn catalog_cmd(ctx: &Ctx, a: &CatalogArgs) -> CliResult<Outcome> {
    if a.sweep || a.random.is_some() {
        let (structures, label) = if let Some(count) = a.random {
            let list = (0..count)
                .map(|i| random_structure(a.family, ctx.seed, i))
                .collect::<subriemann::Result<Vec<_>>>()?;
            (list, format!("random {:?} seed {} count {count}", a.family, ctx.seed))
        } else {
            let list = all_builtins()?.into_iter().map(|e| e.structure).collect();
            (list, "builtins".to_string())
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Input(format!("--jobs: {e}")))?;
        let rows: Vec<Value> = pool.install(|| structures.par_iter().map(|st| summarize(st, ctx)).collect());
        let count_true = |key: &str| rows.iter().filter(|r| r[key] == json!(true)).count();
        let errors = rows.iter().filter(|r| r.get("error").is_some()).count();
        let results = object(vec![
            ("structures", json!(rows.len())),
            ("curvature_zero", json!(count_true("curvature_zero"))),
            ("condition3", json!(count_true("condition3"))),
            ("closed_form_agrees", json!(count_true("closed_form_agrees"))),
            ("routes_agree", json!(count_true("routes_agree"))),
            ("errors", json!(errors)),
            ("entries", Value::Array(rows)),
        ]);
        let diag = object(vec![
            ("seed", json!(ctx.seed)),
            ("family", json!(a.random.map(|_| a.family))),
            ("float_tol", json!(ctx.tol)),
            ("forced_float", json!(ctx.float)),
        ]);
        let source = structures
            .iter()
            .map(|st| format!("{st:?}"))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Outcome {
            results,
            diagnostics: diag,
            digest_source: format!("{label}\n{source}"),
            ok: true,
        });
    }
    if ctx.input.is_some() || ctx.builtin.is_some() {
        let entry = ctx.entry()?;
        let text = entry.to_json();
        let mut results = object(vec![(
            "entry",
            serde_json::from_str(&text).expect("entry JSON parses"),
        )]);
        if let Some(path) = &a.output {
            catalog::save(&entry, path)?;
            results["saved"] = json!(path.display().to_string());
        }
        let diag = ctx.diagnostics(&Mode::Exact, vec![]);
        return Ok(outcome(&entry, results, diag, true));
    }
    if a.output.is_some() {
        return Err(CliError::Input("--output needs --input or --builtin".into()));
    }
    let rows: Vec<Value> = BUILTIN_IDS
        .iter()
        .map(|id| -> CliResult<Value> {
            let e = builtin(id)?;
            let st = &e.structure;
            Ok(json!({
                "id": id,
                "dimension": st.n(),
                "rank": st.m(),
                "growth_vector": st.algebra().derived_flag(st.distribution()).growth_vector,
                "matrix_model": e.matrix_model.is_some(),
                "expected": e.expected.keys().collect::<Vec<_>>(),
            }))
        })
        .collect::<CliResult<_>>()?;
    Ok(Outcome {
        results: json!({"builtins": rows}),
        diagnostics: json!({"parametrized": ["abelian_<n>", "milnor_unimodular(l1,l2,l3)"]}),
        digest_source: BUILTIN_IDS.join("\n"),
        ok: true,
    })
}
