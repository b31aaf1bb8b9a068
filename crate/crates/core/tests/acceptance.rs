//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p subriemann --test acceptance`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subriemann::carre::{Carre, FdScheme, ScalarField};
use subriemann::catalog::{all_builtins, builtin, random_structure, CatalogEntry, RandomFamily};
use subriemann::geodesics::{
    abnormal_covector_search, convergence_study, integrate, ControlMode, Hamiltonian, DEFAULT_ABNORMAL_TIMES,
};
use subriemann::solovev::{
    biinvariant_tensor, gauss_route, induced_torsion_route, milnor_closed_form, submersion_base_curvature,
    SolovevPipeline,
};
use subriemann::structure::{classify_3d, AnyFrameData, FrameData};
use subriemann::wagner::{schouten_tensor, wagner, Alternation};
use subriemann::{Rational, Scalar, SubRiemannianStructure};

/// Float agreement for the closed-form and route comparisons.
const FLOAT_TOL: f64 = 1e-10;
/// Geodesic drift and coadjoint residual at h = 1e-2, T = 1.
const GEODESIC_TOL: f64 = 1e-6;
const MIN_ORDER: f64 = 3.8;
const GAMMA_ROUTE_TOL: f64 = 1e-6;
const HYP2_TOL: f64 = 1e-4;
const SEED: u64 = 0;

type Outcome = Result<String, String>;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn qr(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_pipeline(s: &SubRiemannianStructure<Rational>) -> Result<SolovevPipeline<Rational>, String> {
    let fd = s.frame_constants().map_err(|e| format!("{}: {e}", s.name()))?;
    SolovevPipeline::new(&fd, 0.0).map_err(|e| format!("{}: {e}", s.name()))
}

fn c1() -> Outcome {
    let s = builtin("liu_sussman_A").map_err(|e| e.to_string())?.structure;
    let r = exact_pipeline(&s)?.report();
    let k = r.sectional_of(1, 2).cloned();
    ensure(k == Some(qr(3, 2)), || format!("sectional {k:?}"))?;
    ensure(r.ricci == vec![qr(3, 2), qr(3, 2)], || format!("ricci {:?}", r.ricci))?;
    ensure(r.scalar == q(3), || format!("scalar {}", r.scalar))?;
    Ok("K = 3/2, ricci = (3/2, 3/2), scalar = 3".into())
}

fn c2() -> Outcome {
    let s = builtin("liu_sussman_B").map_err(|e| e.to_string())?.structure;
    let r = exact_pipeline(&s)?.report();
    let k = r.sectional_of(1, 2).cloned();
    ensure(k == Some(q(1)), || format!("sectional {k:?}"))?;
    Ok("K = 1".into())
}

fn c3() -> Outcome {
    let s = builtin("liu_sussman_A").map_err(|e| e.to_string())?.structure;
    let fd = s.frame_constants().map_err(|e| e.to_string())?;
    let mut published: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    published.insert((2, 3, 1), q(2));
    published.insert((3, 2, 1), q(-2));
    for (idx, v) in [
        ((1, 2, 3), 1),
        ((2, 1, 3), -1),
        ((1, 3, 1), 1),
        ((3, 1, 1), -1),
        ((1, 3, 2), -1),
        ((3, 1, 2), 1),
        ((1, 3, 4), -1),
        ((3, 1, 4), 1),
        ((2, 3, 2), -1),
        ((3, 2, 2), 1),
    ] {
        published.insert(idx, q(v));
    }
    let mut computed = BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let v = fd.c[(i, j, k)].clone();
                if v != q(0) {
                    computed.insert((i + 1, j + 1, k + 1), v);
                }
            }
        }
    }
    ensure(computed == published, || format!("computed {computed:?}"))?;
    Ok(format!("{} nonzero constants match", computed.len()))
}

fn c4() -> Outcome {
    for id in ["heis3", "engel"] {
        let s = builtin(id).map_err(|e| e.to_string())?.structure;
        let r = exact_pipeline(&s)?.report();
        ensure(r.is_zero(0.0), || format!("{id}: nonzero report"))?;
        ensure(
            r.sectional_torsion.iter().any(|p| p.value != q(0)),
            || format!("{id}: torsion vanished too, the check is vacuous"),
        )?;
    }
    Ok("heis3, engel: all curvatures zero".into())
}

fn c5() -> Outcome {
    for idx in 0..100 {
        let s = random_structure(RandomFamily::NilpotentCond3, SEED, idx).map_err(|e| e.to_string())?;
        ensure(s.algebra().is_nilpotent(), || format!("nil{idx}: not nilpotent"))?;
        ensure(s.rigging_conditions().cond3, || format!("nil{idx}: condition 3 fails"))?;
        let r = exact_pipeline(&s)?.report();
        ensure(r.is_zero(0.0), || format!("nil{idx}: nonzero report"))?;
    }
    Ok("100 random structures flat".into())
}

fn closed_form_matches<S: Scalar>(fd: &FrameData<S>, tol: f64, label: &str) -> Result<(), String> {
    let p = SolovevPipeline::new(fd, tol).map_err(|e| format!("{label}: {e}"))?;
    let report = p.report();
    let closed = milnor_closed_form(&fd.c, fd.m());
    ensure(closed.len() == report.sectional.len(), || format!("{label}: pair count"))?;
    for (a, b) in closed.iter().zip(&report.sectional) {
        let d = (a.value.clone() - b.value.clone()).abs();
        ensure(a.pair == b.pair && d.is_zero_tol(tol), || {
            format!("{label}: pair {:?} closed {} pipeline {}", a.pair, a.value.to_report_string(), b.value.to_report_string())
        })?;
    }
    Ok(())
}

fn with_frame(e: &CatalogEntry, f: impl Fn(&FrameData<Rational>, f64) -> Result<(), String>, g: impl Fn(&FrameData<f64>, f64) -> Result<(), String>) -> Result<(), String> {
    match e.structure.frame_constants_any().map_err(|x| format!("{}: {x}", e.id))? {
        AnyFrameData::Exact(fd) => f(&fd, 0.0),
        AnyFrameData::Float(fd) => g(&fd, FLOAT_TOL),
    }
}

fn c6() -> Outcome {
    let entries = all_builtins().map_err(|e| e.to_string())?;
    for e in &entries {
        with_frame(e, |fd, t| closed_form_matches(fd, t, &e.id), |fd, t| closed_form_matches(fd, t, &e.id))?;
    }
    for idx in 0..100 {
        let s = random_structure(RandomFamily::ChangeOfBasis, SEED, idx).map_err(|e| e.to_string())?;
        let fd = s.frame_constants().map_err(|e| e.to_string())?;
        closed_form_matches(&fd, 0.0, s.name())?;
    }
    Ok(format!("{} catalog entries and 100 random structures", entries.len()))
}

fn c7() -> Outcome {
    for id in ["so3", "su2_scaled", "hopf_su2"] {
        let s = builtin(id).map_err(|e| e.to_string())?.structure;
        let p = exact_pipeline(&s)?;
        let bi = biinvariant_tensor(&p.c, p.m(), 0.0).map_err(|e| format!("{id}: {e}"))?;
        ensure(bi == p.tensor, || format!("{id}: tensors differ"))?;
    }
    Ok("so3, su2_scaled, hopf_su2 exact".into())
}

fn routes_agree<S: Scalar>(fd: &FrameData<S>, tol: f64, label: &str) -> Result<(), String> {
    let p = SolovevPipeline::new(fd, tol).map_err(|e| format!("{label}: {e}"))?;
    let r1 = induced_torsion_route(&p.induced_curvature, &p.torsion, p.m());
    let r2 = gauss_route(&p.riemann, &p.h, &p.h_minus, p.m());
    let d = r1.max_abs_diff(&r2);
    ensure(d.is_zero_tol(tol), || format!("{label}: max diff {}", d.to_report_string()))
}

fn c8() -> Outcome {
    let entries = all_builtins().map_err(|e| e.to_string())?;
    for e in &entries {
        with_frame(e, |fd, t| routes_agree(fd, t, &e.id), |fd, t| routes_agree(fd, t, &e.id))?;
    }
    Ok(format!("{} catalog entries", entries.len()))
}

fn c9() -> Outcome {
    let s = builtin("hopf_su2").map_err(|e| e.to_string())?.structure;
    let p = exact_pipeline(&s)?;
    let u = subriemann::linalg::unit(3, 0);
    let v = subriemann::linalg::unit(3, 1);
    let chk = submersion_base_curvature(&p, &u, &v).map_err(|e| e.to_string())?;
    ensure(chk.preconditions_hold, || format!("preconditions: {:?}", chk.failure))?;
    ensure(chk.ambient_sectional == q(1), || format!("ambient {}", chk.ambient_sectional))?;
    ensure(chk.base_sectional == q(4), || format!("base {}", chk.base_sectional))?;
    ensure(chk.solovev_sectional == q(4), || format!("solovev {}", chk.solovev_sectional))?;
    Ok("ambient 1, base 4, distribution 4".into())
}

fn c10() -> Outcome {
    for (id, reeb_axis) in [("heis3", 2), ("so3", 2), ("sl2_elliptic", 2), ("sl2_hyperbolic", 0)] {
        let e = builtin(id).map_err(|e| e.to_string())?;
        let class = classify_3d(e.algebra()).map_err(|x| x.to_string())?;
        ensure(class.label() == "contact_admitting", || format!("{id}: {}", class.label()))?;
        let contact = e.structure.contact_check().map_err(|x| x.to_string())?;
        ensure(contact.is_contact, || format!("{id}: not contact"))?;
        let reeb = contact.reeb.ok_or_else(|| format!("{id}: no reeb field"))?;
        let ok = reeb.iter().enumerate().all(|(k, x)| (k == reeb_axis) != (*x == q(0)));
        ensure(ok, || format!("{id}: reeb {reeb:?}"))?;
    }
    for id in ["abelian_3", "hyperbolic_plane_algebra"] {
        let e = builtin(id).map_err(|e| e.to_string())?;
        let class = classify_3d(e.algebra()).map_err(|x| x.to_string())?;
        ensure(class.label() == "no_nonholonomic_rank2", || format!("{id}: {}", class.label()))?;
    }
    Ok("4 contact, 2 without nonholonomic planes".into())
}

fn c11() -> Outcome {
    let mut notes = Vec::new();
    for id in ["so3", "heis3"] {
        let e = builtin(id).map_err(|e| e.to_string())?;
        let model = e.model().map_err(|x| x.to_string())?.to_f64();
        let ham = Hamiltonian::new(&e.structure, ControlMode::UnitSpeed).map_err(|x| x.to_string())?;
        for xi in [[1.0, 0.0, 2.0], [0.3, 0.5, -1.0]] {
            let t = integrate(&ham, &model, &xi, 1.0, 1e-2).map_err(|x| x.to_string())?;
            ensure(t.max_h_drift <= GEODESIC_TOL && t.max_coadjoint_residual <= GEODESIC_TOL, || {
                format!("{id} {xi:?}: drift {:e} residual {:e}", t.max_h_drift, t.max_coadjoint_residual)
            })?;
            let study = convergence_study(&ham, &model, &xi, 1.0, &[0.2, 0.1, 0.05]).map_err(|x| x.to_string())?;
            ensure(study.order_ok(MIN_ORDER), || format!("{id} {xi:?}: {study:?}"))?;
            let fmt = |o: Option<f64>, floor: bool| match (o, floor) {
                (_, true) => "roundoff".to_string(),
                (Some(o), _) => format!("{o:.2}"),
                (None, _) => "n/a".to_string(),
            };
            notes.push(format!(
                "{id} drift order {} residual order {}",
                fmt(study.h_drift_order, study.h_drift_at_floor()),
                fmt(study.residual_order, study.residual_at_floor())
            ));
        }
    }
    Ok(notes.join("; "))
}

fn c12() -> Outcome {
    let e = builtin("liu_sussman_A").map_err(|e| e.to_string())?;
    let model = e.model().map_err(|x| x.to_string())?.to_f64();
    let g = [1.0, 1.0, 0.0, 2.0];
    let found = abnormal_covector_search(&e.structure, &model, &g, &DEFAULT_ABNORMAL_TIMES).map_err(|x| x.to_string())?;
    ensure(!found.is_empty(), || "liu_sussman: no covector along g".into())?;
    let h = builtin("heis3").map_err(|e| e.to_string())?;
    let hm = h.model().map_err(|x| x.to_string())?.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10 {
        let a: f64 = rng.gen_range(-1.0..1.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        let none = abnormal_covector_search(&h.structure, &hm, &[a, b, 0.0], &DEFAULT_ABNORMAL_TIMES)
            .map_err(|x| x.to_string())?;
        ensure(none.is_empty(), || format!("heis3 ({a}, {b}): {none:?}"))?;
    }
    Ok(format!("liu_sussman family dim {}, heis3 none", found.len()))
}

fn c13() -> Outcome {
    let mut worst_route = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for id in ["abelian_3", "heis3"] {
        let e = builtin(id).map_err(|e| e.to_string())?;
        let c = Carre::new(&e.structure, e.model().map_err(|x| x.to_string())?, FdScheme::default())
            .map_err(|x| x.to_string())?;
        let g = |r, k| ScalarField::entry(r, k);
        let fields = if id == "heis3" {
            vec![
                g(0, 1).product(&g(1, 2)).sum(&g(0, 2).product(&g(0, 2))),
                g(0, 2).product(&g(0, 1)).product(&g(0, 1)),
            ]
        } else {
            vec![g(0, 3).product(&g(1, 3)).sum(&g(2, 3).product(&g(2, 3))), g(0, 3)]
        };
        for _ in 0..5 {
            let pt: Vec<f64> = (0..e.structure.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g0 = c.model().exp(&pt).map_err(|x| x.to_string())?;
            for f in &fields {
                for h in &fields {
                    let v = c.gamma(f, h, &g0).map_err(|x| x.to_string())?;
                    worst_route = worst_route.max(v.discrepancy);
                }
            }
            if id == "heis3" {
                for f in &fields {
                    let r = c.hypothesis2_check(f, &g0).map_err(|x| x.to_string())?;
                    ensure(r <= HYP2_TOL, || format!("hypothesis 2 residual {r:e}"))?;
                }
            }
        }
    }
    ensure(worst_route <= GAMMA_ROUTE_TOL, || format!("route gap {worst_route:e}"))?;
    Ok(format!("max route gap {worst_route:.1e}"))
}

fn c14() -> Outcome {
    let mut geodesic_cases = Vec::new();
    for (id, growth) in [("heis3", vec![2, 3]), ("engel", vec![2, 3, 4]), ("liu_sussman_A", vec![2, 3, 4])] {
        let s = builtin(id).map_err(|e| e.to_string())?.structure;
        let w = wagner(&s, Alternation::Difference).map_err(|e| format!("{id}: {e}"))?;
        let f = &w.decomposition;
        ensure(f.dims == growth, || format!("{id}: dims {:?}", f.dims))?;
        for (i, st) in w.stages.iter().enumerate() {
            let dims = st.tensor.dims();
            let (ni, nprev) = (f.dims[i + 1], f.dims[i]);
            ensure(dims == [ni, ni, nprev, nprev], || format!("{id}: stage {} shape {dims:?}", i + 1))?;
        }
        for i in 0..f.dims.len() {
            ensure(f.metric_on(i).is_positive_definite(0.0), || format!("{id}: metric on D_{i} not SPD"))?;
        }
        for (i, g) in f.wedge_grams.iter().enumerate() {
            ensure(g.is_positive_definite(0.0), || format!("{id}: wedge Gram {i} not SPD"))?;
        }
    }
    for e in all_builtins().map_err(|e| e.to_string())? {
        let s = &e.structure;
        if !s.is_bracket_generating() || s.m() == s.n() {
            continue;
        }
        let Ok(fd) = s.frame_constants() else { continue };
        let p = SolovevPipeline::new(&fd, 0.0).map_err(|x| format!("{}: {x}", e.id))?;
        if !p.is_totally_geodesic() {
            continue;
        }
        let f = subriemann::wagner::flag_decomposition(s).map_err(|x| format!("{}: {x}", e.id))?;
        let k = schouten_tensor(&f).map_err(|x| format!("{}: {x}", e.id))?;
        ensure(k == p.tensor, || format!("{}: Schouten differs from the distribution tensor", e.id))?;
        geodesic_cases.push(e.id.clone());
    }
    ensure(!geodesic_cases.is_empty(), || "no totally geodesic case checked".into())?;
    Ok(format!("Schouten = curvature on {}", geodesic_cases.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 14] = [
        ("Liu-Sussman rigging A curvatures", c1, Duration::from_secs(1)),
        ("Liu-Sussman rigging B curvature", c2, Duration::from_secs(1)),
        ("Liu-Sussman structure constants", c3, Duration::from_secs(1)),
        ("Carnot zero curvature", c4, Duration::from_secs(1)),
        ("condition 3 implies flat", c5, Duration::from_secs(10)),
        ("closed form against tensor pipeline", c6, Duration::from_secs(30)),
        ("bi-invariant formula", c7, Duration::from_secs(1)),
        ("curvature route equivalence", c8, Duration::from_secs(5)),
        ("Hopf submersion", c9, Duration::from_secs(1)),
        ("contact classification", c10, Duration::from_secs(1)),
        ("geodesic conservation", c11, Duration::from_secs(10)),
        ("abnormal certificate", c12, Duration::from_secs(5)),
        ("carre du champ consistency", c13, Duration::from_secs(10)),
        ("Wagner structural suite", c14, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *budget => Err(format!("{msg}; took {took:?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({:.0?}): {msg}", i + 1, took),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({:.0?}): {msg}", i + 1, took);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
