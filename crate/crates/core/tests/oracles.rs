//! Hand-derived values for the unimodular three-dimensional family
//! `[e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3`, orthonormal basis,
//! `D = span(e1, e2)`.

use subriemann::catalog::builtin;
use subriemann::linalg::unit;
use subriemann::solovev::{submersion_base_curvature, SolovevPipeline};
use subriemann::{Rational, Scalar};

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn pipeline(l: [i64; 3]) -> SolovevPipeline<Rational> {
    let id = format!("milnor_unimodular({},{},{})", l[0], l[1], l[2]);
    let s = builtin(&id).unwrap().structure;
    SolovevPipeline::new(&s.frame_constants().unwrap(), 0.0).unwrap()
}

fn triples() -> impl Iterator<Item = [i64; 3]> {
    (-2..=2i64).flat_map(|a| (-2..=2i64).flat_map(move |b| (-2..=2i64).filter(|&c| c != 0).map(move |c| [a, b, c])))
}

/// `K(e1, e2) = (r1 + r2 - r3) / 2` with `r_i = 2 mu_j mu_k` and
/// `mu_i = (l1 + l2 + l3)/2 - l_i`.
fn ambient_k12(l: [i64; 3]) -> Rational {
    let half_sum = Rational::from_ratio(l[0] + l[1] + l[2], 2);
    let mu: Vec<Rational> = l.iter().map(|&x| half_sum.clone() - q(x)).collect();
    mu[1].clone() * mu[2].clone() + mu[0].clone() * mu[2].clone() - mu[0].clone() * mu[1].clone()
}

#[test]
fn ambient_sectional_matches_ricci_formula() {
    let (e1, e2) = (unit::<Rational>(3, 0), unit::<Rational>(3, 1));
    for l in triples() {
        let p = pipeline(l);
        assert_eq!(p.riemannian_sectional(&e1, &e2).unwrap(), ambient_k12(l), "{l:?}");
    }
}

#[test]
fn heisenberg_ambient_curvature() {
    assert_eq!(ambient_k12([0, 0, 1]), Rational::from_ratio(-3, 4));
    assert_eq!(ambient_k12([1, 1, 1]), Rational::from_ratio(1, 4));
}

/// With `l1 = l2` the rigging `e3` acts by isometries on `D`, so the
/// distribution curvature is the quotient curvature
/// `K12 + 3/4 l3^2 = l1 l3`.
#[test]
fn isometric_rigging_gives_base_curvature() {
    let (e1, e2) = (unit::<Rational>(3, 0), unit::<Rational>(3, 1));
    for a in -3..=3i64 {
        for c in [-2i64, -1, 1, 3] {
            let p = pipeline([a, a, c]);
            let chk = submersion_base_curvature(&p, &e1, &e2).unwrap();
            assert!(chk.preconditions_hold, "{a} {c}: {:?}", chk.failure);
            assert_eq!(chk.base_sectional, q(a * c), "{a} {c}");
            assert_eq!(p.sectional(&e1, &e2).unwrap(), q(a * c), "{a} {c}");
        }
    }
}

#[test]
fn anisotropic_rigging_fails_preconditions() {
    let p = pipeline([1, 2, 3]);
    let chk = submersion_base_curvature(&p, &unit(3, 0), &unit(3, 1)).unwrap();
    assert!(!chk.preconditions_hold);
}
