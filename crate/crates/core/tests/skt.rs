use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skt_core::catalog::*;
use skt_core::exterior::AlternatingForm;
use skt_core::skt::*;
use skt_core::Error;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + a.abs() + b.abs())
}

#[test]
fn hopf_torsion_by_hand() {
    // dω = -2 e^{023}, so H = ±2 e^{123} and θ = ±2 e^0.
    let m = hopf().unwrap();
    let dw = m.d(m.omega());
    let expected = AlternatingForm::basis(4, &[0, 2, 3]) * -2.0;
    assert!(dw.distance(&expected) < 1e-14);
    let pkg = TorsionPackage::compute(&m).unwrap();
    assert!(near(pkg.h.component(&[1, 2, 3]).abs(), 2.0));
    assert!(near(pkg.norm_h_sq, 24.0));
    assert!(near(pkg.norm_theta_sq, 4.0));
    assert!(near(pkg.theta.component(&[0]).abs(), 2.0));
    assert!(pkg.delta_theta.abs() < 1e-12);
    assert!(pkg.dh.is_zero(1e-12));
    assert!(near(pkg.norm_c_sq, 8.0));
}

#[test]
fn hopf_classification() {
    let m = hopf().unwrap();
    let (_, c) = classify(&m).unwrap();
    assert!(c.is_k_skt(1));
    assert!(c.lck);
    assert!(!c.kahler);
    assert!(!c.balanced);
    assert!(c.gauduchon_k.contains(&1));
}

#[test]
fn flat_torus_is_kahler() {
    for n in 2..=6 {
        let m = flat_torus(n).unwrap();
        let (pkg, c) = classify(&m).unwrap();
        assert!(c.kahler && c.balanced && c.k_skt_all());
        assert_eq!(pkg.norm_h_sq, 0.0);
        for a in &c.alpha_values {
            assert!(a.routes.iter().flatten().all(|v| *v == 0.0));
        }
        if n > 2 {
            for k in 1..n {
                let r = vanishing_margin(&m, &pkg, k, DEFAULT_TOL).unwrap();
                assert_eq!(r.margin, 0.0);
                assert_eq!(r.verdict, Verdict::Zero);
            }
        }
    }
}

#[test]
fn lck_nilmanifold_alpha() {
    // dω = (e^{01} + e^{23}) ∧ e^5 = θ∧ω/2 with θ = -2 e^5, so |θ|² = 4.
    let m = lck_nil(3).unwrap();
    let pkg = TorsionPackage::compute(&m).unwrap();
    assert!(near(pkg.theta.component(&[5]), -2.0));
    assert!(near(pkg.norm_theta_sq, 4.0));
    let a1 = alpha_k(&m, &pkg, 1, AlphaRoute::Definitional).unwrap();
    assert!(near(a1, 2.0), "alpha_1 = {a1}");
    assert!(near(lck_gauduchon_alpha(3, 1, 4.0), 2.0));
    let a2 = alpha_k(&m, &pkg, 2, AlphaRoute::Definitional).unwrap();
    assert!(a2.abs() < 1e-12);
    let lck = lck_detect(&m, &pkg, DEFAULT_TOL);
    assert!(lck.is_lck);
    assert!(lck
        .alpha_prediction
        .iter()
        .any(|(k, a)| *k == 1 && near(*a, 2.0)));
}

#[test]
fn iwasawa_is_balanced_and_not_pluriclosed() {
    let m = iwasawa().unwrap();
    let (pkg, c) = classify(&m).unwrap();
    assert!(c.balanced);
    assert!(!c.is_k_skt(1));
    assert!(pkg.norm_h_sq > 0.0);
    let a1 = alpha_k(&m, &pkg, 1, AlphaRoute::Definitional).unwrap();
    assert!(near(a1, -pkg.norm_h_sq / 6.0));
}

#[test]
fn routes_agree_on_random_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for base in [
        solvable_nonunimodular(2.0, 1.0).unwrap(),
        product_kahler_hopf(2).unwrap(),
        lck_nil(4).unwrap(),
    ] {
        for _ in 0..5 {
            let m = base
                .with_metric(random_compatible_metric(&base, &mut rng, 0.4))
                .unwrap();
            let pkg = TorsionPackage::compute(&m).unwrap();
            for k in 1..m.n() {
                let v: Vec<f64> = AlphaRoute::ALL
                    .iter()
                    .map(|r| alpha_k(&m, &pkg, k, *r).unwrap())
                    .collect();
                assert!(near(v[0], v[1]) && near(v[0], v[2]), "{v:?}");
            }
        }
    }
}

#[test]
fn nonunimodular_model_has_nonzero_codifferential() {
    let m = solvable_nonunimodular(2.0, 1.0).unwrap();
    let pkg = TorsionPackage::compute(&m).unwrap();
    assert!(pkg.delta_theta.abs() > 1.0);
    let via_definition = lee_form_codifferential(&m).unwrap();
    assert!(via_definition.distance(&pkg.theta) < 1e-10);
}

#[test]
fn alpha_kl_relation() {
    let m = product_kahler_iwasawa(1).unwrap();
    let pkg = TorsionPackage::compute(&m).unwrap();
    let n = m.n();
    let fact = |x: usize| (1..=x).map(|i| i as f64).product::<f64>();
    for k in 1..n {
        let a = alpha_k(&m, &pkg, k, AlphaRoute::Definitional).unwrap();
        for l in 0..(n - k) {
            let akl = alpha_kl(&m, &pkg.h, k, l).unwrap();
            assert!(near(a, fact(n) / fact(k + l + 1) * akl));
        }
    }
}

#[test]
fn domain_errors() {
    let m = hopf().unwrap();
    let pkg = TorsionPackage::compute(&m).unwrap();
    assert!(matches!(
        alpha_k(&m, &pkg, 1, AlphaRoute::Lambda),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        alpha_k(&m, &pkg, 2, AlphaRoute::Definitional),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        vanishing_margin(&m, &pkg, 1, DEFAULT_TOL),
        Err(Error::Domain(_))
    ));
    let m = iwasawa().unwrap();
    let pkg = TorsionPackage::compute(&m).unwrap();
    assert!(matches!(
        vanishing_margin(&m, &pkg, 3, DEFAULT_TOL),
        Err(Error::Domain(_))
    ));
}

#[test]
fn product_with_hopf_is_pluriclosed() {
    for mm in 1..=3 {
        let m = product_kahler_hopf(mm).unwrap();
        let (pkg, c) = classify(&m).unwrap();
        assert!(c.is_k_skt(1));
        let r = vanishing_margin(&m, &pkg, 1, DEFAULT_TOL).unwrap();
        assert!(r.equality_asserted);
        assert!(near(r.margin, r.chern_expression));
    }
}

#[test]
fn identity_suite_is_seed_deterministic() {
    let m = lck_nil(3).unwrap();
    let a = identity_suite(&m, 3, 9, IDENTITY_TOL).unwrap();
    let b = identity_suite(&m, 3, 9, IDENTITY_TOL).unwrap();
    assert_eq!(a, b);
    assert!(a.all_passed());
}

#[test]
fn synthetic_identities_pass() {
    for n in 2..=5 {
        let r = synthetic_identities(n, 4, 1).unwrap();
        assert!(r.all_passed(), "n = {n}: {:?}", r.checks);
    }
}
