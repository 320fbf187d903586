use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skt_core::catalog::{flat_torus, hopf};
use skt_core::exterior::AlternatingForm;
use skt_core::twist::*;
use skt_core::Error;

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn inst(c: Condition, k: u32, e: [i64; 4]) -> DiophantineInstance {
    DiophantineInstance::new(c, k, e)
}

#[test]
fn torus_family_satisfies_lift_conditions() {
    for (c, k) in [
        (Condition::TwoSkt, 2),
        (Condition::KSkt, 3),
        (Condition::KSktKahler, 2),
        (Condition::KPlusOneSkt, 2),
    ] {
        let spec = torus_family(&inst(c, k, [1, 2, -1, 3])).unwrap();
        let report = lift_check(&spec);
        assert!(report.all_passed(), "{c}: {:?}", report.checks);
    }
}

#[test]
fn curvature_with_fiber_leg_fails_horizontality() {
    let base = flat_torus(4).unwrap();
    let f1 = AlternatingForm::from_terms(8, 2, &[(&[0, 1], 1.0), (&[0, 6], 0.5)]);
    let f2 = AlternatingForm::basis(8, &[2, 3]);
    let spec = TwistSpec::new(
        base,
        vec![unit(8, 6), unit(8, 7)],
        vec![f1, f2],
        DMatrix::identity(2, 2),
    )
    .unwrap();
    let report = lift_check(&spec);
    assert!(!report.all_passed());
    assert!(!report.get("horizontal curvature").unwrap().passed);
    assert!(report.get("commuting generators").unwrap().passed);
}

#[test]
fn singular_beta_is_rejected() {
    let base = flat_torus(3).unwrap();
    let f = || AlternatingForm::basis(6, &[0, 1]);
    let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    let err = TwistSpec::new(
        base.clone(),
        vec![unit(6, 4), unit(6, 5)],
        vec![f(), f()],
        singular.clone(),
    );
    assert!(matches!(err, Err(Error::Precondition(_))));
    let err =
        TwistSpec::from_beta_inverse(base, vec![unit(6, 4), unit(6, 5)], vec![f(), f()], singular);
    assert!(matches!(err, Err(Error::Precondition(_))));
    assert!(matches!(
        diophantine_check(&inst(Condition::TwoSkt, 2, [1, 2, 2, 4])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn mismatched_shapes_are_rejected() {
    let base = flat_torus(2).unwrap();
    let f = AlternatingForm::basis(4, &[0, 1]);
    let err = TwistSpec::new(
        base.clone(),
        vec![unit(4, 2), unit(4, 3)],
        vec![f.clone()],
        DMatrix::identity(2, 2),
    );
    assert!(matches!(err, Err(Error::Dimension { .. })));
    let three = AlternatingForm::basis(4, &[0, 1, 2]);
    let err = TwistSpec::new(base, vec![unit(4, 3)], vec![three], DMatrix::identity(1, 1));
    assert!(matches!(err, Err(Error::Degree(_))));
}

#[test]
fn zero_curvature_is_the_identity_twist() {
    let base = hopf().unwrap();
    let spec = TwistSpec::new(
        base.clone(),
        vec![unit(4, 0)],
        vec![AlternatingForm::zero(4, 2)],
        DMatrix::identity(1, 1),
    )
    .unwrap();
    assert!(lift_check(&spec).all_passed());
    let w = twist_model(&spec).unwrap();
    for i in 0..4 {
        let e = AlternatingForm::basis(4, &[i]);
        assert_eq!(w.d(&e), base.d(&e));
    }
    assert_eq!(w.omega(), base.omega());
}

#[test]
fn random_type_11_curvature_is_integrable() {
    let base = flat_torus(3).unwrap();
    let j = base.complex_structure().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let mut curv = Vec::new();
        for _ in 0..2 {
            let mut f = AlternatingForm::zero(6, 2);
            for a in 0..4 {
                for b in (a + 1)..4 {
                    f.set_component(&[a, b], rng.random_range(-2.0..2.0));
                }
            }
            curv.push(j.pq_part(&f, 1, 1));
        }
        let beta = DMatrix::from_fn(2, 2, |r, c| {
            if r == c {
                2.0
            } else {
                rng.random_range(-1.0..1.0)
            }
        });
        let spec = TwistSpec::new(base.clone(), vec![unit(6, 4), unit(6, 5)], curv, beta).unwrap();
        let w = twist_model(&spec).unwrap();
        assert!(w.nijenhuis_residual() < 1e-12);
        assert!(dw_square_residual(&w) < 1e-12);
        let hw = verify_hw(&spec, &w).unwrap();
        assert!(hw.type_11);
        assert!(hw.short_residual < 1e-12);
        assert!(hw.full_residual < 1e-12);
    }
}

#[test]
fn type_20_curvature_breaks_integrability() {
    let base = flat_torus(3).unwrap();
    // Re(dz^0 ∧ dz^1) with dz^a = e^{2a} + i e^{2a+1}
    let f = AlternatingForm::from_terms(6, 2, &[(&[0, 2], 1.0), (&[1, 3], -1.0)]);
    let spec = TwistSpec::new(base, vec![unit(6, 4)], vec![f], DMatrix::identity(1, 1)).unwrap();
    assert!(matches!(twist_model(&spec), Err(Error::Integrability(_))));
}

#[test]
fn documented_instances() {
    let o = diophantine_check(&inst(Condition::KPlusOneSkt, 4, [0, 2, 2, -2])).unwrap();
    assert!(o.satisfied);
    assert_eq!(o.lhs, BigInt::from(0));
    let r = o.rewritten.unwrap();
    assert_eq!((r.lhs, r.rhs), (BigInt::from(80), BigInt::from(80)));

    assert!(
        diophantine_check(&inst(Condition::KSktKahler, 3, [0, 1, 5, -1]))
            .unwrap()
            .satisfied
    );
    assert!(
        !diophantine_check(&inst(Condition::KSktKahler, 3, [0, 1, 5, 1]))
            .unwrap()
            .satisfied
    );

    for p2 in -3..=3 {
        for q2 in [-2, -1, 1, 3] {
            let i =
                inst(Condition::TwoSkt, 2, [1, p2, -p2 * q2, q2]).with_null_classes(true, false);
            assert!(diophantine_check(&i).unwrap().satisfied, "{i}");
        }
    }
    // without the null class the first term survives
    let i = inst(Condition::TwoSkt, 2, [1, 1, -1, 1]);
    assert_eq!(diophantine_check(&i).unwrap().lhs, BigInt::from(2));
}

#[test]
fn k_zero_is_a_domain_error() {
    assert!(matches!(
        diophantine_check(&inst(Condition::KSkt, 0, [1, 0, 0, 1])),
        Err(Error::Domain(_))
    ));
}

#[test]
fn condition_names_round_trip() {
    for c in Condition::ALL {
        assert_eq!(c.name().parse::<Condition>().unwrap(), c);
        assert_eq!(c.to_string(), c.name());
    }
    assert!(matches!("three-skt".parse::<Condition>(), Err(Error::Lookup(_))));
}

#[test]
fn enumeration_examples() {
    let sols = enumerate_beta(Condition::KSktKahler, 3, 2, false, false);
    for q1 in [-2, -1, 1, 2] {
        assert!(
            sols.iter().any(|s| s.entries() == [0, 1, q1, -1]),
            "q1 = {q1}"
        );
    }
    assert!(!sols.iter().any(|s| s.entries() == [0, 1, 0, -1]));

    let sols = enumerate_beta(Condition::KPlusOneSkt, 4, 2, false, false);
    assert!(sols.iter().any(|s| s.entries() == [0, 2, 2, -2]));
    assert!(sols.iter().any(|s| s.entries() == [0, 2, -2, -2]));
}

#[test]
fn bound_zero_is_empty() {
    for c in Condition::ALL {
        assert!(enumerate_beta(c, 2, 0, false, false).is_empty());
    }
}

#[test]
fn enumeration_is_sorted_and_closed_under_symmetries() {
    for (c, k, n1, n2) in [
        (Condition::TwoSkt, 2, true, false),
        (Condition::KSkt, 3, false, false),
        (Condition::KSktKahler, 2, false, false),
        (Condition::KPlusOneSkt, 4, false, false),
        (Condition::KPlusOneSkt, 3, true, true),
    ] {
        let sols = enumerate_beta(c, k, 3, n1, n2);
        let keys: Vec<[i64; 4]> = sols.iter().map(|s| s.entries()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for [p1, p2, q1, q2] in &keys {
            assert!(keys.contains(&[-p1, -p2, -q1, -q2]));
            // swapping the two base factors' coordinates preserves P, M, Q
            assert!(keys.contains(&[*p2, *p1, *q2, *q1]));
        }
        // brute-force cross-check against the defining equation
        for p1 in -3i64..=3 {
            for p2 in -3i64..=3 {
                for q1 in -3i64..=3 {
                    for q2 in -3i64..=3 {
                        if p1 * q2 - p2 * q1 == 0 {
                            continue;
                        }
                        let (pp, m, qq) = (p1 * p1 + p2 * p2, p1 * q1 + p2 * q2, q1 * q1 + q2 * q2);
                        let kk = i64::from(k);
                        let z = |b: bool| if b { 0 } else { 1 };
                        let lhs = match c {
                            Condition::TwoSkt => z(n1) * pp + 2 * m,
                            Condition::KSkt => z(n1) * (kk - 1) * pp + 2 * m,
                            Condition::KSktKahler => (kk - 1) * pp + 2 * m,
                            Condition::KPlusOneSkt => {
                                z(n1) * kk * (kk - 1) / 2 * pp + 2 * kk * m + z(n2) * qq
                            }
                        };
                        assert_eq!(keys.contains(&[p1, p2, q1, q2]), lhs == 0);
                    }
                }
            }
        }
    }
}

#[test]
fn scyt_examples() {
    let s = scyt_constants(
        &inst(Condition::KSktKahler, 3, [0, 1, 5, -1]),
        ScytCase::WithSurface,
    )
    .unwrap();
    assert_eq!(s.l1, rat(-2));
    assert_eq!(s.l2, rat(-23));
    assert_eq!(s.l1_simplified, Some(rat(-2)));
    assert!(s.warning.is_none());

    let s = scyt_constants(
        &inst(Condition::KPlusOneSkt, 4, [0, 2, 2, -2]),
        ScytCase::WithFourfold,
    )
    .unwrap();
    assert_eq!((s.l1, s.l2), (rat(-8), rat(0)));

    let s = scyt_constants(
        &inst(Condition::KSktKahler, 3, [1, 0, 0, 1]),
        ScytCase::WithSurface,
    )
    .unwrap();
    assert!(s.l1_simplified.is_none());
    assert!(s.warning.is_some());
}

#[test]
fn scyt_general_relation() {
    let kappa = [BigInt::from(3), BigInt::from(1)];
    let h = [
        [BigInt::from(2), BigInt::from(-1)],
        [BigInt::from(-1), BigInt::from(5)],
    ];
    let [l1, l2] = scyt_general(&kappa, &h);
    assert_eq!(l1, rat(-5));
    assert_eq!(l2, rat(-2));
}

#[test]
fn closed_loop_on_k_skt_null_branch() {
    let cases = closed_loop(Condition::KSkt, 3, 1, true, false).unwrap();
    assert!(!cases.is_empty());
    assert!(cases.iter().all(LoopCase::agrees));
    assert!(cases.iter().any(|c| c.predicted));
    assert!(cases.iter().all(|c| c.nilpotent && c.dw_square == 0.0));
}

#[test]
fn solution_twists_are_skt_at_the_condition_level() {
    for (inst, twist) in solution_twists(Condition::KSktKahler, 2, 1, false, false).unwrap() {
        let w = twist_model(&twist).unwrap();
        let h = skt_core::skt::torsion_h(&w).unwrap();
        let e = skt_core::skt::lk_entry(&w, &h, 2, 0, 1e-9);
        assert!(e.holds, "{inst}");
    }
}
