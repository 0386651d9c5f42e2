use fusion_core::elliptic::{bracket, br, pairing};
use fusion_core::face::HeightQuad;
use fusion_core::tail::*;
use fusion_core::{c64, ModelParams, C64};
use proptest::prelude::*;

fn params(k: usize) -> ModelParams {
    ModelParams::new(0.3, 6.0 * k as f64 + 5.7, k).unwrap()
}

fn context(k: usize, v: Vec<C64>) -> WeakContext {
    WeakContext { k, n: k as f64 + 2.25, u1: c64(-0.3, 0.05), u2: c64(0.15, -0.1), v }
}

fn v_strategy(k: usize) -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec((-0.5f64..0.5, -0.2f64..0.2).prop_map(|(a, b)| c64(a, b)), k)
}

#[test]
fn weak_symmetrization_small_cases() {
    let p = params(2);
    let f = |v: &[C64]| Ok(v[0] * 2.0 + v[0] * v[0] * v.get(1).copied().unwrap_or(c64(1.0, 0.0)));
    let v1 = [c64(0.2, 0.1)];
    assert_eq!(weak_symmetrize(&v1, &p, f).unwrap(), f(&v1).unwrap());
    let v = [c64(0.2, 0.1), c64(-0.3, 0.05)];
    let d = v[1] - v[0];
    let two_term = f(&v).unwrap() + bracket(d - 1.0, &p) / bracket(d + 1.0, &p) * f(&[v[1], v[0]]).unwrap();
    let got = weak_symmetrize(&v, &p, f).unwrap();
    assert!((got - two_term).norm() < 1e-14 * two_term.norm());
    // f(v1, v2) = -([v2-v1-1]/[v2-v1+1]) f(v2, v1) cancels.
    let g0 = |v: &[C64]| v[0] * v[0] + v[1];
    let anti = |v: &[C64]| {
        if v == [c64(0.2, 0.1), c64(-0.3, 0.05)] {
            Ok(g0(v))
        } else {
            let d = v[0] - v[1];
            Ok(-g0(&[v[1], v[0]]) * bracket(d + 1.0, &p) / bracket(d - 1.0, &p))
        }
    };
    assert!(weak_symmetrize(&v, &p, anti).unwrap().norm() < 1e-14);
}

#[test]
fn weak_symmetrization_has_k_factorial_terms() {
    let p = params(3);
    let v = [c64(0.1, 0.0), c64(0.25, 0.02), c64(-0.3, -0.01)];
    let mut calls = 0;
    weak_symmetrize(&v, &p, |_| {
        calls += 1;
        Ok(c64(1.0, 0.0))
    })
    .unwrap();
    assert_eq!(calls, 6);
}

#[test]
fn w_bar_level_one_is_the_weight_without_r0() {
    let p = params(1);
    let u = c64(-0.45, 0.15);
    let q = HeightQuad::new(3.25, 4.25, 2.25, 3.25);
    let w = fusion_core::face::w1_reduced(q, u, &p).unwrap() / fusion_core::face::w1_reduced(HeightQuad::new(3.25, 4.25, 4.25, 5.25), u, &p).unwrap();
    assert!((w_bar(1, q, u, &p).unwrap() - w).norm() < 1e-14);
}

#[test]
fn lw_proposition_examples() {
    let p = params(1);
    let (a, b) = lw_proposition(1, 4.0, 0, c64(-0.4, 0.0), &p).unwrap();
    assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
    let p2 = params(2);
    let (a, b) = lw_proposition(2, 4.25, 1, c64(-0.4, 0.0), &p2).unwrap();
    assert!((a - b).norm() < 1e-8 * a.norm().max(1.0));
    for k in 1..=3 {
        let p = params(k);
        for u in [c64(-0.4, 0.0), c64(-0.45, 0.15), c64(0.3, -0.1)] {
            assert!(lw_proposition_residual(k, k as f64 + 2.25, u, &p).unwrap() < 1e-9);
        }
    }
}

#[test]
fn unsigned_root_form_of_the_proposition_fails_below_the_top() {
    // sqrt([n-k][n+2k]/([n+k][n])) without a sign in place of sqrt([n+k-2s][n+2k]/([n+k][n])) (-1)^{s+k}.
    let k = 2;
    let p = params(k);
    let (n, u) = (4.25, c64(-0.4, 0.0));
    let kf = k as f64;
    for s in 0..k {
        let (lhs, rhs) = lw_proposition(k, n, s, u, &p).unwrap();
        let sign = if (s + k) % 2 == 0 { 1.0 } else { -1.0 };
        let fix = ((br(n + kf - 2.0 * s as f64, &p)) / br(n - kf, &p)).sqrt() * sign;
        let uncorrected = rhs / fix;
        assert!((lhs - uncorrected).norm() > 1e-3 * lhs.norm(), "s={s}");
    }
    let _ = pairing(n, n, 0, &p).unwrap();
}

#[test]
fn literal_lambda_lead_does_not_vanish() {
    for k in 1..=3 {
        let p = params(k);
        let v: Vec<C64> = (0..k).map(|j| c64(0.31 - 0.27 * j as f64, 0.1 - 0.07 * j as f64)).collect();
        let ctx = context(k, v);
        assert!(weak_i_lambda(&ctx, LambdaLead::Bare, &p).unwrap().scaled() > 1e-4, "k={k}");
    }
}

#[test]
fn necessary_condition_examples() {
    let p = params(1);
    let (t, big) = necessary_condition_sum(1, 5.2, 1, &p).unwrap();
    assert!(t.norm() < 1e-8 * big.max(1.0));
    let p = params(2);
    let (t, big) = necessary_condition_sum(2, 5.2 + 2.0, 2, &p).unwrap();
    assert!(t.norm() < 1e-8 * big.max(1.0));
    // s = 0: every term carries a [0] factor.
    let (t, big) = necessary_condition_sum(2, 7.2, 0, &p).unwrap();
    assert_eq!((t.norm(), big), (0.0, 0.0));
}

#[test]
fn necessary_condition_vanishes_inside_its_window() {
    for k in 1..=3usize {
        let p = params(k);
        for n in [5.2 + k as f64, 7.25 + k as f64] {
            for s in 1..=2 * k {
                let (t, big) = necessary_condition_sum(k, n, s, &p).unwrap();
                if necessary_condition_in_window(k, n, s, &p) {
                    assert!(t.norm() < 1e-8 * big.max(1.0), "k={k} n={n} s={s}");
                }
            }
        }
    }
    let p = params(3);
    assert!(!necessary_condition_in_window(3, 8.2, 6, &p));
    let (t, big) = necessary_condition_sum(3, 8.2, 6, &p).unwrap();
    assert!(t.norm() > 1e-3 * big);
}

#[test]
fn perturbed_phi_is_detected() {
    for k in 1..=3usize {
        let p = params(k);
        let v: Vec<C64> = (0..k).map(|j| c64(0.31 - 0.27 * j as f64, 0.1 - 0.07 * j as f64)).collect();
        let ctx = context(k, v);
        let clean = weak_i_phi(&ctx, 0.0, &p).unwrap().scaled();
        let bent = weak_i_phi(&ctx, 1e-5, &p).unwrap();
        // The relative change is of order eps times a logarithmic derivative.
        assert!(bent.scaled() > 1e-7 && bent.scaled() < 1e-4, "k={k} {:e}", bent.scaled());
        assert!(bent.scaled() > 1e4 * clean.max(1e-16));
    }
}

fn check_weak(k: usize, v: Vec<C64>, tol: f64) -> Result<(), TestCaseError> {
    let p = params(k);
    let ctx = context(k, v);
    let phi = match weak_i_phi(&ctx, 0.0, &p) {
        Ok(r) => r,
        Err(fusion_core::Error::Singular(_)) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    prop_assert!(phi.scaled() < tol, "phi {:e}", phi.scaled());
    for u2 in [ctx.u2, -ctx.u2] {
        let c = WeakContext { u2, ..ctx.clone() };
        let lam = weak_i_lambda(&c, LambdaLead::Corrected, &p).unwrap();
        prop_assert!(lam.scaled() < tol, "lambda {:e}", lam.scaled());
    }
    let (a, b) = proportionality(&ctx, &p).unwrap();
    prop_assert!((a - b).norm() < 1e-8 * a.norm().max(1.0));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn weak_identities_level_one(v in v_strategy(1)) { check_weak(1, v, 1e-8)?; }

    #[test]
    fn weak_identities_level_two(v in v_strategy(2)) { check_weak(2, v, 1e-7)?; }

    #[test]
    fn weak_identities_level_three(v in v_strategy(3)) { check_weak(3, v, 1e-6)?; }
}
