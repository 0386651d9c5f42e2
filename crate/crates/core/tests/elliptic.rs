use std::f64::consts::PI;

use fusion_core::elliptic::*;
use fusion_core::{c64, Error, ModelParams, C64};
use proptest::prelude::*;

// θ1(u|τ) = 2 Σ_{n>=0} (-1)^n q^{(n+1/2)²/2} sin((2n+1)πu), q = e^{2πiτ}.
fn theta1_series(u: C64, tau: C64) -> C64 {
    let mut tot = c64(0.0, 0.0);
    for n in 0..60 {
        let h = n as f64 + 0.5;
        let e = (c64(0.0, PI) * tau * h * h).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        tot += sign * e * (u * PI * (2 * n + 1) as f64).sin();
    }
    tot * 2.0
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn params() -> ModelParams {
    ModelParams::new(0.3, 5.0, 1).unwrap()
}

#[test]
fn theta_one_vanishes_at_origin() {
    for t in [0.3, 0.8, 1.7] {
        assert_eq!(theta_jacobi(1, c64(0.0, 0.0), c64(0.0, t)).unwrap().norm(), 0.0);
    }
}

#[test]
fn theta_two_is_half_shift_of_theta_one() {
    let tau = c64(0.0, 0.8);
    let a = theta_jacobi(2, c64(0.3, 0.0), tau).unwrap();
    let b = theta_jacobi(1, c64(0.8, 0.0), tau).unwrap();
    assert!(rel(a, b) < 1e-15);
}

#[test]
fn theta_one_matches_series() {
    let tau = c64(0.0, 0.8);
    let u = c64(0.3, 0.0);
    assert!(rel(theta_jacobi(1, u, tau).unwrap(), theta1_series(u, tau)) < 1e-12);
}

#[test]
fn theta_zero_and_three_match_their_series() {
    // θ0 = 1 + 2 Σ (-1)^n q^{n²/2} cos 2πnu, θ3 = 1 + 2 Σ q^{n²/2} cos 2πnu.
    let tau = c64(0.1, 0.9);
    let u = c64(0.21, 0.05);
    let (mut t0, mut t3) = (c64(1.0, 0.0), c64(1.0, 0.0));
    for n in 1..40 {
        let nf = n as f64;
        let e = (c64(0.0, PI) * tau * nf * nf).exp();
        let c = (u * 2.0 * PI * nf).cos();
        t3 += e * c * 2.0;
        t0 += e * c * 2.0 * if n % 2 == 0 { 1.0 } else { -1.0 };
    }
    assert!(rel(theta_jacobi(0, u, tau).unwrap(), t0) < 1e-12);
    assert!(rel(theta_jacobi(3, u, tau).unwrap(), t3) < 1e-12);
}

#[test]
fn theta_rejects_bad_nome() {
    assert!(matches!(theta_jacobi(1, c64(0.1, 0.0), c64(0.2, -0.1)), Err(Error::Domain(_))));
    assert!(matches!(theta_jacobi(5, c64(0.1, 0.0), c64(0.0, 1.0)), Err(Error::Domain(_))));
}

#[test]
fn theta_p_examples() {
    let p = c64(0.1, 0.0);
    assert_eq!(theta_p(c64(1.0, 0.0), p).unwrap().norm(), 0.0);
    let z = c64(0.4, 0.0);
    let lhs = theta_p(p * z, p).unwrap();
    let rhs = -theta_p(z, p).unwrap() / z;
    assert!(rel(lhs, rhs) < 1e-14);
    let v = theta_p(c64(0.5, 0.0), p).unwrap();
    assert!(v.re > 0.0 && v.im == 0.0);
    assert!(matches!(theta_p(c64(0.0, 0.0), p), Err(Error::Domain(_))));
}

#[test]
fn pochhammer_matches_direct_loop() {
    let (z, p) = (0.3f64, 0.2f64);
    let direct: f64 = (0..200).map(|n| 1.0 - z * p.powi(n)).product();
    let v = q_pochhammer(c64(z, 0.0), c64(p, 0.0)).unwrap();
    assert!((v.re - direct).abs() < 1e-12);
    let m = multi_pochhammer(c64(z, 0.0), &[c64(p, 0.0)], 200).unwrap();
    assert!((m.re - direct).abs() < 1e-12);
}

#[test]
fn multi_pochhammer_at_zero_is_one() {
    let v = multi_pochhammer(c64(0.0, 0.0), &[c64(0.3, 0.0), c64(0.4, 0.0)], 40).unwrap();
    assert_eq!(v, c64(1.0, 0.0));
}

#[test]
fn multi_pochhammer_factorizes() {
    let z = c64(0.5, 0.0);
    let (p1, p2) = (c64(0.3, 0.0), c64(0.4, 0.0));
    let mut fact = c64(1.0, 0.0);
    for n2 in 0..120 {
        fact *= q_pochhammer(z * p2.powi(n2), p1).unwrap();
    }
    let m = multi_pochhammer(z, &[p1, p2], 120).unwrap();
    assert!(rel(m, fact) < 1e-12);
    assert!(rel(double_pochhammer(z, p1, p2).unwrap(), fact) < 1e-12);
}

#[test]
fn bracket_basics() {
    let p = params();
    assert_eq!(br(0.0, &p).norm(), 0.0);
    let u = c64(0.37, 0.0);
    assert!((bracket(-u, &p) + bracket(u, &p)).norm() < 1e-14);
    let u = c64(0.41, 0.0);
    assert!(rel(bracket(u + p.r, &p), -bracket(u, &p)) < 1e-12);
    assert_eq!(bracket_star(u, &p), bracket_s(u, p.r - 1.0, p.x));
}

#[test]
fn bracket_quasi_periodicity_from_theta_shift() {
    // Θ_p(p z) = -z^{-1} Θ_p(z) gives [u + s] = -[u] before any reduction is applied.
    let (x, s) = (0.3f64, 5.0);
    let u = c64(0.41, 0.07);
    let raw = |w: C64| {
        let pp = c64(x.powf(2.0 * s), 0.0);
        xpow(x, w * w / s - w) * theta_p(xpow(x, w * 2.0), pp).unwrap()
    };
    assert!(rel(raw(u + s), -raw(u)) < 1e-12);
    assert!(rel(bracket_s(u + s, s, x), raw(u + s)) < 1e-12);
}

#[test]
fn combinatorics_examples() {
    let p = params();
    let a = c64(2.37, 0.1);
    assert_eq!(bracket_range(a, a - 1.0, &p), c64(1.0, 0.0));
    assert_eq!(falling(a, 0, &p), c64(1.0, 0.0));
    assert!((pairing(2.0, 2.0, 0, &p).unwrap() - 1.0).norm() < 1e-14);
    let f = falling(c64(4.5, 0.0), 3, &p);
    assert!(rel(f, br(4.5, &p) * br(3.5, &p) * br(2.5, &p)) < 1e-15);
    let b = binomial(c64(4.5, 0.0), 2, &p).unwrap();
    assert!(rel(b, br(4.5, &p) * br(3.5, &p) / (br(2.0, &p) * br(1.0, &p))) < 1e-14);
    assert!(matches!(pairing(3.0, 2.0, 2, &p), Err(Error::Inadmissible)));
}

#[test]
fn binomial_with_vanishing_denominator_is_singular() {
    // r = 5 makes [5] vanish inside [5]_5.
    let p = params();
    assert!(matches!(binomial(c64(7.2, 0.0), 5, &p), Err(Error::Singular(_))));
}

#[test]
fn qint_examples() {
    assert_eq!(qint(1, 0.3), 1.0);
    assert_eq!(qint(0, 0.3), 0.0);
    assert!((qint(2, 0.3) - (0.3 + 1.0 / 0.3)).abs() < 1e-14);
    assert!((qint(3, 0.3) - (0.09 + 1.0 + 1.0 / 0.09)).abs() < 1e-12);
}

#[test]
fn params_validation_and_derived_values() {
    assert!(matches!(ModelParams::new(1.2, 5.0, 1), Err(Error::Domain(_))));
    assert!(matches!(ModelParams::new(0.3, 3.0, 1), Err(Error::Domain(_))));
    assert!(matches!(ModelParams::new(0.3, 5.0, 0), Err(Error::Domain(_))));
    let p = ModelParams::new(0.3, 5.7, 2).unwrap();
    assert!(p.p > 0.0 && p.p < p.p_star && p.p_star < 1.0);
    assert!(p.tau.im > 0.0);
    // e^{-2πi/τ} = x^{2r}
    let lhs = (c64(0.0, -2.0 * PI) / p.tau).exp();
    assert!((lhs - p.p).norm() < 1e-15);
    assert!(p.p.powi(p.series_cutoff as i32) < p.tol * 1e-2);
    assert!((p.c_squared() - c64(0.0, -1.0) * p.tau * p.x.powf(-p.r / 2.0)).norm() < 1e-12 * p.c_squared().norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_odd(u in -2.0f64..2.0) {
        let p = params();
        let a = br(u, &p);
        prop_assert!((br(-u, &p) + a).norm() < p.tol * a.norm().max(1.0));
    }

    #[test]
    fn bracket_is_quasi_periodic(u in -2.0f64..2.0) {
        let p = params();
        let a = br(u, &p);
        prop_assert!((br(u + p.r, &p) + a).norm() < p.tol * a.norm().max(1e-300));
    }

    #[test]
    fn bracket_is_real_on_real_axis(u in -2.0f64..2.0) {
        let p = params();
        prop_assert!(br(u, &p).im.abs() < p.tol);
    }

    #[test]
    fn theta_product_matches_series(ur in -1.0f64..1.0, ui in -0.3f64..0.3, t in 0.3f64..2.0) {
        let (u, tau) = (c64(ur, ui), c64(0.0, t));
        let a = theta_jacobi(1, u, tau).unwrap();
        let b = theta1_series(u, tau);
        prop_assert!((a - b).norm() < 1e-12 * b.norm().max(1e-3));
    }
}
