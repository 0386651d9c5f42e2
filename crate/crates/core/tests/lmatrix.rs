use fusion_core::lmatrix::*;
use fusion_core::{c64, Error, ModelParams, C64};
use proptest::prelude::*;

fn params(k: usize) -> ModelParams {
    ModelParams::new(0.3, 6.0 * k as f64 + 5.7, k).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

const SAMPLES: [(f64, f64); 3] = [(2.25, 3.25), (3.25, 2.25), (1.25, 6.25)];

fn def(k: usize, m0: f64, mk: f64, n0: f64, nk: f64, u: C64, p: &ModelParams) -> C64 {
    l_def(k, m0, mk, n0, nk, u, p).unwrap().value
}

#[test]
fn level_one_closed_forms() {
    let p = params(1);
    let u = c64(-0.3, 0.05);
    for (m, n) in SAMPLES {
        let (m, n) = (m + 1.0, n + 1.0);
        for sm in [-1.0, 1.0] {
            for sn in [-1.0, 1.0] {
                let d = def(1, m, m + sm, n, n + sn, u, &p);
                assert!(rel(l1_closed(m, m + sm, n, n + sn, u, &p).unwrap(), d) < 1e-12);
            }
        }
    }
}

#[test]
fn closed_forms_match_the_defining_sum() {
    for k in 1..=3usize {
        let p = params(k);
        let kf = k as f64;
        for u in [c64(-0.3, 0.05), c64(0.4, -0.1)] {
            for (m, n) in SAMPLES {
                let (m, n) = (m + kf, n + kf);
                for i in 0..=k {
                    for j in 0..=k {
                        let d = def(k, m, m - kf + 2.0 * i as f64, n, n - kf + 2.0 * j as f64, u, &p);
                        let c = l_closed(k, i, j, m, n, u, &p).unwrap();
                        assert!(rel(c, d) < 1e-10, "k={k} i={i} j={j} {c} {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn tail_relation_forms() {
    for k in 1..=3usize {
        let p = params(k);
        let kf = k as f64;
        let u = c64(-0.3, 0.05);
        let (m, n) = (kf + 2.25, kf + 3.25);
        for j in 0..=k {
            let mk = m + kf - 2.0 * j as f64;
            let up = def(k, m, mk, n, n + kf, u, &p);
            let down = def(k, m, mk, n, n - kf, u, &p);
            assert!(rel(l_tail_up(k, m, n, j, u, &p).unwrap(), up) < 1e-10);
            assert!(rel(l_tail_down(k, m, n, j, u, &p).unwrap(), down) < 1e-10);
            let plus = l_tail_up_plus_j(k, m, n, j, u, &p).unwrap();
            if j == 0 {
                assert!(rel(plus, up) < 1e-10);
            } else if j < k {
                assert!(rel(plus, up) > 1e-3, "k={k} j={j}");
            }
        }
    }
}

#[test]
fn both_recursions_and_the_fusion_product() {
    for k in 2..=3usize {
        let p = ModelParams::new(0.3, 4.0 * k as f64 + 2.7, k).unwrap();
        let kf = k as f64;
        let u = c64(-0.4, 0.0);
        let lfn = |kk: usize, a: f64, b: f64, c: f64, d: f64, w: C64| -> fusion_core::Result<C64> {
            if kk == 0 {
                return Ok(c64(if a == b && c == d { 1.0 } else { 0.0 }, 0.0));
            }
            Ok(l_def(kk, a, b, c, d, w, &p)?.value)
        };
        let mut literal_worst: f64 = 0.0;
        for (m, n) in [(kf + 4.0, kf + 6.0), (kf + 5.0, kf + 4.0), (kf + 3.0, kf + 9.0)] {
            for i in 0..=k {
                for j in 0..=k {
                    let (mk, nk) = (m - kf + 2.0 * i as f64, n - kf + 2.0 * j as f64);
                    let d = def(k, m, mk, n, nk, u, &p);
                    assert!(rel(recursion_first(k, i, j, m, n, u, &lfn).unwrap(), d) < 1e-10);
                    assert!(rel(recursion_second(k, i, j, m, n, u, &lfn).unwrap(), d) < 1e-10);
                    for path in fusion_core::face::unit_paths(m, mk, k) {
                        assert!(rel(l_fusion(&path, n, nk, u, &p).unwrap(), d) < 1e-10);
                        let lit = l_fusion_shifts(&path, n, nk, u, |k, t| if t == 0 { (k - 1) as f64 } else { 0.0 }, &p).unwrap();
                        literal_worst = literal_worst.max(rel(lit, d));
                    }
                }
            }
        }
        // Shifting only the first factor coincides with the staircase at k = 2 and not beyond.
        if k == 2 {
            assert!(literal_worst < 1e-10);
        } else {
            assert!(literal_worst > 1e-3);
        }
    }
}

#[test]
fn inadmissible_heights_are_rejected() {
    let p = params(2);
    assert!(matches!(l_def(2, 5.0, 6.0, 5.0, 7.0, c64(-0.3, 0.0), &p), Err(Error::Inadmissible)));
    assert!(matches!(l1_closed(5.0, 7.0, 5.0, 6.0, c64(-0.3, 0.0), &p), Err(Error::Inadmissible)));
}

fn scan_ok(k: usize, ell: usize, us: impl Iterator<Item = f64>) -> (usize, usize) {
    let p = ModelParams::new(0.3, 4.0 * k as f64 + 2.7, k).unwrap();
    let m = k as f64 + 2.0;
    let mut good = 0;
    let mut total = 0;
    for u in us {
        let w = l_max_weight_scan(k, ell, m, u, &p).unwrap();
        total += 1;
        good += w.holds() as usize;
    }
    (good, total)
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
}

#[test]
fn max_weight_holds_at_level_one_on_the_window() {
    let p = params(1);
    for ell in 0..=1 {
        for u in grid(-1.0, 0.0, 12) {
            assert!(l_max_weight(1, ell, 3.0, u, &p).unwrap().holds(), "ell={ell} u={u}");
        }
    }
    assert!(matches!(l_max_weight(1, 0, 3.0, 0.5, &p), Err(Error::Domain(_))));
    assert!(matches!(l_max_weight(2, 0, 1.5, -1.0, &params(2)), Err(Error::Domain(_))));
}

#[test]
fn max_weight_fails_at_the_extremes_for_higher_levels() {
    // Stated window -1 < u + (k-1)/2 < 0.
    let (g, t) = scan_ok(2, 0, grid(-1.0, -0.5, 10));
    assert_eq!(g, 0, "{g}/{t}");
    let (g, _) = scan_ok(2, 2, grid(-1.0, -0.5, 10));
    assert_eq!(g, 0);
    let (g, t) = scan_ok(2, 1, grid(-1.5, -0.5, 10));
    assert_eq!(g, t);
    for ell in [0, 3] {
        let (g, _) = scan_ok(3, ell, grid(-2.0, -1.0, 10));
        assert_eq!(g, 0, "ell={ell}");
    }
}

#[test]
fn max_weight_holds_on_the_shifted_window() {
    for k in 1..=3usize {
        for ell in 0..=k {
            let (g, t) = scan_ok(k, ell, grid(-(k as f64), -(k as f64) + 1.0, 10));
            assert_eq!(g, t, "k={k} ell={ell}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn level_two_closed_matches_definition(ur in -1.0f64..1.0, ui in -0.2f64..0.2, m in 4.0f64..7.0, dn in -2i32..3, i in 0usize..3, j in 0usize..3) {
        let p = params(2);
        let n = m + dn as f64 + 0.5;
        let u = c64(ur, ui);
        let d = def(2, m, m - 2.0 + 2.0 * i as f64, n, n - 2.0 + 2.0 * j as f64, u, &p);
        let c = l_closed(2, i, j, m, n, u, &p).unwrap();
        prop_assert!(rel(c, d) < 1e-9);
    }
}
