use fusion_core::face::*;
use fusion_core::{c64, Error, ModelParams, C64};
use proptest::prelude::*;

fn params(k: usize) -> ModelParams {
    ModelParams::new(0.3, 4.0 * k as f64 + 2.7, k).unwrap()
}

fn steps(k: usize) -> Vec<f64> {
    neighbours(0.0, k)
}

/// Hexagon `(a, b, c, d, e, f)` with every boundary edge a level-`k` step.
fn hexagon(k: usize, a: f64, s: [usize; 5]) -> Option<[f64; 6]> {
    let st = steps(k);
    let b = a + st[s[0]];
    let c = b + st[s[1]];
    let f = a + st[s[2]];
    let e = f + st[s[3]];
    let ds: Vec<f64> = neighbours(c, k).into_iter().filter(|&d| is_step(e, d, k)).collect();
    if ds.is_empty() {
        return None;
    }
    Some([a, b, c, ds[s[4] % ds.len()], e, f])
}

fn all_quads(k: usize, a: f64) -> Vec<HeightQuad> {
    let mut out = Vec::new();
    for b in neighbours(a, k) {
        for d in neighbours(a, k) {
            for c in neighbours(b, k) {
                if is_step(d, c, k) {
                    out.push(HeightQuad::new(a, b, d, c));
                }
            }
        }
    }
    out
}

#[test]
fn inadmissible_quad_is_rejected() {
    let p = params(2);
    let q = HeightQuad::new(5.0, 6.0, 7.0, 6.0);
    assert!(!q.admissible(2));
    assert!(matches!(w_fused(2, q, c64(-0.3, 0.0), &p), Err(Error::Inadmissible)));
    assert_eq!(w_fused_or_zero(2, q, c64(-0.3, 0.0), &p).unwrap(), c64(0.0, 0.0));
}

#[test]
fn level_one_weights_include_r0() {
    let p = params(1);
    let u = c64(-0.3, 0.02);
    let q = HeightQuad::new(4.0, 5.0, 5.0, 6.0);
    let r0 = fusion_core::vertex::r0_scalar(u, &p).unwrap();
    assert!((w1(q, u, &p).unwrap() - r0 * w1_reduced(q, u, &p).unwrap()).norm() < 1e-14);
    assert!((w_fused(1, q, u, &p).unwrap() - w1(q, u, &p).unwrap()).norm() < 1e-14);
}

#[test]
fn path_independence_is_exhaustive_to_roundoff() {
    for k in 1..=3usize {
        let p = params(k);
        let a = k as f64 + 2.25;
        for q in all_quads(k, a) {
            let sp = path_spread(k, q, c64(-0.4, 0.03), &p).unwrap();
            let w = w_fused(k, q, c64(-0.4, 0.03), &p).unwrap();
            assert!(sp < 1e-10 * w.norm().max(1.0), "k={k} {q:?} spread {sp:e}");
        }
    }
}

#[test]
fn fused_identities_on_sample_hexagons() {
    for k in 1..=3usize {
        let p = params(k);
        let a = 2.0 * k as f64 + 1.0;
        let mut count = 0;
        for s0 in 0..=k {
            for s1 in 0..=k {
                let Some(h) = hexagon(k, a, [s0, s1, (s0 + 1) % (k + 1), s1, s0 + s1]) else { continue };
                let y = face_ybe_residual(k, h, c64(-0.3, 0.02), c64(-0.75, -0.01), &p).unwrap();
                assert!(y < 1e-9, "k={k} {h:?} {y:e}");
                count += 1;
            }
        }
        assert!(count > 0);
        let un = face_unitarity_residual(k, a, a, c64(-0.37, 0.01), &p).unwrap();
        assert!(un < 1e-9);
        for q in all_quads(k, a) {
            let cr = face_crossing_residual(k, q, c64(-0.45, 0.0), &p).unwrap();
            let rf = face_reflection_residual(k, q, c64(-0.3, 0.04), &p).unwrap();
            let sc = w_fused(k, q, c64(-0.45, 0.0), &p).unwrap().norm().max(1.0);
            assert!(cr < 1e-9 * sc && rf < 1e-9 * sc, "k={k} {q:?} cross {cr:e} refl {rf:e}");
        }
    }
}

#[test]
fn elementary_crossing_form() {
    let p = params(1);
    for q in all_quads(1, 5.0) {
        assert!(face_crossing_residual_k1(q, c64(-0.35, 0.0), &p).unwrap() < 1e-12);
    }
}

#[test]
fn gauge_signs() {
    let s: Vec<f64> = (0..6).map(gauge_sign).collect();
    assert_eq!(s, vec![1.0, 1.0, -1.0, -1.0, 1.0, 1.0]);
    for a in 0..10i64 {
        let next = if a % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(gauge_sign(a + 1), next * gauge_sign(a));
    }
    let p = params(1);
    assert!(matches!(gauge_g(4.5, &p), Err(Error::Domain(_))));
}

fn sample_u() -> impl Strategy<Value = C64> {
    (-1.0f64..0.0, -0.05f64..0.05).prop_map(|(r, i)| c64(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn level_two_face_ybe(u in sample_u(), v in sample_u(), s in proptest::array::uniform5(0usize..3), base in 4i32..7) {
        let p = params(2);
        if let Some(h) = hexagon(2, base as f64 + 0.5, s) {
            prop_assert!(face_ybe_residual(2, h, u, v, &p).unwrap() < 1e-8);
        }
    }

    #[test]
    fn level_one_unitarity_with_real_heights(u in sample_u(), a in 3.0f64..5.0, up in proptest::bool::ANY) {
        let p = params(1);
        let c = if up { a + 2.0 } else { a };
        prop_assert!(face_unitarity_residual(1, a, c, u, &p).unwrap() < 1e-10);
    }
}
