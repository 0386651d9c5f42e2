//! Convention choices recorded in the report header, with the measurements
//! that fixed them at the run's parameters.

use std::collections::BTreeMap;

use fusion_core::face::HeightQuad;
use fusion_core::intertwiner::pinned_c_squared;
use fusion_core::tail::{lw_proposition, w_bar, weak_i_phi, WeakContext};
use fusion_core::{c64, ModelParams, Result, C64};

use crate::config::{SuiteConfig, SuiteId};
use crate::suites::{rel, Context};

/// Shift applied to one bracket argument by the sensitivity probe.
pub const PERTURBATION: f64 = 1e-5;

fn or_unavailable(r: Result<String>) -> String {
    r.unwrap_or_else(|e| format!("unavailable: {e}"))
}

/// Fixed context used by the tail calibrations.
pub fn reference_context(k: usize) -> WeakContext {
    let v = [c64(0.11, 0.03), c64(-0.27, 0.05), c64(0.34, -0.02), c64(-0.05, 0.07)];
    WeakContext { k, n: k as f64 + 2.25, u1: c64(-0.3, 0.05), u2: c64(0.15, -0.1), v: v.iter().copied().cycle().take(k).collect() }
}

/// Scaled weak residual of `I_Φ̂` without and with the bracket shift.
pub fn perturbation_probe(k: usize, p: &ModelParams) -> Result<(f64, f64)> {
    let ctx = reference_context(k);
    Ok((weak_i_phi(&ctx, 0.0, p)?.scaled(), weak_i_phi(&ctx, PERTURBATION, p)?.scaled()))
}

/// Proposition residual at level one with the inline corner order and with `b` and `d` exchanged.
pub fn corner_order_probe(p: &ModelParams) -> Result<(f64, f64)> {
    let p1 = p.at_level(1)?;
    // Heights n, n + 1, n + 2 inside (0, r).
    let n = 3.25f64.min((p.r - 2.0) / 2.0);
    let u = c64(-0.45, 0.05);
    let (mut inline, mut swapped) = (0.0f64, 0.0f64);
    for s in 0..=1usize {
        let (lhs, rhs) = lw_proposition(1, n, s, u, &p1)?;
        let alt = w_bar(1, HeightQuad::new(n, n + 1.0 - 2.0 * s as f64, n + 1.0, n), u, &p1)?;
        inline = inline.max(rel(lhs, rhs));
        swapped = swapped.max(rel(alt, rhs));
    }
    Ok((inline, swapped))
}

fn c_squared_probe(p: &ModelParams) -> Result<String> {
    let want: C64 = p.c_squared();
    let got = pinned_c_squared(c64(-0.4, 0.0), 1.5, 2.5, p)?;
    Ok(format!(
        "C^2 = -i tau x^(-r/2); pinned by the level-one inversion: modulus difference {:e}, phase difference {:e}",
        (got.norm() - want.norm()).abs() / want.norm(),
        (got / want).arg()
    ))
}

pub fn calibrations(cfg: &SuiteConfig, ctx: &Context) -> BTreeMap<String, String> {
    let p = &cfg.params;
    let k = p.k;
    let mut m = BTreeMap::new();
    let mut put = |key: &str, v: String| {
        m.insert(key.to_string(), v);
    };
    put("vertex.basis", "(++, +-, -+, --), M[out, in]; spin index i <-> eps = k - 2i".into());
    put("vertex.crossing-sign", format!("(-1)^k = {}", fusion_core::vertex::crossing_sign(k)));
    put("face.corner-order", "W(a b; d c): a NW, b NE, d SW, c SE".into());
    put("face.gauge", "s_a = (-1)^(a(a-1)/2), integer heights".into());
    put("intertwiner.dual-normalization", "gauge factor (-1)^(k a) stripped".into());
    put("lmatrix.fusion-shifts", "u + k - 1 - t on factor t".into());
    put("characters.string-index", "(a - m) mod 2k".into());
    put("characters.i-of-s-prefactor", "x^(-k/4)".into());
    put("tail.lambda-lead", "with prod_j [u1 - v_j - k/2] / [u1 - v_j + k/2]".into());
    put("tail.vanishing-metric", "|sum| / max(1, largest symmetrized piece)".into());
    put("tail.necessary-condition-range", "1 <= s <= 2k while every bracket under a square root is positive".into());
    put("intertwiner.c-squared", or_unavailable(c_squared_probe(p)));
    if let Some(q) = &ctx.q {
        let how = match k {
            1 => "sigma^y".to_string(),
            2 => "closed theta-ratio form".to_string(),
            _ => format!("numerical null vector, largest entry 1, solve residual {:e}", q.solve_residual),
        };
        put("vertex.q-matrix", how);
    }
    if cfg.suites.contains(&SuiteId::Tail) {
        put(
            "tail.w-bar-normalization",
            or_unavailable(corner_order_probe(p).map(|(a, b)| {
                format!("W / W(n, n+k; n+k, n+2k), inline order (level-one proposition residual {a:e}; b and d exchanged {b:e})")
            })),
        );
        put(
            "tail.perturbation",
            or_unavailable(perturbation_probe(k, p).map(|(clean, pert)| {
                format!("shift {PERTURBATION:e}: scaled residual {pert:e}, clean {clean:e}, ratio {:e}", pert / clean.max(f64::MIN_POSITIVE))
            })),
        );
    }
    m
}
