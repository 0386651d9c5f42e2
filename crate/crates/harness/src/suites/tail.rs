use fusion_core::tail::{
    lw_proposition_residual, necessary_condition_in_window, necessary_condition_sum, proportionality, weak_i_lambda, weak_i_phi,
    LambdaLead, WeakContext,
};
use fusion_core::{Error, Result};

use super::{rel, vanishing_threshold, Context, Measurement};
use crate::sampling::Draw;

pub fn identities(k: usize) -> Vec<(&'static str, f64)> {
    let v = vanishing_threshold(k);
    vec![
        ("tail.weak-phi", v),
        ("tail.weak-lambda", v),
        ("tail.proportionality", 1e-8),
        ("tail.lw-proposition", 1e-8),
        ("tail.necessary-condition", v),
    ]
}

/// Margin kept between the heights `n, ..., n + 2k` and the strip edges `0, r`.
const MARGIN: f64 = 0.25;

/// Random weak-symmetrization context at level `k` with `0 < n < n + 2k < r`.
///
/// Outside this strip some brackets under the square roots turn negative and
/// the principal branch breaks the relations.
pub fn draw_context(d: &mut Draw, k: usize, r: f64) -> Result<WeakContext> {
    let hi = r - 2.0 * k as f64 - MARGIN;
    if hi <= MARGIN {
        return Err(Error::Singular("no height n with 0 < n and n + 2k < r"));
    }
    let n = d.real("n", MARGIN, hi);
    let u1 = d.spectral("u1", -0.5, 0.0);
    let u2 = d.spectral("u2", 0.0, 0.3);
    let v = (0..k).map(|j| d.spectral(&format!("v{j}"), -0.5, 0.5)).collect();
    Ok(WeakContext { k, n, u1, u2, v })
}

pub fn sample(ctx: &Context, d: &mut Draw, index: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let ids = identities(k);
    let w = draw_context(d, k, p.r)?;
    let phi = weak_i_phi(&w, 0.0, p)?.scaled();
    let lambda = weak_i_lambda(&w, LambdaLead::Corrected, p)?.scaled();
    let (a, b) = proportionality(&w, p)?;
    let prop = lw_proposition_residual(k, w.n, w.u1 - w.u2, p)?;
    let s = index % (2 * k + 1);
    let (tot, big) = necessary_condition_sum(k, w.n, s, p)?;
    let mut nec = Measurement::new(ids[4].0, tot.norm() / big.max(1.0), ids[4].1).detail("s", s);
    if s == 0 {
        nec = nec.reason("every term carries a [0] factor");
    } else if !necessary_condition_in_window(k, w.n, s, p) {
        nec = nec.outside("a bracket under a square root is negative; outside the mapped range");
    }
    Ok(vec![
        Measurement::new(ids[0].0, phi, ids[0].1),
        Measurement::new(ids[1].0, lambda, ids[1].1),
        Measurement::new(ids[2].0, rel(a, b), ids[2].1),
        Measurement::new(ids[3].0, prop, ids[3].1),
        nec,
    ])
}
