use fusion_core::face::unit_paths;
use fusion_core::lmatrix::{l_closed, l_def, l_fusion, l_max_weight_scan, l_tail_down, l_tail_up, MaxWeight};
use fusion_core::{Error, Result};

use super::{rel, Context, Measurement};
use crate::sampling::Draw;

pub const IDENTITIES: [(&str, f64); 6] = [
    ("lmatrix.closed-form", 1e-8),
    ("lmatrix.fusion-product", 1e-8),
    ("lmatrix.tail-up", 1e-8),
    ("lmatrix.tail-down", 1e-8),
    ("lmatrix.max-weight", 1.0),
    ("lmatrix.max-weight-shifted", 1.0),
];

/// Largest off-target modulus over the target modulus; the claim holds iff it is below 1.
pub fn dominance_ratio(w: &MaxWeight) -> Result<f64> {
    let target = w.moduli.get((w.k as i32 - w.expected_spin) as usize / 2).copied().ok_or(Error::Domain("spin out of range"))?;
    if target < 1e-300 {
        return Err(Error::Singular("vanishing target entry"));
    }
    let other = w
        .moduli
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != w.ell)
        .map(|(_, &m)| m)
        .fold(0.0, f64::max);
    Ok(other / target)
}

pub fn sample(ctx: &Context, d: &mut Draw, index: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let kf = k as f64;
    let m = d.real("m", kf + 1.5, kf + 3.5);
    let n = d.real("n", kf + 1.5, kf + 3.5);
    let u = d.spectral("u", -1.0, 0.0);
    let (mut closed, mut fusion) = (0.0f64, 0.0f64);
    for i in 0..=k {
        for j in 0..=k {
            let mk = m - kf + 2.0 * i as f64;
            let nk = n - kf + 2.0 * j as f64;
            let def = l_def(k, m, mk, n, nk, u, p)?.value;
            closed = closed.max(rel(l_closed(k, i, j, m, n, u, p)?, def));
            for path in unit_paths(m, mk, k) {
                fusion = fusion.max(rel(l_fusion(&path, n, nk, u, p)?, def));
            }
        }
    }
    let (mut up, mut down) = (0.0f64, 0.0f64);
    for j in 0..=k {
        let mk = m + kf - 2.0 * j as f64;
        up = up.max(rel(l_tail_up(k, m, n, j, u, p)?, l_def(k, m, mk, n, n + kf, u, p)?.value));
        down = down.max(rel(l_tail_down(k, m, n, j, u, p)?, l_def(k, m, mk, n, n - kf, u, p)?.value));
    }
    // Maximal-weight scans at real u, cycling through ℓ by sample index.
    let ell = index % (k + 1);
    // Just above the bound m >= 1 + k/2, non-integer to stay off the zeros of [·].
    let mw_m = 1.37 + kf / 2.0;
    let centre = -(kf - 1.0) / 2.0;
    let u_lit = d.real("u_window", centre - 1.0, centre);
    let u_shift = d.real("u_shifted_window", -kf - 0.5, -kf + 0.5);
    let lit = dominance_ratio(&l_max_weight_scan(k, ell, mw_m, u_lit, p)?)?;
    let shifted = dominance_ratio(&l_max_weight_scan(k, ell, mw_m, u_shift, p)?)?;
    let mut mw = vec![
        Measurement::new(IDENTITIES[4].0, lit, IDENTITIES[4].1).fixed().detail("ell", ell).detail("window_m", mw_m),
        Measurement::new(IDENTITIES[5].0, shifted, IDENTITIES[5].1)
            .fixed()
            .detail("ell", ell)
            .detail("window_m", mw_m)
            .reason("empirical window -k - 1/2 < u < -k + 1/2"),
    ];
    if mw_m + kf >= p.r {
        // With heights up to m + k at or beyond r the argmax moves with r.
        mw = mw.into_iter().map(|m| m.outside("heights m + k reach r")).collect();
    }
    let mut out = vec![
        Measurement::new(IDENTITIES[0].0, closed, IDENTITIES[0].1),
        Measurement::new(IDENTITIES[1].0, fusion, IDENTITIES[1].1),
        Measurement::new(IDENTITIES[2].0, up, IDENTITIES[2].1),
        Measurement::new(IDENTITIES[3].0, down, IDENTITIES[3].1),
    ];
    out.append(&mut mw);
    Ok(out)
}
