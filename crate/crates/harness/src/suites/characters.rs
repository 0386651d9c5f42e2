use fusion_core::characters::{branching_function, branching_identity, char_principal, char_string_sum, i_of_s, partition_identity, Sides};
use fusion_core::elliptic::bracket_s;
use fusion_core::{c64, Error, Result};

use super::{Context, Measurement};
use crate::sampling::Draw;

const BASE: [(&str, f64); 4] = [
    ("characters.principal-vs-strings", 1e-8),
    ("characters.partition-function", 1e-7),
    ("characters.i-of-s", 1e-8),
    ("characters.branching", 1e-7),
];
const MINIMAL: (&str, f64) = ("characters.minimal-model", 1e-8);

/// Lattice sums run over `|n| <= N_MAX`.
const N_MAX: i64 = 30;
const J_MAX: i64 = 12;

pub fn identities(k: usize) -> Vec<(&'static str, f64)> {
    let mut v = BASE.to_vec();
    if k == 1 {
        v.push(MINIMAL);
    }
    v
}

/// Minimal-model character of `M(p, p')` with labels `(r, s)` in `q`,
/// normalized with `q^{-1/24} / φ(q)` (Rocha-Caridi form).
pub fn minimal_model_character(p: i64, pp: i64, r: i64, s: i64, q: f64) -> f64 {
    let phi: f64 = (1..400).map(|n| 1.0 - q.powi(n)).product();
    let d = (4 * p * pp) as f64;
    let mut tot = 0.0;
    for n in -J_MAX..=J_MAX {
        let a = (2 * p * pp * n + pp * r - p * s) as f64;
        let b = (2 * p * pp * n + pp * r + p * s) as f64;
        tot += q.powf(a * a / d) - q.powf(b * b / d);
    }
    q.powf(-1.0 / 24.0) / phi * tot
}

fn relative(s: Sides) -> Result<f64> {
    if s.rhs.abs() < 1e-300 {
        return Err(Error::Singular("vanishing right-hand side"));
    }
    Ok(s.relative())
}

pub fn sample(ctx: &Context, d: &mut Draw, index: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let sf = ctx.strings.as_ref().ok_or(Error::Domain("string functions not prepared"))?;
    let x = d.real("x", 0.2, 0.4);
    let ell = index % (k + 1);
    d.note("ell", ell);
    let round = index / (k + 1);

    let ch = char_principal(k, ell, x)?;
    let sum = char_string_sum(sf, ell, x, N_MAX);
    let principal = relative(Sides { lhs: sum, rhs: ch })?;

    // String labels m with [m]* away from zero at the configured r.
    let rs = p.r_star();
    let ms: Vec<i64> = (1..=4).filter(|&m| bracket_s(c64(m as f64, 0.0), rs, x).norm() > 1e-6).collect();
    if ms.is_empty() {
        return Err(Error::Singular("no admissible label m"));
    }
    let m = ms[round % ms.len()];
    let part = relative(partition_identity(sf, m, ell, x, p.r, 20)?)?;

    let mut i_s = 0.0f64;
    for s in -2..=2 {
        i_s = i_s.max((i_of_s(sf, ell, s, x, N_MAX) - ch).abs() / ch.abs());
    }

    let rb = k as i64 + 3 + (round % 2) as i64;
    let mb = 1 + (round / 2) as i64 % (rb - k as i64 - 1);
    let branch = relative(branching_identity(sf, rb, mb, ell, x, J_MAX)?)?;

    let mut out = vec![
        Measurement::new(BASE[0].0, principal, BASE[0].1),
        Measurement::new(BASE[1].0, part, BASE[1].1).detail("m", m).detail("r", p.r),
        Measurement::new(BASE[2].0, i_s, BASE[2].1).detail("s_range", "-2..=2"),
        Measurement::new(BASE[3].0, branch, BASE[3].1).detail("branching_r", rb).detail("branching_m", mb),
    ];
    if k == 1 {
        let mut worst = 0.0f64;
        for a in 1..rb {
            if (a - mb - ell as i64).rem_euclid(2) != 0 {
                continue;
            }
            let b = branching_function(sf, ell, mb, a, x, rb, J_MAX);
            let rc = minimal_model_character(rb - 1, rb, mb, a, x.powi(4));
            worst = worst.max((b - rc).abs());
        }
        out.push(Measurement::new(MINIMAL.0, worst, MINIMAL.1).detail("branching_r", rb).detail("branching_m", mb));
    }
    Ok(out)
}
