use fusion_core::elliptic::bracket;
use fusion_core::face::{gauge_g, neighbours, HeightQuad};
use fusion_core::face::{face_crossing_residual, face_reflection_residual};
use fusion_core::vertex::{crossing_residual, r0_scalar, unitarity_residual, ybe_residual};
use fusion_core::{Error, ModelParams, Result};

use super::{Context, Measurement};
use crate::sampling::Draw;

pub const YBE: [(&str, f64); 1] = [("vertex.ybe", 1e-8)];
pub const UNITARITY: [(&str, f64); 3] = [("vertex.unitarity", 1e-8), ("r0.inversion", 1e-9), ("r0.shifted-inversion", 1e-9)];
pub const CROSSING: [(&str, f64); 3] = [("vertex.crossing", 1e-8), ("face.crossing", 1e-8), ("face.reflection", 1e-8)];

pub fn ybe(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let u1 = d.spectral("u1", -1.0, 0.0);
    let u2 = d.spectral("u2", -1.0, 0.0);
    let u3 = d.spectral("u3", -1.0, 0.0);
    Ok(vec![Measurement::new(YBE[0].0, ybe_residual(p.k, u1, u2, u3, p)?, YBE[0].1)])
}

pub fn unitarity(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let u = d.spectral("u", -1.0, 0.0);
    let un = unitarity_residual(p.k, u, p)?;
    let r0 = r0_scalar(u, p)?;
    let inv = (r0 * r0_scalar(-u, p)? - 1.0).norm();
    let lhs = r0 * r0_scalar(u + 1.0, p)?;
    let rhs = -bracket(u + 1.0, p) / bracket(u, p);
    let shifted = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    Ok(vec![
        Measurement::new(UNITARITY[0].0, un, UNITARITY[0].1),
        Measurement::new(UNITARITY[1].0, inv, UNITARITY[1].1),
        Measurement::new(UNITARITY[2].0, shifted, UNITARITY[2].1),
    ])
}

/// Admissible integer quad with corners in `(0, r)`, as the gauge factors need, and `a < below`.
pub(crate) fn integer_quad(d: &mut Draw, p: &ModelParams, below: f64) -> Result<HeightQuad> {
    let k = p.k;
    let top = (below.ceil() as i64 - 1).max(1);
    let a = d.integer("quad_a", 1, top) as f64;
    let nb = neighbours(a, k);
    let b = nb[d.index("quad_b_step", k + 1)];
    let dd = nb[d.index("quad_d_step", k + 1)];
    let cs: Vec<f64> = neighbours(b, k).into_iter().filter(|&c| fusion_core::face::is_step(dd, c, k)).collect();
    let c = cs[d.index("quad_c_choice", cs.len())];
    let q = HeightQuad::new(a, b, dd, c);
    d.note("quad", format!("{a},{b},{dd},{c}"));
    if [a, b, dd, c].iter().any(|&h| h <= 0.0 || h >= p.r) {
        return Err(Error::Singular("height outside (0, r)"));
    }
    // Edges with x + y < k + 2 or x + y > 2r - k - 2 break the crossing relation.
    let kf = k as f64;
    if [(a, b), (a, dd), (b, c), (dd, c)].iter().any(|&(x, y)| x + y < kf + 2.0 || x + y > 2.0 * p.r - kf - 2.0) {
        return Err(Error::Singular("quad not admissible"));
    }
    for h in [a, b, dd, c] {
        gauge_g(h, p)?;
    }
    Ok(q)
}

pub fn crossing(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let q = ctx.q.as_ref().ok_or(Error::Domain("crossing matrix not prepared"))?;
    let u = d.spectral("u", -1.0, 0.0);
    let vc = crossing_residual(p.k, &q.m, u, p)?;
    let quad = integer_quad(d, p, p.r)?;
    let w = d.spectral("w", -1.0, 0.0);
    let fc = face_crossing_residual(p.k, quad, w, p)?;
    let fr = face_reflection_residual(p.k, quad, w, p)?;
    Ok(vec![
        Measurement::new(CROSSING[0].0, vc, CROSSING[0].1),
        Measurement::new(CROSSING[1].0, fc, CROSSING[1].1),
        Measurement::new(CROSSING[2].0, fr, CROSSING[2].1),
    ])
}
