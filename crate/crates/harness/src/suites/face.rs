use fusion_core::face::{face_unitarity_residual, face_ybe_residual, is_step, neighbours, path_spread, w_fused, HeightQuad};
use fusion_core::intertwiner::{
    cross_psi_normalization_spread, inversion_residuals, pinned_c_squared, psi_prime_component_residual, vertex_face_dual_residual,
    vertex_face_residual,
};
use fusion_core::{Error, Result};

use super::vertex::integer_quad;
use super::{clear_of_poles, Context, Measurement};
use crate::sampling::Draw;

pub const FACE: [(&str, f64); 3] = [("face.ybe", 1e-8), ("face.unitarity", 1e-8), ("face.path-independence", 1e-10)];
pub const VERTEX_FACE: [(&str, f64); 2] = [("intertwiner.vertex-face", 1e-8), ("intertwiner.vertex-face-dual", 1e-8)];
pub const INVERSIONS: [(&str, f64); 7] = [
    ("intertwiner.inversion-heights", 1e-9),
    ("intertwiner.inversion-spins", 1e-9),
    ("intertwiner.inversion-heights-prime", 1e-9),
    ("intertwiner.inversion-spins-prime", 1e-9),
    ("intertwiner.prime-shift", 1e-9),
    ("intertwiner.c-squared-modulus", 1e-9),
    ("intertwiner.dual-normalization", 1e-8),
];

/// Real base height well inside the positive range.
fn base(d: &mut Draw, k: usize) -> f64 {
    d.real("a", k as f64 + 1.0, k as f64 + 2.0)
}

fn step(d: &mut Draw, name: &str, x: f64, k: usize) -> f64 {
    neighbours(x, k)[d.index(name, k + 1)]
}

pub fn face_ybe(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let a = base(d, k);
    let b = step(d, "b_step", a, k);
    let c = step(d, "c_step", b, k);
    let f = step(d, "f_step", a, k);
    let e = step(d, "e_step", f, k);
    let ds: Vec<f64> = neighbours(c, k).into_iter().filter(|&x| is_step(e, x, k)).collect();
    if ds.is_empty() {
        return Err(Error::Singular("hexagon does not close"));
    }
    let dh = ds[d.index("d_choice", ds.len())];
    d.note("hexagon", format!("{a},{b},{c},{dh},{e},{f}"));
    let u = d.spectral("u", -1.0, 0.0);
    let v = d.spectral("v", -1.0, 0.0);
    let y = face_ybe_residual(k, [a, b, c, dh, e, f], u, v, p)?;
    // Unitarity around (a, c) and path independence on the quad (a, b; f, c') for the same heights.
    let un = face_unitarity_residual(k, a, c, u, p)?;
    let cq: Vec<f64> = neighbours(b, k).into_iter().filter(|&x| is_step(f, x, k)).collect();
    let quad = HeightQuad::new(a, b, f, cq[d.index("quad_choice", cq.len())]);
    let spread = path_spread(k, quad, u, p)? / w_fused(k, quad, u, p)?.norm().max(1.0);
    Ok(vec![
        Measurement::new(FACE[0].0, y, FACE[0].1),
        Measurement::new(FACE[1].0, un, FACE[1].1),
        Measurement::new(FACE[2].0, spread, FACE[2].1).detail("quad", format!("{},{},{},{}", quad.a, quad.b, quad.d, quad.c)),
    ])
}

pub fn vertex_face(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let a = base(d, k) + k as f64;
    let b = step(d, "b_step", a, k);
    let c = step(d, "c_step", b, k);
    let u = d.spectral("u", -1.0, 0.0);
    let v = d.spectral("v", -1.0, 0.0);
    let rel = |(diff, scale): (f64, f64)| -> Result<f64> {
        if scale < 1e-300 {
            return Err(Error::Singular("vanishing vertex-face side"));
        }
        Ok(diff / scale)
    };
    let vf = rel(vertex_face_residual(k, u, v, a, b, c, p)?)?;
    let vd = rel(vertex_face_dual_residual(k, u, v, a, b, c, p)?)?;
    Ok(vec![Measurement::new(VERTEX_FACE[0].0, vf, VERTEX_FACE[0].1), Measurement::new(VERTEX_FACE[1].0, vd, VERTEX_FACE[1].1)])
}

pub fn inversions(ctx: &Context, d: &mut Draw, _: usize) -> Result<Vec<Measurement>> {
    let p = &ctx.params;
    let k = p.k;
    let kf = k as f64;
    let u = d.spectral("u", -1.0, 0.0);
    let b0 = base(d, k) + kf;
    let a0 = d.real("a_prime", kf + 1.0, kf + 2.0) + kf;
    let around = |h: f64| neighbours(h, k).into_iter().chain([h]);
    clear_of_poles(around(b0).chain(around(a0)), p.r)?;
    let inv = inversion_residuals(k, u, b0, a0, p)?;
    let sign = if d.index("prime_direction", 2) == 0 { 1.0 } else { -1.0 };
    let prime = psi_prime_component_residual(k, u, b0, b0 + sign * kf, p)?;
    // Level-one pin of C² against the closed constant.
    let h = d.real("pin_height", 1.5, 2.5);
    let c2 = pinned_c_squared(u, h, h + 1.0, p)?;
    let want = p.c_squared();
    let modulus = (c2.norm() - want.norm()).abs() / want.norm();
    let phase = (c2 / want).arg();
    // The dual normalization uses the integer-height gauge. Above r/2 the level-two
    // dual loses roughly a factor x^-2 of precision per unit of height.
    let q = integer_quad(d, p, p.r / 2.0)?;
    let mut pairs = vec![(q.a, q.b), (q.a, q.d), (q.b, q.c), (q.d, q.c)];
    pairs.dedup();
    let (cn, spread) = cross_psi_normalization_spread(k, u, &pairs, p)?;
    Ok(vec![
        Measurement::new(INVERSIONS[0].0, inv.heights, INVERSIONS[0].1),
        Measurement::new(INVERSIONS[1].0, inv.spins, INVERSIONS[1].1),
        Measurement::new(INVERSIONS[2].0, inv.heights_prime, INVERSIONS[2].1),
        Measurement::new(INVERSIONS[3].0, inv.spins_prime, INVERSIONS[3].1),
        Measurement::new(INVERSIONS[4].0, prime, INVERSIONS[4].1),
        Measurement::new(INVERSIONS[5].0, modulus, INVERSIONS[5].1).detail("phase_difference", phase),
        Measurement::new(INVERSIONS[6].0, spread, INVERSIONS[6].1).detail("normalization", crate::sampling::fmt_c(cn)),
    ])
}
