//! SOS face weights, their k×k fusion and the face-side identities.
//!
//! A weight `W(a b; d c | u)` has `a` at the north-west corner, `b` at the
//! north-east, `d` at the south-west and `c` at the south-east. Heights are
//! real numbers; only their differences must be lattice steps.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;


use crate::elliptic::{br, nonzero, pairing};
use crate::vertex::r0_scalar;
use crate::{Error, ModelParams, Result, C64};

const STEP_FUZZ: f64 = 1e-9;

/// Corner heights of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightQuad {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl HeightQuad {
    /// Inline argument order `W(a b; d c)`.
    pub fn new(a: f64, b: f64, d: f64, c: f64) -> Self {
        HeightQuad { a, b, c, d }
    }

    /// Level-`k` admissibility of all four edges.
    pub fn admissible(&self, k: usize) -> bool {
        is_step(self.a, self.b, k) && is_step(self.b, self.c, k) && is_step(self.a, self.d, k) && is_step(self.d, self.c, k)
    }
}

/// `y - x` is one of `-k, -k+2, ..., k`.
pub fn is_step(x: f64, y: f64, k: usize) -> bool {
    let t = (y - x + k as f64) / 2.0;
    let j = t.round();
    (t - j).abs() < STEP_FUZZ && j >= 0.0 && j <= k as f64
}

/// All height sequences `a = h_0, ..., h_k = b` with unit steps.
pub fn unit_paths(a: f64, b: f64, k: usize) -> Vec<Vec<f64>> {
    if k == 0 {
        return if (a - b).abs() < STEP_FUZZ { vec![vec![a]] } else { Vec::new() };
    }
    if !is_step(a, b, k) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in [-1.0, 1.0] {
        for mut rest in unit_paths(a + s, b, k - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// Elementary weight divided by `R_0(u)`. Inadmissible quads give zero.
pub fn w1_reduced(q: HeightQuad, u: C64, p: &ModelParams) -> Result<C64> {
    let unit = |x: f64, y: f64| ((x - y).abs() - 1.0).abs() < STEP_FUZZ;
    if !(unit(q.a, q.b) && unit(q.b, q.c) && unit(q.a, q.d) && unit(q.d, q.c)) {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = q.a;
    let s = (q.b - q.a).round();
    let one = C64::new(1.0, 0.0);
    if (q.b - q.d).abs() < STEP_FUZZ {
        if (q.c - (n + 2.0 * s)).abs() < STEP_FUZZ {
            return Ok(one);
        }
        let den = nonzero(br(n, p) * crate::elliptic::bracket(u + 1.0, p), "face weight denominator")?;
        return Ok(crate::elliptic::bracket(-u * s + n, p) * br(1.0, p) / den);
    }
    let den = nonzero(br(n, p) * crate::elliptic::bracket(u + 1.0, p), "face weight denominator")?;
    Ok(br(n + s, p) * crate::elliptic::bracket(u, p) / den)
}

/// Elementary face weight `W(a b; d c | u)`.
pub fn w1(q: HeightQuad, u: C64, p: &ModelParams) -> Result<C64> {
    let w = w1_reduced(q, u, p)?;
    if w == C64::new(0.0, 0.0) {
        return Ok(w);
    }
    Ok(w * r0_scalar(u, p)?)
}

/// `W^{(k,1)}` without its `R_0` factors, along the given top path `a -> b`.
fn wk1_reduced(k: usize, d: f64, c: f64, u: C64, top: &[f64], p: &ModelParams) -> Result<C64> {
    let mut tot = C64::new(0.0, 0.0);
    for dp in unit_paths(d, c, k) {
        let mut prod = C64::new(1.0, 0.0);
        for i in 0..k {
            let q = HeightQuad::new(top[i], top[i + 1], dp[i], dp[i + 1]);
            prod *= w1_reduced(q, u + (k - 1 - i) as f64, p)?;
            if prod == C64::new(0.0, 0.0) {
                break;
            }
        }
        tot += prod;
    }
    Ok(tot)
}

/// `∏_i R_0(u + k - 1 - i)`, the scalar carried by `W^{(k,1)}(u)`.
fn wk1_prefactor(k: usize, u: C64, p: &ModelParams) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for i in 0..k {
        acc *= r0_scalar(u + (k - 1 - i) as f64, p)?;
    }
    Ok(acc)
}

/// Row-fused weight `W^{(k,1)}(a b; d c | u)` with top path `top` (or the first available).
pub fn w_fused_k1(k: usize, q: HeightQuad, u: C64, top: Option<&[f64]>, p: &ModelParams) -> Result<C64> {
    let paths;
    let top = match top {
        Some(t) => t,
        None => {
            paths = unit_paths(q.a, q.b, k);
            match paths.first() {
                Some(t) => t.as_slice(),
                None => return Ok(C64::new(0.0, 0.0)),
            }
        }
    };
    Ok(wk1_reduced(k, q.d, q.c, u, top, p)? * wk1_prefactor(k, u, p)?)
}

/// Reduced `W^{(k,k)}` with explicit right path and inner top-path choice.
fn wkk_reduced(k: usize, q: HeightQuad, u: C64, right: &[f64], top_choice: usize, p: &ModelParams) -> Result<C64> {
    let mut tot = C64::new(0.0, 0.0);
    for ap in unit_paths(q.a, q.d, k) {
        let mut prod = C64::new(1.0, 0.0);
        for i in 0..k {
            let tops = unit_paths(ap[i], right[i], k);
            if tops.is_empty() {
                prod = C64::new(0.0, 0.0);
                break;
            }
            let top = &tops[top_choice % tops.len()];
            let w = u - (k - 1 - i) as f64;
            prod *= wk1_reduced(k, ap[i + 1], right[i + 1], w, top, p)?;
            if prod == C64::new(0.0, 0.0) {
                break;
            }
        }
        tot += prod;
    }
    Ok(tot)
}

/// `∏_{i,j<k} R_0(u + i - j)`, the scalar carried by `W^{(k,k)}(u)`.
pub fn wkk_prefactor(k: usize, u: C64, p: &ModelParams) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            acc *= r0_scalar(u + i as f64 - j as f64, p)?;
        }
    }
    Ok(acc)
}

/// Fused weight with a chosen right path `b -> c` and inner top-path index.
pub fn w_fused_paths(k: usize, q: HeightQuad, u: C64, right: &[f64], top_choice: usize, p: &ModelParams) -> Result<C64> {
    if !q.admissible(k) {
        return Err(Error::Inadmissible);
    }
    Ok(wkk_reduced(k, q, u, right, top_choice, p)? * wkk_prefactor(k, u, p)?)
}

/// Fused weight `W^{(k,k)}(a b; d c | u)`.
pub fn w_fused(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<C64> {
    if !q.admissible(k) {
        return Err(Error::Inadmissible);
    }
    let right = unit_paths(q.b, q.c, k);
    let right = right.first().ok_or(Error::Inadmissible)?;
    w_fused_paths(k, q, u, right, 0, p)
}

/// Fused weight, zero for inadmissible quads (for use inside sums).
pub fn w_fused_or_zero(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<C64> {
    match w_fused(k, q, u, p) {
        Err(Error::Inadmissible) => Ok(C64::new(0.0, 0.0)),
        r => r,
    }
}

/// Path-independence spread of `W^{(k,k)}`: max deviation over every right
/// path and inner top-path choice from the default value.
pub fn path_spread(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<f64> {
    let base = w_fused(k, q, u, p)?;
    let mut worst = 0.0f64;
    let max_tops = 1usize << k;
    for right in unit_paths(q.b, q.c, k) {
        for t in 0..max_tops {
            let w = w_fused_paths(k, q, u, &right, t, p)?;
            worst = worst.max((w - base).norm());
        }
    }
    Ok(worst)
}

/// Gauge sign with `s_0 = 1` and `s_{a+1} = (-1)^a s_a`, i.e. `(-1)^{a(a-1)/2}`.
pub fn gauge_sign(a: i64) -> f64 {
    if (a * (a - 1) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 }
}

fn integer_height(a: f64) -> Result<i64> {
    let r = a.round();
    if (a - r).abs() > STEP_FUZZ {
        return Err(Error::Domain("gauge factors need integer heights"));
    }
    Ok(r as i64)
}

/// `g_a = s_a sqrt([a])`; requires `[a] > 0`.
pub fn gauge_g(a: f64, p: &ModelParams) -> Result<C64> {
    let ai = integer_height(a)?;
    let b = br(a, p);
    if !(b.re > 0.0) {
        return Err(Error::Domain("height outside the positive-bracket window"));
    }
    Ok(C64::new(gauge_sign(ai) * b.re.sqrt(), 0.0))
}

/// `G^{(k)}_{a,b} = g_a / (g_b (a,b)_k)`.
pub fn gauge_big_g(k: usize, a: f64, b: f64, p: &ModelParams) -> Result<C64> {
    let den = nonzero(gauge_g(b, p)? * pairing(a, b, k, p)?, "gauge denominator")?;
    Ok(gauge_g(a, p)? / den)
}

/// Residual of `W(d c; a b | u) = (G_{a,d} / G_{b,c}) W(a d; b c | -1-u)` at level `k`,
/// scaled by `max(1, |lhs|, |rhs|)` like the other face residuals.
pub fn face_crossing_residual(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<f64> {
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let lhs = w_fused(k, HeightQuad::new(d, c, a, b), u, p)?;
    let ratio = gauge_big_g(k, a, d, p)? / nonzero(gauge_big_g(k, b, c, p)?, "gauge ratio")?;
    let rhs = ratio * w_fused(k, HeightQuad::new(a, d, b, c), -u - 1.0, p)?;
    Ok(scaled(lhs, rhs))
}

/// Residual of the elementary crossing
/// `W(a b; d c | u) = (-1)^{(a+d-b-c)/2} [b]/[a] W(d a; c b | -u-1)`.
pub fn face_crossing_residual_k1(q: HeightQuad, u: C64, p: &ModelParams) -> Result<f64> {
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let e = ((a + d - b - c) / 2.0).round() as i64;
    let sign = if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let lhs = w1(q, u, p)?;
    let rhs = br(b, p) / nonzero(br(a, p), "crossing denominator")? * sign * w1(HeightQuad::new(d, a, c, b), -u - 1.0, p)?;
    Ok((lhs - rhs).norm())
}

/// Residual of `W(d a; c b | u) = (a,b)_k (d,a)_k / ((d,c)_k (c,b)_k) W(d c; a b | u)`.
pub fn face_reflection_residual(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<f64> {
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let lhs = w_fused(k, HeightQuad::new(d, a, c, b), u, p)?;
    let num = pairing(a, b, k, p)? * pairing(d, a, k, p)?;
    let den = nonzero(pairing(d, c, k, p)? * pairing(c, b, k, p)?, "reflection denominator")?;
    let rhs = num / den * w_fused(k, HeightQuad::new(d, c, a, b), u, p)?;
    Ok(scaled(lhs, rhs))
}

/// `|lhs - rhs| / max(1, |lhs|, |rhs|)`.
fn scaled(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0)
}

/// Heights `x + j` for `j` in `{-k, -k+2, ..., k}`.
pub fn neighbours(x: f64, k: usize) -> Vec<f64> {
    (0..=k).map(|i| x - k as f64 + 2.0 * i as f64).collect()
}

/// Face Yang-Baxter residual around the exterior hexagon `(a, b, c, d, e, f)`:
/// `Σ_g W(a b; f g|u) W(f g; e d|v) W(b c; g d|u-v)
///  = Σ_g W(a g; f e|u-v) W(a b; g c|v) W(g c; e d|u)`.
pub fn face_ybe_residual(k: usize, h: [f64; 6], u: C64, v: C64, p: &ModelParams) -> Result<f64> {
    let [a, b, c, d, e, f] = h;
    let w = |a, b, d, c, u| w_fused_or_zero(k, HeightQuad::new(a, b, d, c), u, p);
    let mut lhs = C64::new(0.0, 0.0);
    for g in neighbours(f, k) {
        lhs += w(a, b, f, g, u)? * w(f, g, e, d, v)? * w(b, c, g, d, u - v)?;
    }
    let mut rhs = C64::new(0.0, 0.0);
    for g in neighbours(a, k) {
        rhs += w(a, g, f, e, u - v)? * w(a, b, g, c, v)? * w(g, c, e, d, u)?;
    }
    Ok(scaled(lhs, rhs))
}

/// Max over `(b, d)` of `|Σ_s W(a s; d c | -u) W(a b; s c | u) - δ_{b,d}|`.
pub fn face_unitarity_residual(k: usize, a: f64, c: f64, u: C64, p: &ModelParams) -> Result<f64> {
    let w = |a, b, d, c, u| w_fused_or_zero(k, HeightQuad::new(a, b, d, c), u, p);
    let mids: Vec<f64> = neighbours(a, k).into_iter().filter(|&m| is_step(m, c, k)).collect();
    let mut worst = 0.0f64;
    for &b in &mids {
        for &d in &mids {
            let mut tot = C64::new(0.0, 0.0);
            for &s in &mids {
                tot += w(a, s, d, c, -u)? * w(a, b, s, c, u)?;
            }
            let target = if (b - d).abs() < STEP_FUZZ { 1.0 } else { 0.0 };
            worst = worst.max((tot - target).norm());
        }
    }
    Ok(worst)
}
