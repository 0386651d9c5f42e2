//! Weak-equality theta identities behind the tail-operator commutation relations.
//!
//! `I_Φ` and `I_Λ` are single-ordering expressions in `v_1..v_k`. They vanish
//! only after weak symmetrization.

use alloc::vec::Vec;


use crate::elliptic::{bracket, br, falling, nonzero, pairing};
use crate::face::{w_fused, HeightQuad};
use crate::lmatrix::l_def;
use crate::{Error, ModelParams, Result, C64};

/// Sample point for the weak identities.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakContext {
    pub k: usize,
    pub n: f64,
    pub u1: C64,
    pub u2: C64,
    pub v: Vec<C64>,
}

/// Rejects samples where a weight or bracket denominator is below this.
pub const POLE_FLOOR: f64 = 1e-10;

fn guard(z: C64, what: &'static str) -> Result<C64> {
    if !(z.norm() > POLE_FLOOR) || !z.is_finite() {
        return Err(Error::Singular(what));
    }
    Ok(z)
}

fn ratio(a: C64, b: C64, p: &ModelParams) -> Result<C64> {
    Ok(bracket(a, p) / guard(bracket(b, p), "bracket denominator")?)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap(k, &mut cur, &mut out);
    out.sort();
    out
}

fn heap(n: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..n - 1 {
        heap(n - 1, a, out);
        if n.is_multiple_of(2) {
            a.swap(i, n - 1);
        } else {
            a.swap(0, n - 1);
        }
    }
    heap(n - 1, a, out);
}

/// `Σ_σ ∏_{i<j, σ(i)>σ(j)} [v_{σ(i)} - v_{σ(j)} - 1]/[v_{σ(i)} - v_{σ(j)} + 1] · f(v_σ)`.
pub fn weak_symmetrize<F>(v: &[C64], p: &ModelParams, mut f: F) -> Result<C64>
where
    F: FnMut(&[C64]) -> Result<C64>,
{
    let mut tot = C64::new(0.0, 0.0);
    for perm in permutations(v.len()) {
        let mut w = C64::new(1.0, 0.0);
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    let d = v[perm[i]] - v[perm[j]];
                    w *= ratio(d - 1.0, d + 1.0, p)?;
                }
            }
        }
        let vs: Vec<C64> = perm.iter().map(|&i| v[i]).collect();
        tot += w * f(&vs)?;
    }
    Ok(tot)
}

/// A leading term and the coefficients multiplying the `k+1` weights it is expanded in.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub lead: C64,
    pub terms: Vec<C64>,
}

/// `W^{(k,k)}(a b; d c | u) / W^{(k,k)}(n, n+k; n+k, n+2k | u)` with `n = a`.
pub fn w_bar(k: usize, q: HeightQuad, u: C64, p: &ModelParams) -> Result<C64> {
    let kf = k as f64;
    let n = q.a;
    let top = guard(w_fused(k, HeightQuad::new(n, n + kf, n + kf, n + 2.0 * kf), u, p)?, "normalizing weight")?;
    Ok(w_fused(k, q, u, p)? / top)
}

/// The pieces of `I_Φ̂` at one ordering of `v`. A nonzero `eps` shifts the
/// argument of the first bracket of the leading term.
pub fn i_phi_expansion(ctx: &WeakContext, v: &[C64], eps: f64, p: &ModelParams) -> Result<Expansion> {
    let (k, n, u1, u2) = (ctx.k, ctx.n, ctx.u1, ctx.u2);
    let h = k as f64 / 2.0;
    let mut lead = C64::new(1.0, 0.0);
    for (j, &vj) in v.iter().enumerate() {
        let jj = (j + 1) as f64;
        let shift = if j == 0 { eps } else { 0.0 };
        lead *= ratio(u1 - vj - h + shift, u1 - vj + h, p)?;
        lead *= ratio(u2 - vj + n - h + 2.0 * jj - 1.0, u2 - vj + h, p)?;
    }
    let mut terms = Vec::with_capacity(k + 1);
    for s in 0..=k {
        let mut t = C64::new(1.0, 0.0);
        for j in 1..=k - s {
            let (vj, jj) = (v[j - 1], j as f64);
            t *= ratio(u2 - vj - h, u2 - vj + h, p)? * ratio(u1 - vj + n - h + 2.0 * jj - 1.0, u1 - vj + h, p)?;
        }
        for j in k - s + 1..=k {
            let (vj, jj) = (v[j - 1], j as f64);
            t *= ratio(u2 - vj + n - 3.0 * h + 2.0 * jj - 1.0, u2 - vj + h, p)?;
        }
        terms.push(t);
    }
    Ok(Expansion { lead, terms })
}

/// `W̄_{k,k}(n, n+k; n+k-2s, n | u)` for `s = 0..=k`.
pub fn w_bar_column(k: usize, n: f64, u: C64, p: &ModelParams) -> Result<Vec<C64>> {
    let kf = k as f64;
    (0..=k).map(|s| w_bar(k, HeightQuad::new(n, n + kf, n + kf - 2.0 * s as f64, n), u, p)).collect()
}

/// `L^{(k)}(n, n+k-2s; n+2k, n+k | u)` for `s = 0..=k`.
pub fn l_column(k: usize, n: f64, u: C64, p: &ModelParams) -> Result<Vec<C64>> {
    let kf = k as f64;
    (0..=k).map(|s| Ok(l_def(k, n, n + kf - 2.0 * s as f64, n + 2.0 * kf, n + kf, u, p)?.value)).collect()
}

fn contract(e: &Expansion, coeffs: &[C64]) -> C64 {
    e.lead - e.terms.iter().zip(coeffs).map(|(t, c)| t * c).sum::<C64>()
}

/// `I_Φ̂(v | u1, u2)` at the given ordering, using `W̄` at `u1 - u2`.
pub fn i_phi(ctx: &WeakContext, v: &[C64], p: &ModelParams) -> Result<C64> {
    let w = w_bar_column(ctx.k, ctx.n, ctx.u1 - ctx.u2, p)?;
    Ok(contract(&i_phi_expansion(ctx, v, 0.0, p)?, &w))
}

/// Which leading term `I_Λ` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaLead {
    /// With the factor `∏_j [u1 - v_j - k/2]/[u1 - v_j + k/2]`.
    Corrected,
    /// Without it.
    Bare,
}

/// The pieces of `I_Λ` at one ordering of `v`.
pub fn i_lambda_expansion(ctx: &WeakContext, v: &[C64], lead_form: LambdaLead, p: &ModelParams) -> Result<Expansion> {
    let (k, n, u1, u2) = (ctx.k, ctx.n, ctx.u1, ctx.u2);
    let kf = k as f64;
    let h = kf / 2.0;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let root = (br(n, p) / guard(br(n + 2.0 * kf, p), "bracket denominator")?).sqrt();
    let mut lead = sign * root / guard(pairing(n + kf, n + 2.0 * kf, k, p)?, "pairing")?;
    for (j, &vj) in v.iter().enumerate() {
        let jj = (j + 1) as f64;
        lead *= ratio(-u2 - vj + n - h + 2.0 * jj - 1.0, -u2 - vj - h, p)?;
        if lead_form == LambdaLead::Corrected {
            lead *= ratio(u1 - vj - h, u1 - vj + h, p)?;
        }
    }
    let mut terms = Vec::with_capacity(k + 1);
    for s in 0..=k {
        let sf = s as f64;
        let sg = if s % 2 == 0 { 1.0 } else { -1.0 };
        let root = (br(n + kf - 2.0 * sf, p) / guard(br(n + kf, p), "bracket denominator")?).sqrt();
        let mut t = sg * root / guard(pairing(n, n + kf - 2.0 * sf, k, p)?, "pairing")?;
        for j in 1..=k - s {
            let (vj, jj) = (v[j - 1], j as f64);
            t *= ratio(u1 - vj + n - h + 2.0 * jj - 1.0, u1 - vj + h, p)?;
        }
        for j in k - s + 1..=k {
            let (vj, jj) = (v[j - 1], j as f64);
            t *= ratio(-u2 - vj + n - 3.0 * h + 2.0 * jj - 1.0, -u2 - vj - h, p)?;
        }
        terms.push(t);
    }
    Ok(Expansion { lead, terms })
}

/// `I_Λ(v | u1, u2)` at the given ordering, using `L^{(k)}` at `u1 + u2 + 1`.
pub fn i_lambda(ctx: &WeakContext, v: &[C64], lead_form: LambdaLead, p: &ModelParams) -> Result<C64> {
    let l = l_column(ctx.k, ctx.n, ctx.u1 + ctx.u2 + 1.0, p)?;
    Ok(contract(&i_lambda_expansion(ctx, v, lead_form, p)?, &l))
}

/// Weakly symmetrized sum together with the largest symmetrized piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    pub value: C64,
    pub scale: f64,
}

impl WeakResidual {
    /// `|value| / max(1, scale)`.
    pub fn scaled(&self) -> f64 {
        self.value.norm() / self.scale.max(1.0)
    }
}

fn weak_of<F>(ctx: &WeakContext, coeffs: &[C64], p: &ModelParams, expand: F) -> Result<WeakResidual>
where
    F: Fn(&[C64]) -> Result<Expansion>,
{
    let value = weak_symmetrize(&ctx.v, p, |vs| Ok(contract(&expand(vs)?, coeffs)))?;
    let mut scale = weak_symmetrize(&ctx.v, p, |vs| Ok(expand(vs)?.lead))?.norm();
    for (s, c) in coeffs.iter().enumerate() {
        scale = scale.max(weak_symmetrize(&ctx.v, p, |vs| Ok(expand(vs)?.terms[s] * c))?.norm());
    }
    Ok(WeakResidual { value, scale })
}

/// Weakly symmetrized `I_Φ̂`, optionally with the leading bracket perturbed by `eps`.
pub fn weak_i_phi(ctx: &WeakContext, eps: f64, p: &ModelParams) -> Result<WeakResidual> {
    let w = w_bar_column(ctx.k, ctx.n, ctx.u1 - ctx.u2, p)?;
    weak_of(ctx, &w, p, |vs| i_phi_expansion(ctx, vs, eps, p))
}

/// Weakly symmetrized `I_Λ`.
pub fn weak_i_lambda(ctx: &WeakContext, lead_form: LambdaLead, p: &ModelParams) -> Result<WeakResidual> {
    let l = l_column(ctx.k, ctx.n, ctx.u1 + ctx.u2 + 1.0, p)?;
    weak_of(ctx, &l, p, |vs| i_lambda_expansion(ctx, vs, lead_form, p))
}

fn sign_pow(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sides of `W̄(n, n+k; n+k-2s, n | u) = (-1)^{s+k} sqrt([n+k-2s][n+2k]/([n+k][n]))
/// (n+k, n+2k)_k / (n, n+k-2s)_k · L^{(k)}(n, n+k-2s; n+2k, n+k | u+1)`.
pub fn lw_proposition(k: usize, n: f64, s: usize, u: C64, p: &ModelParams) -> Result<(C64, C64)> {
    let kf = k as f64;
    let sf = s as f64;
    let lhs = w_bar(k, HeightQuad::new(n, n + kf, n + kf - 2.0 * sf, n), u, p)?;
    let root = (br(n + kf - 2.0 * sf, p) * br(n + 2.0 * kf, p) / guard(br(n + kf, p) * br(n, p), "bracket denominator")?).sqrt();
    let pr = pairing(n + kf, n + 2.0 * kf, k, p)? / guard(pairing(n, n + kf - 2.0 * sf, k, p)?, "pairing")?;
    let l = l_def(k, n, n + kf - 2.0 * sf, n + 2.0 * kf, n + kf, u + 1.0, p)?.value;
    Ok((lhs, sign_pow((s + k) as i64) * root * pr * l))
}

/// Largest scaled residual of [`lw_proposition`] over `s = 0..=k`.
pub fn lw_proposition_residual(k: usize, n: f64, u: C64, p: &ModelParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in 0..=k {
        let (a, b) = lw_proposition(k, n, s, u, p)?;
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    Ok(worst)
}

/// Sides of `I_Φ̂(v|u1,u2) = (-1)^k sqrt([n+2k]/[n]) (n+k, n+2k)_k I_Λ(v|u1,-u2) ∏_j [u2-v_j-k/2]/[u2-v_j+k/2]`
/// at the ordering stored in `ctx`.
pub fn proportionality(ctx: &WeakContext, p: &ModelParams) -> Result<(C64, C64)> {
    let (k, n) = (ctx.k, ctx.n);
    let kf = k as f64;
    let h = kf / 2.0;
    let lhs = i_phi(ctx, &ctx.v, p)?;
    let flipped = WeakContext { u2: -ctx.u2, ..ctx.clone() };
    let mut rhs = sign_pow(k as i64) * (br(n + 2.0 * kf, p) / guard(br(n, p), "bracket denominator")?).sqrt() * pairing(n + kf, n + 2.0 * kf, k, p)?;
    rhs *= i_lambda(&flipped, &ctx.v, LambdaLead::Corrected, p)?;
    for &vj in &ctx.v {
        rhs *= ratio(ctx.u2 - vj - h, ctx.u2 - vj + h, p)?;
    }
    Ok((lhs, rhs))
}

/// `Σ_t [n+k-s]_t [s]_{k-t} [2k+n-1-s-t]_{k-t} [s+t-1]_t (-1)^{s+t-k}
/// sqrt([n-2s-2t+2k]/[n]) / (n+k-2s, n+2k-2s-2t)_k`, with the largest term.
pub fn necessary_condition_sum(k: usize, n: f64, s: usize, p: &ModelParams) -> Result<(C64, f64)> {
    let kf = k as f64;
    let sf = s as f64;
    let mut tot = C64::new(0.0, 0.0);
    let mut big: f64 = 0.0;
    let c = |z: f64| C64::new(z, 0.0);
    for t in 0..=k {
        let tf = t as f64;
        let mut term = falling(c(n + kf - sf), t, p)
            * falling(c(sf), k - t, p)
            * falling(c(2.0 * kf + n - 1.0 - sf - tf), k - t, p)
            * falling(c(sf + tf - 1.0), t, p);
        term *= sign_pow(s as i64 + t as i64 - k as i64);
        term *= (br(n - 2.0 * sf - 2.0 * tf + 2.0 * kf, p) / nonzero(br(n, p), "bracket denominator")?).sqrt();
        term /= nonzero(pairing(n + kf - 2.0 * sf, n + 2.0 * kf - 2.0 * sf - 2.0 * tf, k, p)?, "pairing")?;
        big = big.max(term.norm());
        tot += term;
    }
    Ok((tot, big))
}

/// Whether every bracket under a square root in [`necessary_condition_sum`] is positive.
pub fn necessary_condition_in_window(k: usize, n: f64, s: usize, p: &ModelParams) -> bool {
    let kf = k as f64;
    let sf = s as f64;
    let pos = |a: f64| br(a, p).re > 0.0;
    pos(n)
        && (0..=k).all(|t| {
            let tf = t as f64;
            pos(n - 2.0 * sf - 2.0 * tf + 2.0 * kf) && pos(n + kf - 2.0 * sf) && pos(n + 2.0 * kf - 2.0 * sf - 2.0 * tf)
        })
}
