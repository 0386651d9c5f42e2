//! Intertwining vectors `ψ`, `ψ*`, `ψ'`, their fusion and the vertex-face relations.
//!
//! `ψ(u)^a_b` has upper height `a` and lower height `b`. Fused vectors are
//! given by their coordinates in the `v^{(k)}_ε` basis, spin index `i` for `ε = k - 2i`.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;


use crate::elliptic::{bracket, br, nonzero, theta_jacobi};
use crate::face::{gauge_big_g, neighbours, unit_paths, w_fused_or_zero, HeightQuad};
use crate::linalg::CMat;
use crate::vertex::{extract, kron_vec, q_cross_matrix, r_fused, symmetrizer};
use crate::{Error, ModelParams, Result, C64};

/// Which family a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Psi,
    PsiStar,
    PsiPrime,
}

/// Components of an intertwiner at fixed heights and spectral parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerVector {
    pub kind: Kind,
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub u: C64,
    /// Indexed by spin index.
    pub components: Vec<C64>,
}

fn unit_step(a: f64, b: f64) -> Result<f64> {
    let d = a - b;
    if ((d.abs() - 1.0).abs()) > 1e-9 {
        return Err(Error::Inadmissible);
    }
    Ok(d.round())
}

/// `ψ(u)^a_b = (ϑ0, ϑ3)(((a-b)u + a) / 2r | τ/2)`.
pub fn psi(u: C64, a: f64, b: f64, p: &ModelParams) -> Result<[C64; 2]> {
    let d = unit_step(a, b)?;
    let z = (u * d + a) / (2.0 * p.r);
    let t = p.tau / 2.0;
    Ok([theta_jacobi(0, z, t)?, theta_jacobi(3, z, t)?])
}

/// `ψ*_ε(u)^a_b = -ε (a-b) / (2[b][u]) C² ψ_{-ε}(u-1)^a_b`.
pub fn psi_star(u: C64, a: f64, b: f64, p: &ModelParams) -> Result<[C64; 2]> {
    let d = unit_step(a, b)?;
    let v = psi(u - 1.0, a, b, p)?;
    let den = nonzero(br(b, p) * bracket(u, p) * 2.0, "dual intertwiner denominator")?;
    let f = -p.c_squared() * d / den;
    Ok([f * v[1], -f * v[0]])
}

/// `ψ'_ε(u)^a_b = [u][a] / ([u-1][b]) ψ_ε(u-2)^a_b`.
pub fn psi_prime(u: C64, a: f64, b: f64, p: &ModelParams) -> Result<[C64; 2]> {
    let v = psi(u - 2.0, a, b, p)?;
    let den = nonzero(bracket(u - 1.0, p) * br(b, p), "psi-prime denominator")?;
    let f = bracket(u, p) * br(a, p) / den;
    Ok([f * v[0], f * v[1]])
}

fn kron_all(vs: &[[C64; 2]]) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for v in vs {
        out = kron_vec(&out, v);
    }
    out
}

/// Symmetrized product `Π (f(u+k-1)^{c_0}_{c_1} ⊗ ... ⊗ f(u)^{c_{k-1}}_{c_k})` along `path`.
fn fused_ambient(k: usize, u: C64, path: &[f64], f: fn(C64, f64, f64, &ModelParams) -> Result<[C64; 2]>, p: &ModelParams) -> Result<Vec<C64>> {
    let mut vs = Vec::with_capacity(k);
    for i in 0..k {
        vs.push(f(u + (k - 1 - i) as f64, path[i], path[i + 1], p)?);
    }
    Ok(symmetrizer(k).mul_vec(&kron_all(&vs)))
}

/// Fused `ψ^{(k)}(u)^a_b` (or `ψ'^{(k)}`) along an explicit unit path `a -> b`.
pub fn psi_fused_on_path(kind: Kind, k: usize, u: C64, path: &[f64], p: &ModelParams) -> Result<IntertwinerVector> {
    let f = match kind {
        Kind::Psi => psi,
        Kind::PsiPrime => psi_prime,
        Kind::PsiStar => return Err(Error::Domain("dual vectors are fused by psi_star_fused")),
    };
    let amb = fused_ambient(k, u, path, f, p)?;
    Ok(IntertwinerVector { kind, k, a: path[0], b: path[k], u, components: extract(k, &amb) })
}

/// Fused `ψ^{(k)}(u)^a_b` or `ψ'^{(k)}(u)^a_b`, zero when no path `a -> b` exists.
pub fn psi_fused(kind: Kind, k: usize, u: C64, a: f64, b: f64, p: &ModelParams) -> Result<IntertwinerVector> {
    match unit_paths(a, b, k).first() {
        Some(path) => psi_fused_on_path(kind, k, u, path, p),
        None => Ok(IntertwinerVector { kind, k, a, b, u, components: vec![C64::new(0.0, 0.0); k + 1] }),
    }
}

/// Covector `Σ_paths ⊗_i ψ*(u+k-1-i)^{c_{i+1}}_{c_i}` over unit paths from `lower` to `upper`.
pub fn psi_star_ambient(k: usize, u: C64, upper: f64, lower: f64, p: &ModelParams) -> Result<Vec<C64>> {
    let mut tot = vec![C64::new(0.0, 0.0); 1 << k];
    for path in unit_paths(lower, upper, k) {
        let mut vs = Vec::with_capacity(k);
        for i in 0..k {
            vs.push(psi_star(u + (k - 1 - i) as f64, path[i + 1], path[i], p)?);
        }
        for (t, v) in tot.iter_mut().zip(kron_all(&vs)) {
            *t += v;
        }
    }
    Ok(tot)
}

/// Fused dual `ψ*^{(k)}(u)^{upper}_{lower}`; component `ε` is read at the
/// `decomp`-th string of that spin (every choice gives the same value).
pub fn psi_star_fused_decomp(k: usize, u: C64, upper: f64, lower: f64, decomp: usize, p: &ModelParams) -> Result<IntertwinerVector> {
    let cov = psi_star_ambient(k, u, upper, lower, p)?;
    let mut components = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let strings: Vec<usize> = (0..1usize << k).filter(|s| s.count_ones() as usize == i).collect();
        components.push(cov[strings[decomp % strings.len()]]);
    }
    Ok(IntertwinerVector { kind: Kind::PsiStar, k, a: upper, b: lower, u, components })
}

pub fn psi_star_fused(k: usize, u: C64, upper: f64, lower: f64, p: &ModelParams) -> Result<IntertwinerVector> {
    psi_star_fused_decomp(k, u, upper, lower, 0, p)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Residual of `R^{(k,k)}(u-v) ψ(u)^a_b ⊗ ψ(v)^b_c = Σ_{b'} W^{(k,k)}(a b; b' c | u-v) ψ(u)^{b'}_c ⊗ ψ(v)^a_{b'}`.
///
/// Returns `(max |LHS - RHS|, max |LHS|)`.
pub fn vertex_face_residual(k: usize, u: C64, v: C64, a: f64, b: f64, c: f64, p: &ModelParams) -> Result<(f64, f64)> {
    let r = r_fused(k, u - v, p)?;
    let x = psi_fused(Kind::Psi, k, u, a, b, p)?.components;
    let y = psi_fused(Kind::Psi, k, v, b, c, p)?.components;
    let lhs = r.m.mul_vec(&kron_vec(&x, &y));
    let mut rhs = vec![C64::new(0.0, 0.0); lhs.len()];
    for bp in neighbours(a, k) {
        let w = w_fused_or_zero(k, HeightQuad::new(a, b, bp, c), u - v, p)?;
        if w == C64::new(0.0, 0.0) {
            continue;
        }
        let s = psi_fused(Kind::Psi, k, u, bp, c, p)?.components;
        let t = psi_fused(Kind::Psi, k, v, a, bp, p)?.components;
        for (acc, z) in rhs.iter_mut().zip(kron_vec(&s, &t)) {
            *acc += w * z;
        }
    }
    Ok(max_diff_and_scale(&lhs, &rhs))
}

/// Residual of the dual relation in row-vector form:
/// `(ψ*(u)^a_b ⊗ ψ*(v)^b_c) R^{(k,k)}(u-v) = Σ_{b'} W^{(k,k)}(c b'; b a | u-v) ψ*(u)^{b'}_c ⊗ ψ*(v)^a_{b'}`.
pub fn vertex_face_dual_residual(k: usize, u: C64, v: C64, a: f64, b: f64, c: f64, p: &ModelParams) -> Result<(f64, f64)> {
    let r = r_fused(k, u - v, p)?;
    let x = psi_star_fused(k, u, a, b, p)?.components;
    let y = psi_star_fused(k, v, b, c, p)?.components;
    let lhs = r.m.transpose().mul_vec(&kron_vec(&x, &y));
    let mut rhs = vec![C64::new(0.0, 0.0); lhs.len()];
    for bp in neighbours(a, k) {
        let w = w_fused_or_zero(k, HeightQuad::new(c, bp, b, a), u - v, p)?;
        if w == C64::new(0.0, 0.0) {
            continue;
        }
        let s = psi_star_fused(k, u, bp, c, p)?.components;
        let t = psi_star_fused(k, v, a, bp, p)?.components;
        for (acc, z) in rhs.iter_mut().zip(kron_vec(&s, &t)) {
            *acc += w * z;
        }
    }
    Ok(max_diff_and_scale(&lhs, &rhs))
}

fn max_diff_and_scale(lhs: &[C64], rhs: &[C64]) -> (f64, f64) {
    let diff = lhs.iter().zip(rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let scale = lhs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    (diff, scale)
}

/// The four inversion relations at level `k` around base heights `b0` (for the
/// unprimed pair) and `a0` (for the primed pair). Each entry is a max deviation
/// from the Kronecker delta, divided by `max(1, Σ |terms|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResiduals {
    /// `Σ_ε ψ*_ε(u)^a_b ψ_ε(u)^b_c = δ_{a,c}`.
    pub heights: f64,
    /// `Σ_a ψ*_{ε'}(u)^a_b ψ_ε(u)^b_a = δ_{ε',ε}`.
    pub spins: f64,
    /// `Σ_ε ψ*_ε(u)^a_b ψ'_ε(u)^c_a = δ_{b,c}`.
    pub heights_prime: f64,
    /// `Σ_b ψ*_{ε'}(u)^a_b ψ'_ε(u)^b_a = δ_{ε',ε}`.
    pub spins_prime: f64,
}

impl InversionResiduals {
    pub fn max(&self) -> f64 {
        self.heights.max(self.spins).max(self.heights_prime).max(self.spins_prime)
    }
}

pub fn inversion_residuals(k: usize, u: C64, b0: f64, a0: f64, p: &ModelParams) -> Result<InversionResiduals> {
    let d = k + 1;
    let delta = |x: f64, y: f64| if (x - y).abs() < 1e-9 { 1.0 } else { 0.0 };
    // Deviations are divided by max(1, Σ |terms|); single components grow like x^{-a}.
    let scaled = |v: C64, mag: f64, want: f64| (v - want).norm() / mag.max(1.0);
    let mut heights = 0.0f64;
    for a in neighbours(b0, k) {
        let ps = psi_star_fused(k, u, a, b0, p)?.components;
        for c in neighbours(b0, k) {
            let pv = psi_fused(Kind::Psi, k, u, b0, c, p)?.components;
            heights = heights.max(scaled(dot(&ps, &pv), abs_dot(&ps, &pv), delta(a, c)));
        }
    }
    let mut m = CMat::zeros(d, d);
    let mut mag = vec![0.0f64; d * d];
    for a in neighbours(b0, k) {
        let ps = psi_star_fused(k, u, a, b0, p)?.components;
        let pv = psi_fused(Kind::Psi, k, u, b0, a, p)?.components;
        accumulate(&mut m, &mut mag, &ps, &pv);
    }
    let spins = matrix_deviation(&m, &mag);
    let mut heights_prime = 0.0f64;
    for b in neighbours(a0, k) {
        let ps = psi_star_fused(k, u, a0, b, p)?.components;
        for c in neighbours(a0, k) {
            let pv = psi_fused(Kind::PsiPrime, k, u, c, a0, p)?.components;
            heights_prime = heights_prime.max(scaled(dot(&ps, &pv), abs_dot(&ps, &pv), delta(b, c)));
        }
    }
    let mut m = CMat::zeros(d, d);
    let mut mag = vec![0.0f64; d * d];
    for b in neighbours(a0, k) {
        let ps = psi_star_fused(k, u, a0, b, p)?.components;
        let pv = psi_fused(Kind::PsiPrime, k, u, b, a0, p)?.components;
        accumulate(&mut m, &mut mag, &ps, &pv);
    }
    let spins_prime = matrix_deviation(&m, &mag);
    Ok(InversionResiduals { heights, spins, heights_prime, spins_prime })
}

fn abs_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.norm() * y.norm()).sum()
}

fn accumulate(m: &mut CMat, mag: &mut [f64], ps: &[C64], pv: &[C64]) {
    let d = ps.len();
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] += ps[i] * pv[j];
            mag[i * d + j] += ps[i].norm() * pv[j].norm();
        }
    }
}

fn matrix_deviation(m: &CMat, mag: &[f64]) -> f64 {
    let d = m.rows;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - want).norm() / mag[i * d + j].max(1.0));
        }
    }
    worst
}

/// Residual of `ψ'^{(k)}(u)^a_b = [u+k-1][a] / ([u-1][b]) ψ^{(k)}(u-2)^a_b`, relative to `|ψ'|`.
pub fn psi_prime_component_residual(k: usize, u: C64, a: f64, b: f64, p: &ModelParams) -> Result<f64> {
    let l = psi_fused(Kind::PsiPrime, k, u, a, b, p)?.components;
    let r = psi_fused(Kind::Psi, k, u - 2.0, a, b, p)?.components;
    let den = nonzero(bracket(u - 1.0, p) * br(b, p), "psi-prime denominator")?;
    let f = bracket(u + (k as f64 - 1.0), p) * br(a, p) / den;
    let (diff, scale) = max_diff_and_scale(&l, &r.iter().map(|z| z * f).collect::<Vec<_>>());
    Ok(diff / scale.max(1e-300))
}

/// `C²` as forced by `Σ_ε ψ*_ε(u)^a_b ψ_ε(u)^b_a = 1` at level one.
pub fn pinned_c_squared(u: C64, a: f64, b: f64, p: &ModelParams) -> Result<C64> {
    let ps = psi_star(u, a, b, p)?;
    let pv = psi(u, b, a, p)?;
    let per_c2 = (ps[0] * pv[0] + ps[1] * pv[1]) / p.c_squared();
    Ok(C64::new(1.0, 0.0) / nonzero(per_c2, "pinned C^2")?)
}

/// Normalization `C^{(k)}(u)` in `ψ*^{(k)}_ε(u)^a_b = C^{(k)}(u) G^{(k)}_{a,b} Σ_{ε'} Q^{ε'}_ε ψ^{(k)}_{ε'}(u-1)^a_b`.
///
/// The raw ratio carries the gauge factor `(-1)^{ka}`, which is removed.
/// Fails with [`Error::ConventionMismatch`] if the ratios over all spins
/// and the supplied height pairs disagree beyond `tol` (relative).
pub fn cross_psi_normalization(k: usize, u: C64, pairs: &[(f64, f64)], tol: f64, p: &ModelParams) -> Result<C64> {
    let (c, spread) = cross_psi_normalization_spread(k, u, pairs, p)?;
    if spread > tol {
        return Err(Error::ConventionMismatch { spread });
    }
    Ok(c)
}

/// The first ratio `C` and the worst relative mismatch `|ψ* - C G Qᵀ ψ(u-1)|` over the pairs.
pub fn cross_psi_normalization_spread(k: usize, u: C64, pairs: &[(f64, f64)], p: &ModelParams) -> Result<(C64, f64)> {
    let q = q_cross_matrix(k, p)?.m;
    let qt = q.transpose();
    let mut sides = Vec::new();
    let mut ratios = Vec::new();
    for &(a, b) in pairs {
        let ps = psi_star_fused(k, u, a, b, p)?.components;
        let pv = psi_fused(Kind::Psi, k, u - 1.0, a, b, p)?.components;
        let g = gauge_big_g(k, a, b, p)?;
        let ai = a.round() as i64;
        let strip = if (k as i64 * ai).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let den: Vec<C64> = qt.mul_vec(&pv).iter().map(|y| g * y * strip).collect();
        for (x, y) in ps.iter().zip(&den) {
            ratios.push(x / nonzero(*y, "normalization denominator")?);
        }
        sides.push((ps, den));
    }
    let first = *ratios.first().ok_or(Error::Domain("no height pairs supplied"))?;
    // Spread measured as the vector mismatch ψ* - C·(G Qᵀ ψ), relative to |ψ*| per pair,
    // so that tiny components do not dominate through their ratios.
    let mut spread = 0.0f64;
    for (ps, den) in &sides {
        let scaled: Vec<C64> = den.iter().map(|y| first * y).collect();
        let (diff, scale) = max_diff_and_scale(ps, &scaled);
        spread = spread.max(diff / scale.max(1e-300));
    }
    Ok((first, spread))
}
