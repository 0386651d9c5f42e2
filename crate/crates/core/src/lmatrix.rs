//! L-matrix `L(a b; c d | u)_ε = ψ*^{(k)}_ε(u)^d_c ψ^{(k)}_ε(u)^a_b` and its closed forms.
//!
//! Closed forms are indexed as `L^{(k)}(m, m-k+2i; n, n-k+2j | u)`.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use crate::elliptic::{binomial, falling, nonzero};
use crate::face::{is_step, unit_paths};
use crate::intertwiner::{psi_fused, psi_star_fused, Kind};
use crate::vertex::spins;
use crate::{Error, ModelParams, Result, C64};

/// One L-matrix entry with its per-spin terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LEntry {
    pub k: usize,
    pub m0: f64,
    pub mk: f64,
    pub n0: f64,
    pub nk: f64,
    pub u: C64,
    pub value: C64,
    /// `L(...)_ε` by spin index (`ε = k - 2i`).
    pub by_epsilon: Vec<C64>,
}

/// Defining sum over spins. Heights must be level-`k` steps apart.
pub fn l_def(k: usize, m0: f64, mk: f64, n0: f64, nk: f64, u: C64, p: &ModelParams) -> Result<LEntry> {
    if !is_step(m0, mk, k) || !is_step(n0, nk, k) {
        return Err(Error::Inadmissible);
    }
    let ps = psi_star_fused(k, u, nk, n0, p)?.components;
    let pv = psi_fused(Kind::Psi, k, u, m0, mk, p)?.components;
    let by_epsilon: Vec<C64> = ps.iter().zip(&pv).map(|(a, b)| a * b).collect();
    let value = by_epsilon.iter().sum();
    Ok(LEntry { k, m0, mk, n0, nk, u, value, by_epsilon })
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn bn(a: C64, m: usize, p: &ModelParams) -> Result<C64> {
    binomial(a, m, p)
}

/// Level-one closed forms
/// `L(m, m±1; n, n±1) = [u ± (n-m)/2][(n+m)/2] / ([u][n])` and
/// `L(m, m∓1; n, n±1) = [u ± (n+m)/2][(n-m)/2] / ([u][n])`.
pub fn l1_closed(m0: f64, m1: f64, n0: f64, n1: f64, u: C64, p: &ModelParams) -> Result<C64> {
    let (sm, sn) = ((m1 - m0).round(), (n1 - n0).round());
    if (sm.abs() - 1.0).abs() > 1e-9 || (sn.abs() - 1.0).abs() > 1e-9 {
        return Err(Error::Inadmissible);
    }
    let br = |z: C64| crate::elliptic::bracket(z, p);
    let den = nonzero(br(u) * br(c(n0)), "L denominator")?;
    let (m, n) = (m0, n0);
    if sm == sn {
        Ok(br(u + sn * (n - m) / 2.0) * br(c((n + m) / 2.0)) / den)
    } else {
        Ok(br(u + sn * (n + m) / 2.0) * br(c((n - m) / 2.0)) / den)
    }
}

/// `L^{(k)}(m, m+k; n, n+k-2j | u)`.
pub fn l_top(k: usize, m: f64, n: f64, j: usize, u: C64, p: &ModelParams) -> Result<C64> {
    let kf = k as f64;
    let jf = j as f64;
    let num = bn(c((n + m) / 2.0 + kf - 1.0 - jf), k - j, p)?
        * bn(c((n - m) / 2.0), j, p)?
        * bn(-u + (n + m) / 2.0, j, p)?
        * bn(-u + (m - n) / 2.0, k - j, p)?;
    let den = bn(c(n + kf - 1.0 - 2.0 * jf), k - j, p)? * bn(c(n + kf - jf), j, p)? * bn(-u, k, p)?;
    Ok(num / nonzero(den, "L top denominator")?)
}

/// `L^{(k)}(m, m-k; n, n+k-2j | u)`.
pub fn l_bottom(k: usize, m: f64, n: f64, j: usize, u: C64, p: &ModelParams) -> Result<C64> {
    let kf = k as f64;
    let jf = j as f64;
    let num = bn(c((n - m) / 2.0 + kf - 1.0 - jf), k - j, p)?
        * bn(c((n + m) / 2.0), j, p)?
        * bn(-u + (n - m) / 2.0, j, p)?
        * bn(-u - (m + n) / 2.0, k - j, p)?;
    let den = bn(c(n + kf - 1.0 - 2.0 * jf), k - j, p)? * bn(c(n + kf - jf), j, p)? * bn(-u, k, p)?;
    Ok(num / nonzero(den, "L bottom denominator")?)
}

/// General level-`k` entry from the closed forms: extremal `m`-steps directly,
/// interior ones through one step of the first recursion.
pub fn l_closed_heights(k: usize, m0: f64, mk: f64, n0: f64, nk: f64, u: C64, p: &ModelParams) -> Result<C64> {
    if k == 0 {
        let same = (m0 - mk).abs() < 1e-9 && (n0 - nk).abs() < 1e-9;
        return Ok(c(if same { 1.0 } else { 0.0 }));
    }
    if !is_step(m0, mk, k) || !is_step(n0, nk, k) {
        return Err(Error::Inadmissible);
    }
    let kf = k as f64;
    let i = ((mk - m0 + kf) / 2.0).round() as usize;
    let j = ((nk - n0 + kf) / 2.0).round() as usize;
    l_closed(k, i, j, m0, n0, u, p)
}

/// `L^{(k)}(m, m-k+2i; n, n-k+2j | u)` from the closed forms.
pub fn l_closed(k: usize, i: usize, j: usize, m: f64, n: f64, u: C64, p: &ModelParams) -> Result<C64> {
    if i > k || j > k {
        return Err(Error::Inadmissible);
    }
    if i == k {
        return l_top(k, m, n, k - j, u, p);
    }
    if i == 0 {
        return l_bottom(k, m, n, k - j, u, p);
    }
    recursion_first(k, i, j, m, n, u, &|kk, a, b, cc, d, w| l_closed_heights(kk, a, b, cc, d, w, p))
}

type LFn<'a> = dyn Fn(usize, f64, f64, f64, f64, C64) -> Result<C64> + 'a;

/// `Σ_l L^{(k-i)}(m, m-k+i; n, n-k+2j-i+2l | u+i) L^{(i)}(m-k+i, m-k+2i; n-k+2j-i+2l, n-k+2j | u)`.
pub fn recursion_first(k: usize, i: usize, j: usize, m: f64, n: f64, u: C64, l: &LFn<'_>) -> Result<C64> {
    let (kf, i_f, jf) = (k as f64, i as f64, j as f64);
    let lo = i.saturating_sub(j);
    let hi = i.min(k - j);
    let mut tot = c(0.0);
    for ll in lo..=hi {
        let mid = n - kf + 2.0 * jf - i_f + 2.0 * ll as f64;
        tot += l(k - i, m, m - kf + i_f, n, mid, u + i_f)? * l(i, m - kf + i_f, m - kf + 2.0 * i_f, mid, n - kf + 2.0 * jf, u)?;
    }
    Ok(tot)
}

/// `Σ_l L^{(i)}(m, m+i; n, n-i+2l | u+k-i) L^{(k-i)}(m+i, m-k+2i; n-i+2l, n-k+2j | u)`.
pub fn recursion_second(k: usize, i: usize, j: usize, m: f64, n: f64, u: C64, l: &LFn<'_>) -> Result<C64> {
    let (kf, i_f, jf) = (k as f64, i as f64, j as f64);
    let lo = (i + j).saturating_sub(k);
    let hi = i.min(j);
    let mut tot = c(0.0);
    for ll in lo..=hi {
        let mid = n - i_f + 2.0 * ll as f64;
        tot += l(i, m, m + i_f, n, mid, u + (kf - i_f))? * l(k - i, m + i_f, m - kf + 2.0 * i_f, mid, n - kf + 2.0 * jf, u)?;
    }
    Ok(tot)
}

/// `L^{(k)}(m, m+k-2j; n, n+k | u) = [(n+m)/2+k-1-j]_{k-j} [(n-m)/2-1+j]_j / [n+k-1]_k
///   × [-u+(m-n)/2-j]_{k-j} [-u-(m+n)/2+j-k]_j / [-u]_k`.
pub fn l_tail_up(k: usize, m: f64, n: f64, j: usize, u: C64, p: &ModelParams) -> Result<C64> {
    l_tail_up_with(k, m, n, j, u, -1.0, p)
}

/// The same product with `+j` in the first factor; wrong for `0 < j < k`, kept for the negative test.
/// It disagrees with the defining sum whenever `0 < j < k`.
pub fn l_tail_up_plus_j(k: usize, m: f64, n: f64, j: usize, u: C64, p: &ModelParams) -> Result<C64> {
    l_tail_up_with(k, m, n, j, u, 1.0, p)
}

fn l_tail_up_with(k: usize, m: f64, n: f64, j: usize, u: C64, sj: f64, p: &ModelParams) -> Result<C64> {
    let (kf, jf) = (k as f64, j as f64);
    let num = falling(c((n + m) / 2.0 + kf - 1.0 + sj * jf), k - j, p)
        * falling(c((n - m) / 2.0 - 1.0 + jf), j, p)
        * falling(-u + (m - n) / 2.0 - jf, k - j, p)
        * falling(-u - (m + n) / 2.0 + jf - kf, j, p);
    let den = falling(c(n + kf - 1.0), k, p) * falling(-u, k, p);
    Ok(num / nonzero(den, "L tail denominator")?)
}

/// `L^{(k)}(m, m+k-2j; n, n-k | u) = [(n+m)/2]_j [(n-m)/2]_{k-j} [-u+(m+n)/2-j]_{k-j} [-u+(n-m)/2+j-k]_j / ([n]_k [-u]_k)`.
pub fn l_tail_down(k: usize, m: f64, n: f64, j: usize, u: C64, p: &ModelParams) -> Result<C64> {
    let (kf, jf) = (k as f64, j as f64);
    let num = falling(c((n + m) / 2.0), j, p)
        * falling(c((n - m) / 2.0), k - j, p)
        * falling(-u + (m + n) / 2.0 - jf, k - j, p)
        * falling(-u + (n - m) / 2.0 + jf - kf, j, p);
    let den = falling(c(n), k, p) * falling(-u, k, p);
    Ok(num / nonzero(den, "L tail denominator")?)
}

/// Product of level-one L-matrices along `m_path`, summed over unit paths `n0 -> nk`,
/// with factor `t` at `u + k - 1 - t`.
pub fn l_fusion(m_path: &[f64], n0: f64, nk: f64, u: C64, p: &ModelParams) -> Result<C64> {
    l_fusion_shifts(m_path, n0, nk, u, |k, t| (k - 1 - t) as f64, p)
}

/// As [`l_fusion`] with the shift of factor `t` given by `shift(k, t)`.
pub fn l_fusion_shifts(m_path: &[f64], n0: f64, nk: f64, u: C64, shift: impl Fn(usize, usize) -> f64, p: &ModelParams) -> Result<C64> {
    let k = m_path.len() - 1;
    let mut tot = c(0.0);
    for np in unit_paths(n0, nk, k) {
        let mut prod = c(1.0);
        for t in 0..k {
            prod *= l1_closed(m_path[t], m_path[t + 1], np[t], np[t + 1], u + shift(k, t), p)?;
        }
        tot += prod;
    }
    Ok(tot)
}

/// Outcome of the maximal-weight scan of `L(m+ℓ, m+ℓ̄; m+ℓ, m+ℓ̄ | u)_ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxWeight {
    pub k: usize,
    pub ell: usize,
    pub m: f64,
    pub u: f64,
    pub moduli: Vec<f64>,
    pub argmax_spin: i32,
    pub expected_spin: i32,
}

impl MaxWeight {
    pub fn holds(&self) -> bool {
        self.argmax_spin == self.expected_spin
    }
}

/// Scans the spins without checking the window.
pub fn l_max_weight_scan(k: usize, ell: usize, m: f64, u: f64, p: &ModelParams) -> Result<MaxWeight> {
    if ell > k {
        return Err(Error::Domain("ell must lie in 0..=k"));
    }
    let a = m + ell as f64;
    let b = m + (k - ell) as f64;
    let e = l_def(k, a, b, a, b, C64::new(u, 0.0), p)?;
    let moduli: Vec<f64> = e.by_epsilon.iter().map(|z| z.norm()).collect();
    let imax = (0..moduli.len()).max_by(|&x, &y| moduli[x].total_cmp(&moduli[y])).unwrap_or(0);
    Ok(MaxWeight { k, ell, m, u, argmax_spin: spins(k)[imax], expected_spin: k as i32 - 2 * ell as i32, moduli })
}

/// The claim's window: `-1 < u + (k-1)/2 < 0` and `m >= 1 + k/2`.
pub fn in_max_weight_window(k: usize, m: f64, u: f64) -> bool {
    let w = u + (k as f64 - 1.0) / 2.0;
    w > -1.0 && w < 0.0 && m >= 1.0 + k as f64 / 2.0
}

/// Maximal-weight scan restricted to the stated window.
pub fn l_max_weight(k: usize, ell: usize, m: f64, u: f64, p: &ModelParams) -> Result<MaxWeight> {
    if !in_max_weight_window(k, m, u) {
        return Err(Error::Domain("outside -1 < u + (k-1)/2 < 0, m >= 1 + k/2"));
    }
    l_max_weight_scan(k, ell, m, u, p)
}
