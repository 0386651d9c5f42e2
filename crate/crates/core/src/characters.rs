//! Level-`k` affine sl2 string functions and the character identities built on them.
//!
//! Multiplicities come from the Weyl–Kac formula expanded as a two-variable
//! series in `y` (the finite weight, in units of `α/2`) and `q = e^{-δ}`.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;


use crate::elliptic::{bracket_s, q_pochhammer};
use crate::qseries::QSeries;
use crate::{Error, Result, C64};

/// Multiplicities `dim V(λ_ℓ)_{λ_M - nδ}` for `|M| <= window`, `0 <= n <= depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMultTable {
    pub k: usize,
    pub ell: usize,
    pub depth: usize,
    pub window: i64,
    /// `entries[n][M + window]`.
    entries: Vec<Vec<i64>>,
}

impl WeightMultTable {
    pub fn get(&self, m: i64, n: usize) -> i64 {
        if m.abs() > self.window || n > self.depth {
            return 0;
        }
        self.entries[n][(m + self.window) as usize]
    }
}

/// Weyl–Kac table with the window `|M| <= k`.
pub fn weight_mults(k: usize, ell: usize, depth: usize) -> Result<WeightMultTable> {
    weight_mults_window(k, ell, depth, k as i64)
}

pub fn weight_mults_window(k: usize, ell: usize, depth: usize, window: i64) -> Result<WeightMultTable> {
    if k == 0 || ell > k {
        return Err(Error::Domain("need k >= 1 and 0 <= ell <= k"));
    }
    let kk = (k + 2) as i64;
    let l = ell as i64;
    let d = depth as i64;
    // Numerator Σ_m (y^{ℓ+2Km} q^{(ℓ+1)m+Km²} - y^{-ℓ-2+2Km} q^{Km²-(ℓ+1)m}).
    let mut num: Vec<(i64, i64, i64)> = Vec::new();
    let span = (d as f64).sqrt() as i64 + 2;
    for m in -span..=span {
        let n1 = (l + 1) * m + kk * m * m;
        if (0..=d).contains(&n1) {
            num.push((l + 2 * kk * m, n1, 1));
        }
        let n2 = kk * m * m - (l + 1) * m;
        if (0..=d).contains(&n2) {
            num.push((-l - 2 + 2 * kk * m, n2, -1));
        }
    }
    let top = num.iter().map(|t| t.0.abs()).max().unwrap_or(0);
    // A y-power can rise by at most 2 per unit of q-depth, so nothing below
    // -window - 2 depth - 2 ever returns to the window.
    let m_hi = top + 2 * d + 2;
    let m_lo = -window - 2 * d - 2;
    let width = (m_hi - m_lo + 1) as usize;
    let mut s = vec![vec![0i64; width]; depth + 1];
    for &(m, n, c) in &num {
        if m >= m_lo && m <= m_hi {
            s[n as usize][(m - m_lo) as usize] += c;
        }
    }
    let add = |a: i64, b: i64| a.checked_add(b).ok_or(Error::Capacity);
    // 1/(1 - y^{a/2} q^b) by in-place geometric accumulation.
    let mut divide = |a: i64, b: usize| -> Result<()> {
        if b == 0 {
            // a = -2: descend in M.
            for row in s.iter_mut() {
                for j in (0..width.saturating_sub(2)).rev() {
                    row[j] = add(row[j], row[j + 2])?;
                }
            }
            return Ok(());
        }
        for n in b..=depth {
            for j in 0..width {
                let src = j as i64 - a;
                if src >= 0 && (src as usize) < width {
                    let v = s[n - b][src as usize];
                    s[n][j] = add(s[n][j], v)?;
                }
            }
        }
        Ok(())
    };
    for b in 1..=depth {
        divide(0, b)?;
        divide(2, b)?;
        divide(-2, b)?;
    }
    divide(-2, 0)?;
    let entries = (0..=depth)
        .map(|n| (-window..=window).map(|m| s[n][(m - m_lo) as usize]).collect())
        .collect();
    Ok(WeightMultTable { k, ell, depth, window, entries })
}

/// Representative of `M` modulo `2k` in `[-k, k]`.
pub fn reduce_m(m: i64, k: usize) -> i64 {
    let k = k as i64;
    let mut r = m.rem_euclid(2 * k);
    if r > k {
        r -= 2 * k;
    }
    r
}

/// `ℓ(ℓ+2)/4(k+2) - M²/4k - k/8(k+2)` for the reduced `M`.
pub fn string_prefactor(k: usize, ell: usize, m: i64) -> f64 {
    let (kf, lf) = (k as f64, ell as f64);
    let mf = reduce_m(m, k) as f64;
    lf * (lf + 2.0) / (4.0 * (kf + 2.0)) - mf * mf / (4.0 * kf) - kf / (8.0 * (kf + 2.0))
}

/// `c^{λ_ℓ}_{λ_M}` as a series in `q = x^4`.
pub fn string_function(table: &WeightMultTable, m: i64) -> QSeries {
    let e = string_prefactor(table.k, table.ell, m);
    let cut = e + table.depth as f64 + 1.0;
    if (m - table.ell as i64).rem_euclid(2) != 0 {
        return QSeries::zero(cut);
    }
    let mr = reduce_m(m, table.k);
    QSeries::from_terms((0..=table.depth).map(|n| (e + n as f64, table.get(mr, n) as f64)), cut)
}

/// String functions of every `ℓ` at level `k`, held for repeated evaluation.
#[derive(Debug, Clone)]
pub struct StringFunctions {
    pub k: usize,
    pub depth: usize,
    tables: Vec<WeightMultTable>,
}

impl StringFunctions {
    pub fn new(k: usize, depth: usize) -> Result<Self> {
        let tables = (0..=k).map(|l| weight_mults(k, l, depth)).collect::<Result<_>>()?;
        Ok(StringFunctions { k, depth, tables })
    }

    pub fn table(&self, ell: usize) -> &WeightMultTable {
        &self.tables[ell]
    }

    pub fn series(&self, ell: usize, m: i64) -> QSeries {
        string_function(&self.tables[ell], m)
    }

    /// `c^{λ_ℓ}_{λ_M}` at `q = x^4`.
    pub fn value(&self, ell: usize, m: i64, x: f64) -> f64 {
        self.series(ell, m).eval(x.powi(4))
    }
}

fn re(z: C64) -> f64 {
    z.re
}

/// `x^{1/2} [ℓ+1]^{(k+2)} / ((x²; x²)_∞ (x²; x⁴)_∞)`.
pub fn char_principal(k: usize, ell: usize, x: f64) -> Result<f64> {
    let x2 = C64::new(x * x, 0.0);
    let x4 = C64::new(x.powi(4), 0.0);
    let den = q_pochhammer(x2, x2)? * q_pochhammer(x2, x4)?;
    Ok(x.sqrt() * re(bracket_s(C64::new(ell as f64 + 1.0, 0.0), k as f64 + 2.0, x) / den))
}

fn count_to(n: i64) -> impl Iterator<Item = i64> {
    -n..=n
}

/// `Σ_{n ∈ ℤ} Σ_{M=0}^{2k-1} c^{λ_ℓ}_{λ_M} x^{4k(n+M/2k)² - 2k(n+M/2k)}`.
pub fn char_string_sum(sf: &StringFunctions, ell: usize, x: f64, n_max: i64) -> f64 {
    let kf = sf.k as f64;
    let mut tot = 0.0;
    for m in 0..2 * sf.k as i64 {
        let c = sf.value(ell, m, x);
        if c == 0.0 {
            continue;
        }
        for n in count_to(n_max) {
            let t = n as f64 + m as f64 / (2.0 * kf);
            tot += c * x.powf(4.0 * kf * t * t - 2.0 * kf * t);
        }
    }
    tot
}

/// Both sides of an identity evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn relative(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(f64::MIN_POSITIVE)
    }
}

/// `Σ_{a ∈ m+ℓ+2ℤ, |a-m-ℓ| <= 2A} [a] c^{λ_ℓ}_{λ_{a-m}} x^{(mr - ar*)²/(k r r*)}`
/// against `[m]* χ^{(k)}_ℓ`. The string index is taken modulo `2k`.
pub fn partition_identity(sf: &StringFunctions, m: i64, ell: usize, x: f64, r: f64, a_span: i64) -> Result<Sides> {
    let kf = sf.k as f64;
    let rs = r - kf;
    if !(rs > 2.0) {
        return Err(Error::Domain("r - k must exceed 2"));
    }
    let mf = m as f64;
    let mut lhs = 0.0;
    let base = m + ell as i64;
    for t in count_to(a_span) {
        let a = base + 2 * t;
        let af = a as f64;
        let c = sf.value(ell, a - m, x);
        lhs += re(bracket_s(C64::new(af, 0.0), r, x)) * c * x.powf((mf * r - af * rs).powi(2) / (kf * r * rs));
    }
    let rhs = re(bracket_s(C64::new(mf, 0.0), rs, x)) * char_principal(sf.k, ell, x)?;
    Ok(Sides { lhs, rhs })
}

/// `I(s) = x^{-k/4} Σ_{n ∈ ℤ} Σ_{M=0}^{2k-1} c^{λ_ℓ}_{λ_M} x^{(k(2n-s)+M+k/2)²/k}`, independent of `s`
/// and equal to `χ^{(k)}_ℓ`.
pub fn i_of_s(sf: &StringFunctions, ell: usize, s: i64, x: f64, n_max: i64) -> f64 {
    let kf = sf.k as f64;
    let mut tot = 0.0;
    for m in 0..2 * sf.k as i64 {
        let c = sf.value(ell, m, x);
        if c == 0.0 {
            continue;
        }
        for n in count_to(n_max) {
            let e = kf * (2 * n - s) as f64 + m as f64 + kf / 2.0;
            tot += c * x.powf(e * e / kf);
        }
    }
    tot * x.powf(-kf / 4.0)
}

/// `b^{(ℓ)}_{m,a} = Σ_j Σ_± ± c^{λ_ℓ}_{λ_{a-m'}} x^{(m'r - ar*)²/(k r r*)}` with `m' = ±m - 2r*j`, `|j| <= j_max`.
pub fn branching_function(sf: &StringFunctions, ell: usize, m: i64, a: i64, x: f64, r: i64, j_max: i64) -> f64 {
    let kf = sf.k as f64;
    let rs = r - sf.k as i64;
    let (rf, rsf) = (r as f64, rs as f64);
    let mut tot = 0.0;
    for j in count_to(j_max) {
        for sign in [1i64, -1] {
            let mp = sign * m - 2 * rs * j;
            let c = sf.value(ell, a - mp, x);
            let e = (mp as f64 * rf - a as f64 * rsf).powi(2) / (kf * rf * rsf);
            tot += sign as f64 * c * x.powf(e);
        }
    }
    tot
}

/// `χ^{(k)}_ℓ χ^{(r-k-2)}_{m-1} = Σ_{a=1}^{r-1} b^{(ℓ)}_{m,a} χ^{(r-2)}_{a-1}` at integer `r`.
pub fn branching_identity(sf: &StringFunctions, r: i64, m: i64, ell: usize, x: f64, j_max: i64) -> Result<Sides> {
    let k = sf.k as i64;
    if r <= k + 2 || m < 1 || m > r - k - 1 {
        return Err(Error::Domain("need integer r > k + 2 and 1 <= m <= r - k - 1"));
    }
    let lhs = char_principal(sf.k, ell, x)? * char_principal((r - k - 2) as usize, (m - 1) as usize, x)?;
    let mut rhs = 0.0;
    for a in 1..r {
        rhs += branching_function(sf, ell, m, a, x, r, j_max) * char_principal((r - 2) as usize, (a - 1) as usize, x)?;
    }
    Ok(Sides { lhs, rhs })
}
