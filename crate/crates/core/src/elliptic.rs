//! Theta functions, brackets and q-Pochhammer products.
//!
//! Every infinite product is cut at the first factor whose deviation from 1
//! drops below [`MACHINE_FLOOR`](crate::params::MACHINE_FLOOR).

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::PI;


use crate::params::MACHINE_FLOOR;
use crate::{Error, ModelParams, Result, C64};

const MAX_FACTORS: usize = 200_000;

/// Moduli below this are treated as zeros of a denominator.
pub const SINGULAR_FLOOR: f64 = 1e-13;

#[inline]
fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `x^w` for real positive `x` and complex `w`, principal branch.
#[inline]
pub fn xpow(x: f64, w: C64) -> C64 {
    (w * x.ln()).exp()
}

/// Rejects values too close to zero for use as a divisor.
#[inline]
pub fn nonzero(v: C64, what: &'static str) -> Result<C64> {
    if v.norm() < SINGULAR_FLOOR || !v.is_finite() {
        Err(Error::Singular(what))
    } else {
        Ok(v)
    }
}

/// Jacobi nome `e^{2 pi i tau}`.
pub fn nome(tau: C64) -> Result<C64> {
    if !(tau.im > 0.0) {
        return Err(Error::Domain("Im tau must be positive"));
    }
    let q = (C64::new(0.0, 2.0 * PI) * tau).exp();
    if q.norm() >= 1.0 {
        return Err(Error::Domain("non-convergent nome"));
    }
    Ok(q)
}

fn theta1(u: C64, tau: C64) -> Result<C64> {
    let q = nome(tau)?;
    let c = (u * (2.0 * PI)).cos();
    let spread = 1.0 + 2.0 * c.norm();
    let mut prod = (u * PI).sin() * 2.0 * (C64::new(0.0, PI / 4.0) * tau).exp();
    let mut qn = q;
    for _ in 0..MAX_FACTORS {
        if qn.norm() * spread < MACHINE_FLOOR {
            return Ok(prod);
        }
        prod *= (one() - qn) * (one() - qn * c * 2.0 + qn * qn);
        qn *= q;
    }
    Err(Error::Domain("theta product did not converge"))
}

/// The four Jacobi theta functions `ϑ_i(u|tau)`, `i` in `0..=3`.
pub fn theta_jacobi(i: u8, u: C64, tau: C64) -> Result<C64> {
    let ipi = C64::new(0.0, PI);
    match i {
        1 => theta1(u, tau),
        2 => theta1(u + 0.5, tau),
        0 => Ok(C64::new(0.0, -1.0) * (ipi * (u + tau / 4.0)).exp() * theta1(u + tau / 2.0, tau)?),
        3 => Ok((ipi * (u + tau / 4.0)).exp() * theta1(u + (tau + 1.0) / 2.0, tau)?),
        _ => Err(Error::Domain("theta index must be 0, 1, 2 or 3")),
    }
}

/// `(z; p)_∞`.
pub fn q_pochhammer(z: C64, p: C64) -> Result<C64> {
    if p.norm() >= 1.0 {
        return Err(Error::Domain("nome modulus must be below 1"));
    }
    let mut prod = one();
    let mut t = z;
    for _ in 0..MAX_FACTORS {
        if t.norm() < MACHINE_FLOOR {
            return Ok(prod);
        }
        prod *= one() - t;
        t *= p;
    }
    Err(Error::Domain("pochhammer product did not converge"))
}

/// `Θ_p(z) = (z;p)_∞ (p/z;p)_∞ (p;p)_∞`.
pub fn theta_p(z: C64, p: C64) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("theta_p needs z != 0"));
    }
    Ok(q_pochhammer(z, p)? * q_pochhammer(p / z, p)? * q_pochhammer(p, p)?)
}

/// `(z; p_1, ..., p_m)_∞` over multi-indices with `Σ n_i <= cutoff`.
pub fn multi_pochhammer(z: C64, nomes: &[C64], cutoff: usize) -> Result<C64> {
    if nomes.iter().any(|p| p.norm() >= 1.0) {
        return Err(Error::Domain("nome modulus must be below 1"));
    }
    fn rec(t: C64, nomes: &[C64], budget: usize) -> C64 {
        match nomes.split_first() {
            None => C64::new(1.0, 0.0) - t,
            Some((p, rest)) => {
                let mut prod = C64::new(1.0, 0.0);
                let mut tt = t;
                for used in 0..=budget {
                    prod *= rec(tt, rest, budget - used);
                    tt *= p;
                }
                prod
            }
        }
    }
    Ok(rec(z, nomes, cutoff))
}

/// `(z; p1, p2)_∞` truncated adaptively in both directions.
pub fn double_pochhammer(z: C64, p1: C64, p2: C64) -> Result<C64> {
    if p2.norm() >= 1.0 {
        return Err(Error::Domain("nome modulus must be below 1"));
    }
    let mut prod = one();
    let mut t = z;
    for _ in 0..MAX_FACTORS {
        if t.norm() < MACHINE_FLOOR {
            return Ok(prod);
        }
        prod *= q_pochhammer(t, p1)?;
        t *= p2;
    }
    Err(Error::Domain("pochhammer product did not converge"))
}

/// `[u]^{(s)} = x^{u²/s - u} Θ_{x^{2s}}(x^{2u})`.
///
/// The argument is first reduced with `[u + s] = -[u]`, which keeps the
/// prefactor from overflowing far from the origin.
pub fn bracket_s(u: C64, s: f64, x: f64) -> C64 {
    let j = (u.re / s).round();
    let v = u - j * s;
    let sign = if (j as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let p = C64::new(x.powf(2.0 * s), 0.0);
    let z = xpow(x, v * 2.0);
    if z == one() {
        return C64::new(0.0, 0.0);
    }
    let th = theta_p(z, p).unwrap_or(C64::new(0.0, 0.0));
    xpow(x, v * v / s - v) * th * sign
}

/// `[u] = [u]^{(r)}`.
#[inline]
pub fn bracket(u: C64, p: &ModelParams) -> C64 {
    bracket_s(u, p.r, p.x)
}

/// `[u]^* = [u]^{(r-k)}`.
#[inline]
pub fn bracket_star(u: C64, p: &ModelParams) -> C64 {
    bracket_s(u, p.r_star(), p.x)
}

/// Real-argument shorthand for [`bracket`].
#[inline]
pub fn br(u: f64, p: &ModelParams) -> C64 {
    bracket(C64::new(u, 0.0), p)
}

/// `[A]_M = [A][A-1]...[A-M+1]`.
pub fn falling(a: C64, m: usize, p: &ModelParams) -> C64 {
    (0..m).map(|i| bracket(a - i as f64, p)).product()
}

/// `[A, B] = [A][A+1]...[B]`, with `[A, A-1] = 1`.
///
/// The number of factors is `round(B - A) + 1`, so non-integer `A` works
/// as long as `B - A` is an integer.
pub fn bracket_range(a: C64, b: C64, p: &ModelParams) -> C64 {
    let n = (b - a).re.round() as i64 + 1;
    (0..n.max(0)).map(|t| bracket(a + t as f64, p)).product()
}

/// Bracket binomial `[A choose M] = [A]_M / [M]_M`.
pub fn binomial(a: C64, m: usize, p: &ModelParams) -> Result<C64> {
    let den = nonzero(falling(C64::new(m as f64, 0.0), m, p), "binomial denominator")?;
    Ok(falling(a, m, p) / den)
}

/// `(a, b)_M = [M choose (a-b+M)/2]^{-1} [(a+b-M)/2, (a+b+M)/2] / sqrt([a][b])`.
pub fn pairing(a: f64, b: f64, m: usize, p: &ModelParams) -> Result<C64> {
    let twice = a - b + m as f64;
    let j = (twice / 2.0).round();
    if (twice - 2.0 * j).abs() > 1e-9 || j < 0.0 || j > m as f64 {
        return Err(Error::Inadmissible);
    }
    let binom = nonzero(binomial(C64::new(m as f64, 0.0), j as usize, p)?, "pairing binomial")?;
    let lo = (a + b - m as f64) / 2.0;
    let rng: C64 = (0..=m).map(|t| br(lo + t as f64, p)).product();
    let root = nonzero((br(a, p) * br(b, p)).sqrt(), "pairing square root")?;
    Ok(rng / (binom * root))
}

/// `[[n]]_x = (x^n - x^{-n}) / (x - x^{-1})`.
pub fn qint(n: i64, x: f64) -> f64 {
    let nf = n as f64;
    (x.powf(nf) - x.powf(-nf)) / (x - 1.0 / x)
}
