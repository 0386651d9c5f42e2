//! Global elliptic data shared by every kernel.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::PI;


use crate::{Error, Result, C64};

/// Smallest relative size kept when truncating products and series.
pub const MACHINE_FLOOR: f64 = 1e-18;

/// Crossing parameter `x`, period `r`, level `k` and the nomes derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub x: f64,
    pub r: f64,
    pub k: usize,
    /// `x^{2r}`.
    pub p: f64,
    /// `x^{2r*}` with `r* = r - k`.
    pub p_star: f64,
    /// Half-period ratio, `-pi i / (r ln x)`.
    pub tau: C64,
    /// `x^{-r/4} e^{-pi i/4} tau^{1/2}`.
    pub c: C64,
    pub series_cutoff: usize,
    pub tol: f64,
}

impl ModelParams {
    /// Validates `0 < x < 1`, `k >= 1`, `r > k + 2` and derives the nomes.
    pub fn new(x: f64, r: f64, k: usize) -> Result<Self> {
        Self::with_tol(x, r, k, 1e-9)
    }

    pub fn with_tol(x: f64, r: f64, k: usize, tol: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain("x must lie in (0, 1)"));
        }
        if k == 0 {
            return Err(Error::Domain("level k must be positive"));
        }
        if !(r > k as f64 + 2.0) || !r.is_finite() {
            return Err(Error::Domain("r must exceed k + 2"));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain("tolerance must be positive"));
        }
        let lx = x.ln();
        let p = (2.0 * r * lx).exp();
        let p_star = (2.0 * (r - k as f64) * lx).exp();
        let tau = C64::new(0.0, -PI / (r * lx));
        let c = C64::new(x.powf(-r / 4.0), 0.0) * C64::from_polar(1.0, -PI / 4.0) * tau.sqrt();
        let target = (tol * 1e-2).min(MACHINE_FLOOR);
        let series_cutoff = (target.ln() / p.ln()).ceil().max(1.0) as usize;
        Ok(ModelParams { x, r, k, p, p_star, tau, c, series_cutoff, tol })
    }

    /// `r* = r - k`.
    pub fn r_star(&self) -> f64 {
        self.r - self.k as f64
    }

    /// `C^2 = -i tau x^{-r/2}`.
    pub fn c_squared(&self) -> C64 {
        self.c * self.c
    }

    /// Same `x, r`, different level. `r` must still exceed the new `k + 2`.
    pub fn at_level(&self, k: usize) -> Result<Self> {
        Self::with_tol(self.x, self.r, k, self.tol)
    }
}
