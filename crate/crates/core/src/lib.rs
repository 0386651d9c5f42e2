//! Numerics for the fused eight-vertex model and its SOS counterpart.
//!
//! Everything here is a pure function of a [`ModelParams`] value and
//! spectral parameters. The crate is `no_std` and only needs `alloc`.

#![no_std]
// Negated comparisons are how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod characters;
pub mod elliptic;
pub mod error;
pub mod face;
pub mod intertwiner;
pub mod linalg;
pub mod lmatrix;
pub mod params;
pub mod qseries;
pub mod tail;
pub mod vertex;

pub use error::{Error, Result};
pub use params::ModelParams;

/// Complex double used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
