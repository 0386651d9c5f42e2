//! Seeded sample streams.
//!
//! Each `(suite, sample index)` pair owns a ChaCha stream derived from the
//! run seed, so samples can be drawn in any order or in parallel and still
//! come out the same.

use std::collections::BTreeMap;
use std::fmt::Display;

use fusion_core::{c64, Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SuiteId;

/// Retries after a singular draw before the sample is reported as skipped.
pub const MAX_RETRIES: usize = 100;

/// Half-width of the imaginary jitter added to spectral parameters.
pub const JITTER: f64 = 0.05;

/// A sample stream that records every value it hands out.
pub struct Draw {
    rng: ChaCha8Rng,
    pub sample: BTreeMap<String, String>,
}

pub fn fmt_c(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

impl Draw {
    pub fn new(seed: u64, suite: SuiteId, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((suite.ordinal() << 40) | index as u64);
        Draw { rng, sample: BTreeMap::new() }
    }

    pub fn note(&mut self, name: &str, value: impl Display) {
        self.sample.insert(name.into(), value.to_string());
    }

    /// Uniform real in `[lo, hi)`.
    pub fn real(&mut self, name: &str, lo: f64, hi: f64) -> f64 {
        let v = self.rng.gen_range(lo..hi);
        self.note(name, v);
        v
    }

    /// Real part uniform in `[lo, hi)`, imaginary part uniform in `[-JITTER, JITTER)`.
    pub fn spectral(&mut self, name: &str, lo: f64, hi: f64) -> C64 {
        let z = c64(self.rng.gen_range(lo..hi), self.rng.gen_range(-JITTER..JITTER));
        self.note(name, fmt_c(z));
        z
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, name: &str, n: usize) -> usize {
        let i = self.rng.gen_range(0..n);
        self.note(name, i);
        i
    }

    /// Uniform integer in `lo..=hi`.
    pub fn integer(&mut self, name: &str, lo: i64, hi: i64) -> i64 {
        let i = self.rng.gen_range(lo..=hi);
        self.note(name, i);
        i
    }
}

/// Outcome of drawing and evaluating one sample.
pub enum Drawn<T> {
    Done { value: T, sample: BTreeMap<String, String> },
    Singular { reason: String, sample: BTreeMap<String, String> },
    Failed { error: Error, sample: BTreeMap<String, String> },
}

/// Runs `f` on fresh draws until it returns something other than
/// [`Error::Singular`], for at most `1 + MAX_RETRIES` attempts.
pub fn with_resampling<T>(mut draw: Draw, mut f: impl FnMut(&mut Draw) -> fusion_core::Result<T>) -> Drawn<T> {
    let mut attempt = 0;
    loop {
        draw.sample.clear();
        if attempt > 0 {
            draw.note("retries", attempt);
        }
        match f(&mut draw) {
            Ok(value) => return Drawn::Done { value, sample: draw.sample },
            Err(Error::Singular(what)) if attempt == MAX_RETRIES => {
                let reason = format!("singular after {MAX_RETRIES} retries: {what}");
                return Drawn::Singular { reason, sample: draw.sample };
            }
            Err(Error::Singular(_)) => attempt += 1,
            Err(error) => return Drawn::Failed { error, sample: draw.sample },
        }
    }
}
