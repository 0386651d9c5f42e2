//! Truncated series with real exponents and real coefficients.

// Float methods come from libm without std; with std in the build graph the import is redundant.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


/// Exponents closer than this are treated as equal.
pub const EXPONENT_FUZZ: f64 = 1e-12;

/// `Σ c_e q^e` with every exponent below `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    /// Sorted by exponent, no duplicates, no coefficient below `floor` in modulus.
    terms: Vec<(f64, f64)>,
    pub cutoff: f64,
    pub floor: f64,
}

impl QSeries {
    pub fn zero(cutoff: f64) -> Self {
        QSeries { terms: Vec::new(), cutoff, floor: 0.0 }
    }

    /// Builds from unsorted terms, merging equal exponents and dropping
    /// exponents at or above `cutoff`.
    pub fn from_terms(terms: impl IntoIterator<Item = (f64, f64)>, cutoff: f64) -> Self {
        let mut s = QSeries::zero(cutoff);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self.terms.retain(|&(_, c)| c.abs() > floor);
        self
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c q^e` in place.
    pub fn add_term(&mut self, e: f64, c: f64) {
        if e >= self.cutoff - EXPONENT_FUZZ {
            return;
        }
        let pos = self.terms.partition_point(|&(x, _)| x < e - EXPONENT_FUZZ);
        if pos < self.terms.len() && (self.terms[pos].0 - e).abs() <= EXPONENT_FUZZ {
            self.terms[pos].1 += c;
            if self.terms[pos].1.abs() <= self.floor {
                self.terms.remove(pos);
            }
        } else if c.abs() > self.floor {
            self.terms.insert(pos, (e, c));
        }
    }

    /// Coefficient of `q^e`, zero when absent.
    pub fn coeff(&self, e: f64) -> f64 {
        let pos = self.terms.partition_point(|&(x, _)| x < e - EXPONENT_FUZZ);
        match self.terms.get(pos) {
            Some(&(x, c)) if (x - e).abs() <= EXPONENT_FUZZ => c,
            _ => 0.0,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let mut out = QSeries { terms: self.terms.clone(), cutoff: self.cutoff.min(other.cutoff), floor: self.floor.max(other.floor) };
        out.terms.retain(|&(e, _)| e < out.cutoff - EXPONENT_FUZZ);
        for &(e, c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> QSeries {
        QSeries::from_terms(self.terms.iter().map(|&(e, c)| (e, c * s)), self.cutoff).with_floor(self.floor)
    }

    /// `q^shift` times the series; the cutoff moves with it.
    pub fn shift(&self, shift: f64) -> QSeries {
        QSeries {
            terms: self.terms.iter().map(|&(e, c)| (e + shift, c)).collect(),
            cutoff: self.cutoff + shift,
            floor: self.floor,
        }
    }

    /// Product truncated at the smaller relative depth of the two factors.
    ///
    /// With lowest exponents `a0`, `b0` and cutoffs `A`, `B`, the product is
    /// exact below `min(A + b0, B + a0)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let a0 = self.terms.first().map_or(self.cutoff, |t| t.0);
        let b0 = other.terms.first().map_or(other.cutoff, |t| t.0);
        let cutoff = (self.cutoff + b0).min(other.cutoff + a0);
        let mut out = QSeries { terms: Vec::new(), cutoff, floor: self.floor.max(other.floor) };
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                if ea + eb >= cutoff - EXPONENT_FUZZ {
                    break;
                }
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Numerical value at `0 < q < 1`.
    pub fn eval(&self, q: f64) -> f64 {
        self.terms.iter().map(|&(e, c)| c * q.powf(e)).sum()
    }
}
