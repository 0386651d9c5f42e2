//! Suite drivers. Each suite draws its inputs from a [`Draw`] and returns
//! one [`Measurement`] per identity; this module turns them into records.

mod characters;
mod face;
mod lmatrix;
mod tail;
mod vertex;

use fusion_core::characters::StringFunctions;
use fusion_core::vertex::{q_cross_matrix, QMatrix};
use fusion_core::{ModelParams, Result as CoreResult};
use rayon::prelude::*;

use crate::config::{SuiteConfig, SuiteId};
use crate::report::CheckReport;
use crate::sampling::{with_resampling, Draw, Drawn};

/// Depth of the string-function tables used by the character suite.
pub const STRING_DEPTH: usize = 20;

/// Minimal distance kept between a drawn height and a multiple of `r`, where `[h]` vanishes.
pub const POLE_MARGIN: f64 = 0.05;

/// Rejects the draw when some height sits within [`POLE_MARGIN`] of a zero of `[·]`.
pub fn clear_of_poles(heights: impl IntoIterator<Item = f64>, r: f64) -> CoreResult<()> {
    for h in heights {
        let t = h.rem_euclid(r);
        if t.min(r - t) < POLE_MARGIN {
            return Err(fusion_core::Error::Singular("height near a zero of the bracket"));
        }
    }
    Ok(())
}

/// One identity measured at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub identity: &'static str,
    pub residual: f64,
    pub threshold: f64,
    /// Thresholds that are not tolerances (a ratio bound) ignore `--tol`.
    pub fixed_threshold: bool,
    /// Extra inputs specific to this identity.
    pub detail: Vec<(String, String)>,
    pub reason: Option<String>,
    /// Set when the sample lies outside the range where the identity is claimed.
    pub outside: Option<String>,
}

impl Measurement {
    pub fn new(identity: &'static str, residual: f64, threshold: f64) -> Self {
        Measurement { identity, residual, threshold, fixed_threshold: false, detail: Vec::new(), reason: None, outside: None }
    }

    pub fn fixed(mut self) -> Self {
        self.fixed_threshold = true;
        self
    }

    pub fn detail(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.detail.push((key.into(), value.to_string()));
        self
    }

    pub fn reason(mut self, r: impl Into<String>) -> Self {
        self.reason = Some(r.into());
        self
    }

    pub fn outside(mut self, r: impl Into<String>) -> Self {
        self.outside = Some(r.into());
        self
    }
}

/// Shared, read-only state for a run.
pub struct Context {
    pub params: ModelParams,
    pub seed: u64,
    /// Crossing matrix, built once when the crossing suite runs.
    pub q: Option<QMatrix>,
    /// String functions, built once when the character suite runs.
    pub strings: Option<StringFunctions>,
}

impl Context {
    pub fn new(cfg: &SuiteConfig) -> CoreResult<Self> {
        let k = cfg.params.k;
        let q = if cfg.suites.contains(&SuiteId::Crossing) { Some(q_cross_matrix(k, &cfg.params)?) } else { None };
        let strings = if cfg.suites.contains(&SuiteId::Characters) { Some(StringFunctions::new(k, STRING_DEPTH)?) } else { None };
        Ok(Context { params: cfg.params, seed: cfg.seed, q, strings })
    }
}

/// Identities reported by a suite at level `k`, with their default thresholds.
pub fn identities(id: SuiteId, k: usize) -> Vec<(&'static str, f64)> {
    match id {
        SuiteId::Ybe => vertex::YBE.to_vec(),
        SuiteId::Unitarity => vertex::UNITARITY.to_vec(),
        SuiteId::Crossing => vertex::CROSSING.to_vec(),
        SuiteId::FaceYbe => face::FACE.to_vec(),
        SuiteId::VertexFace => face::VERTEX_FACE.to_vec(),
        SuiteId::Inversions => face::INVERSIONS.to_vec(),
        SuiteId::Lmatrix => lmatrix::IDENTITIES.to_vec(),
        SuiteId::Characters => characters::identities(k),
        SuiteId::Tail => tail::identities(k),
    }
}

fn sample_fn(id: SuiteId) -> fn(&Context, &mut Draw, usize) -> CoreResult<Vec<Measurement>> {
    match id {
        SuiteId::Ybe => vertex::ybe,
        SuiteId::Unitarity => vertex::unitarity,
        SuiteId::Crossing => vertex::crossing,
        SuiteId::FaceYbe => face::face_ybe,
        SuiteId::VertexFace => face::vertex_face,
        SuiteId::Inversions => face::inversions,
        SuiteId::Lmatrix => lmatrix::sample,
        SuiteId::Characters => characters::sample,
        SuiteId::Tail => tail::sample,
    }
}

/// Evaluates sample `index` of suite `id`.
pub fn eval_sample(id: SuiteId, ctx: &Context, index: usize, tol: Option<f64>) -> Vec<CheckReport> {
    let k = ctx.params.k;
    let f = sample_fn(id);
    let draw = Draw::new(ctx.seed, id, index);
    let suite = id.name();
    let thr = |t: f64| tol.unwrap_or(t);
    match with_resampling(draw, |d| {
        d.note("k", k);
        f(ctx, d, index)
    }) {
        Drawn::Done { value, sample } => value
            .into_iter()
            .map(|m| {
                let mut s = sample.clone();
                s.extend(m.detail);
                let t = if m.fixed_threshold { m.threshold } else { thr(m.threshold) };
                let mut rec = CheckReport::measured(suite, m.identity, index, s, m.residual, t);
                if let Some(r) = m.reason {
                    rec = rec.with_reason(r);
                }
                match m.outside {
                    Some(o) => rec.demote_failure(o),
                    None => rec,
                }
            })
            .collect(),
        Drawn::Singular { reason, sample } => identities(id, k)
            .into_iter()
            .map(|(name, t)| CheckReport::skipped(suite, name, index, sample.clone(), thr(t), reason.clone()))
            .collect(),
        Drawn::Failed { error, sample } => identities(id, k)
            .into_iter()
            .map(|(name, t)| CheckReport::errored(suite, name, index, sample.clone(), thr(t), error.to_string()))
            .collect(),
    }
}

/// All samples of one suite, evaluated in parallel, in sample order.
pub fn run_suite(id: SuiteId, ctx: &Context, samples: usize, tol: Option<f64>) -> Vec<CheckReport> {
    let per: Vec<Vec<CheckReport>> = (0..samples).into_par_iter().map(|i| eval_sample(id, ctx, i, tol)).collect();
    per.into_iter().flatten().collect()
}

/// Threshold by level for the vanishing checks.
pub fn vanishing_threshold(k: usize) -> f64 {
    match k {
        1 => 1e-8,
        2 => 1e-7,
        _ => 1e-6,
    }
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel(a: fusion_core::C64, b: fusion_core::C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

