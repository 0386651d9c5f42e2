//! Seeded verification runs over the fusion-core identities, with JSON / CSV
//! reports, value tables and string-function tables.

pub mod calibrate;
pub mod config;
pub mod error;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod tables;

use std::collections::BTreeMap;

use config::SuiteConfig;
use error::Result;
use report::{Header, ParamsRecord, Report, SCHEMA_VERSION};

pub const TOOL: &str = "fusion";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs every selected suite and assembles the report. Records are ordered
/// by suite (canonical order), then sample index, then identity.
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    let ctx = suites::Context::new(cfg)?;
    let mut records = Vec::new();
    for &id in &cfg.suites {
        let n = cfg.samples[&id];
        records.extend(suites::run_suite(id, &ctx, n, cfg.tol.get(&id).copied()));
    }
    let p = &cfg.params;
    let header = Header {
        schema_version: SCHEMA_VERSION,
        tool: TOOL.into(),
        version: VERSION.into(),
        params: ParamsRecord { x: p.x, r: p.r, k: p.k, series_cutoff: p.series_cutoff },
        seed: cfg.seed,
        suites: cfg.suites.iter().map(|s| s.name().to_string()).collect(),
        samples: cfg.samples.iter().map(|(k, v)| (k.name().to_string(), *v)).collect(),
        tolerance_overrides: cfg.tol.iter().map(|(k, v)| (k.name().to_string(), *v)).collect::<BTreeMap<_, _>>(),
        calibrations: calibrate::calibrations(cfg, &ctx),
    };
    Ok(Report { header, records })
}
