//! Run configuration: a flat `key = value` file with optional `[suite]`
//! sections, overridden by command-line flags.
//!
//! ```text
//! # baseline
//! x = 0.3
//! r = 5.0
//! k = 1
//! suites = ybe, crossing
//! samples = 20
//! seed = 7
//!
//! [crossing]
//! samples = 40
//! tol = 1e-9
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use fusion_core::ModelParams;

use crate::error::{HarnessError, Result};

/// Environment variable naming the config file read when `--config` is absent.
pub const CONFIG_ENV: &str = "FUSION_CONFIG";

pub const DEFAULT_X: f64 = 0.3;
pub const DEFAULT_R: f64 = 5.0;
pub const DEFAULT_K: usize = 1;
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteId {
    Ybe,
    Unitarity,
    Crossing,
    FaceYbe,
    VertexFace,
    Inversions,
    Lmatrix,
    Characters,
    Tail,
}

impl SuiteId {
    pub const ALL: [SuiteId; 9] = [
        SuiteId::Ybe,
        SuiteId::Unitarity,
        SuiteId::Crossing,
        SuiteId::FaceYbe,
        SuiteId::VertexFace,
        SuiteId::Inversions,
        SuiteId::Lmatrix,
        SuiteId::Characters,
        SuiteId::Tail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Ybe => "ybe",
            SuiteId::Unitarity => "unitarity",
            SuiteId::Crossing => "crossing",
            SuiteId::FaceYbe => "face-ybe",
            SuiteId::VertexFace => "vertex-face",
            SuiteId::Inversions => "inversions",
            SuiteId::Lmatrix => "lmatrix",
            SuiteId::Characters => "characters",
            SuiteId::Tail => "tail",
        }
    }

    /// Stable stream id for the sampler.
    pub fn ordinal(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite id `{s}`")))
    }
}

/// Parses a comma separated suite list. `all` expands to every suite.
/// The result is deduplicated and in canonical order.
pub fn parse_suite_list(s: &str) -> Result<Vec<SuiteId>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if item == "all" {
            out.extend(SuiteId::ALL);
        } else {
            out.push(item.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(HarnessError::Config(format!("unknown format `{s}` (json | csv)"))),
        }
    }
}

/// Values read from a config file, before merging with flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub x: Option<f64>,
    pub r: Option<f64>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub suites: Option<Vec<SuiteId>>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub per_suite: BTreeMap<SuiteId, SuiteOverride>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteOverride {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse().map_err(|_| HarnessError::Config(format!("line {line}: bad value `{v}` for `{key}`")))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        let mut section: Option<SuiteId> = None;
        let mut seen: Vec<(Option<SuiteId>, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let id: SuiteId = name
                    .trim()
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("line {line}: unknown suite section `{name}`")))?;
                section = Some(id);
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| HarnessError::Config(format!("line {line}: expected `key = value`")))?;
            if seen.contains(&(section, key.to_string())) {
                return Err(HarnessError::Config(format!("line {line}: duplicate key `{key}`")));
            }
            seen.push((section, key.to_string()));
            match section {
                Some(id) => {
                    let o = cfg.per_suite.entry(id).or_default();
                    match key {
                        "samples" => o.samples = Some(parse_value(key, value, line)?),
                        "tol" => o.tol = Some(parse_value(key, value, line)?),
                        _ => return Err(HarnessError::Config(format!("line {line}: unknown key `{key}` in [{id}]"))),
                    }
                }
                None => match key {
                    "x" => cfg.x = Some(parse_value(key, value, line)?),
                    "r" => cfg.r = Some(parse_value(key, value, line)?),
                    "k" => cfg.k = Some(parse_value(key, value, line)?),
                    "samples" => cfg.samples = Some(parse_value(key, value, line)?),
                    "seed" => cfg.seed = Some(parse_value(key, value, line)?),
                    "tol" => cfg.tol = Some(parse_value(key, value, line)?),
                    "suites" | "suite" => cfg.suites = Some(parse_suite_list(value)?),
                    "format" => cfg.format = Some(value.parse()?),
                    "out" => cfg.out = Some(PathBuf::from(value)),
                    _ => return Err(HarnessError::Config(format!("line {line}: unknown key `{key}`"))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Flag values; `None` means "not given on the command line".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub x: Option<f64>,
    pub r: Option<f64>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub suites: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub params: ModelParams,
    pub suites: Vec<SuiteId>,
    pub samples: BTreeMap<SuiteId, usize>,
    pub seed: u64,
    /// Threshold overrides. Suites absent from the map use built-in thresholds.
    pub tol: BTreeMap<SuiteId, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl SuiteConfig {
    /// Merges `file` (if any) under `flags` and validates the result.
    pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<Self> {
        let empty = ConfigFile::default();
        let file = file.unwrap_or(&empty);
        let x = flags.x.or(file.x).unwrap_or(DEFAULT_X);
        let r = flags.r.or(file.r).unwrap_or(DEFAULT_R);
        let k = flags.k.or(file.k).unwrap_or(DEFAULT_K);
        let params = ModelParams::new(x, r, k).map_err(|e| HarnessError::Config(e.to_string()))?;
        let suites = match &flags.suites {
            Some(s) => parse_suite_list(s)?,
            None => file.suites.clone().unwrap_or_default(),
        };
        if suites.is_empty() {
            return Err(HarnessError::Config("empty suite list".into()));
        }
        let base_samples = flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        let mut samples = BTreeMap::new();
        let mut tol = BTreeMap::new();
        for &id in &suites {
            let o = file.per_suite.get(&id).copied().unwrap_or_default();
            // A flag beats the section, which beats the global file value.
            let n = flags.samples.or(o.samples).unwrap_or(base_samples);
            if n == 0 {
                return Err(HarnessError::Config(format!("samples for {id} must be at least 1")));
            }
            samples.insert(id, n);
            if let Some(t) = flags.tol.or(o.tol).or(file.tol) {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(HarnessError::Config(format!("tolerance for {id} must be positive")));
                }
                tol.insert(id, t);
            }
        }
        Ok(SuiteConfig {
            params,
            suites,
            samples,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            tol,
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.clone().or_else(|| file.out.clone()),
        })
    }
}
