//! Report records, header and their JSON / CSV renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedSingular,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedSingular => "skipped-singular",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One identity evaluated at one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub identity: String,
    pub sample_index: usize,
    /// Every input of the sample, formatted as text.
    pub sample: BTreeMap<String, String>,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckReport {
    /// Pass iff `residual <= threshold`. A NaN residual fails.
    pub fn measured(suite: &str, identity: &str, sample_index: usize, sample: BTreeMap<String, String>, residual: f64, threshold: f64) -> Self {
        let status = if residual <= threshold { Status::Pass } else { Status::Fail };
        CheckReport {
            suite: suite.into(),
            identity: identity.into(),
            sample_index,
            sample,
            residual: Some(residual),
            threshold,
            status,
            reason: None,
        }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    /// A measured value outside the range where the identity is claimed.
    /// It still passes if the residual happens to be small.
    pub fn demote_failure(mut self, reason: impl Into<String>) -> Self {
        if self.status == Status::Fail {
            self.status = Status::Inconclusive;
            self.reason = Some(reason.into());
        }
        self
    }

    pub fn skipped(suite: &str, identity: &str, sample_index: usize, sample: BTreeMap<String, String>, threshold: f64, reason: String) -> Self {
        CheckReport {
            suite: suite.into(),
            identity: identity.into(),
            sample_index,
            sample,
            residual: None,
            threshold,
            status: Status::SkippedSingular,
            reason: Some(reason),
        }
    }

    pub fn errored(suite: &str, identity: &str, sample_index: usize, sample: BTreeMap<String, String>, threshold: f64, reason: String) -> Self {
        CheckReport { status: Status::Fail, ..Self::skipped(suite, identity, sample_index, sample, threshold, reason) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsRecord {
    pub x: f64,
    pub r: f64,
    pub k: usize,
    pub series_cutoff: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub params: ParamsRecord,
    pub seed: u64,
    pub suites: Vec<String>,
    pub samples: BTreeMap<String, usize>,
    pub tolerance_overrides: BTreeMap<String, f64>,
    /// Convention choices and the measurements that fixed them.
    pub calibrations: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped_singular: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub header: Header,
    pub records: Vec<CheckReport>,
}

impl Report {
    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for r in &self.records {
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::SkippedSingular => c.skipped_singular += 1,
                Status::Inconclusive => c.inconclusive += 1,
            }
        }
        c
    }

    /// `0` when nothing failed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.counts().fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Header as `# key: value` comment lines, then one row per record.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let h = &self.header;
        writeln!(w, "# schema_version: {}", h.schema_version)?;
        writeln!(w, "# tool: {} {}", h.tool, h.version)?;
        writeln!(w, "# params: x={} r={} k={} series_cutoff={}", h.params.x, h.params.r, h.params.k, h.params.series_cutoff)?;
        writeln!(w, "# seed: {}", h.seed)?;
        writeln!(w, "# suites: {}", h.suites.join(","))?;
        for (k, v) in &h.calibrations {
            writeln!(w, "# calibration {k}: {v}")?;
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["suite", "identity", "sample_index", "status", "residual", "threshold", "sample", "reason"])?;
        for r in &self.records {
            let sample: Vec<String> = r.sample.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.write_record([
                r.suite.clone(),
                r.identity.clone(),
                r.sample_index.to_string(),
                r.status.as_str().to_string(),
                r.residual.map(|v| format!("{v:e}")).unwrap_or_default(),
                format!("{:e}", r.threshold),
                sample.join(";"),
                r.reason.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn render(&self, format: crate::config::Format) -> Result<Vec<u8>> {
        match format {
            crate::config::Format::Json => Ok(self.to_json()?.into_bytes()),
            crate::config::Format::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                Ok(buf)
            }
        }
    }
}
