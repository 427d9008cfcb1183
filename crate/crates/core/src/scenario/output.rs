//! CSV and JSON result files.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{MetricKind, Scheme};

use super::config::{ScenarioConfig, SweepKind, SweepSpec};
use super::placement::PlacedScenario;

pub const CSV_HEADER: &str = "sweep_kind,swept_value,scheme,metric,value_db,seed,run_index";

/// One metric sample; `run_index = None` marks the mean over runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub sweep_kind: SweepKind,
    pub swept_value: f64,
    pub scheme: Scheme,
    pub metric: MetricKind,
    /// dB, or dBm for powers.
    pub value_db: f64,
    pub seed: u64,
    pub run_index: Option<usize>,
}

impl MetricRow {
    fn sort_key(&self, other: &Self) -> Ordering {
        self.swept_value
            .total_cmp(&other.swept_value)
            .then(self.scheme.cmp(&other.scheme))
            // means after the individual runs
            .then(match (self.run_index, other.run_index) {
                (Some(a), Some(b)) => a.cmp(&b),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
            .then(self.metric.cmp(&other.metric))
    }
}

/// Sorts by (swept value, scheme, run index, metric).
pub fn sort_rows(rows: &mut [MetricRow]) {
    rows.sort_by(|a, b| a.sort_key(b));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything needed to reproduce an artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub software_version: String,
    pub root_seed: u64,
    pub sweep: SweepSpec,
    pub config: ScenarioConfig,
    #[serde(default)]
    pub placements: Vec<PlacedScenario>,
}

impl RunMetadata {
    pub fn new(config: &ScenarioConfig, sweep: SweepSpec, placements: Vec<PlacedScenario>) -> Self {
        Self {
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            root_seed: config.seed,
            sweep,
            config: config.clone(),
            placements,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub metadata: RunMetadata,
    pub rows: Vec<MetricRow>,
}

/// `%.9g`-style formatting.
pub fn format_sig(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv(rows: &[MetricRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let run = r.run_index.map_or_else(|| "mean".to_string(), |i| i.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.sweep_kind.as_str(),
            format_sig(r.swept_value, 9),
            r.scheme.as_str(),
            r.metric.as_str(),
            format_sig(r.value_db, 9),
            r.seed,
            run
        );
    }
    out
}

pub fn to_json(rows: &[MetricRow], metadata: &RunMetadata) -> Result<String> {
    let doc = ResultDocument {
        metadata: metadata.clone(),
        rows: rows.to_vec(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sidecar holding the resolved configuration next to a CSV file.
pub fn metadata_path(csv: &Path) -> std::path::PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    s.into()
}

/// Writes `rows` (sorted) to `path`. CSV output gets a `<path>.meta.json` sidecar.
pub fn emit_results(rows: &[MetricRow], format: OutputFormat, path: &Path, metadata: &RunMetadata) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Precondition("no result rows to write".into()));
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    match format {
        OutputFormat::Csv => {
            write_file(path, &to_csv(&sorted))?;
            write_file(&metadata_path(path), &serde_json::to_string_pretty(metadata)?)
        }
        OutputFormat::Json => write_file(path, &to_json(&sorted, metadata)?),
    }
}
