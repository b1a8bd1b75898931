//! Configured scans and their sinks: CSV rows, a JSON report, and the field
//! catalog.

pub mod catalog;
pub mod config;

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torsion::{scan, SurvivalReport};

pub use catalog::{CatalogRecord, SCHEMA_VERSION, TOOL_VERSION};
pub use config::{build_config, parse_config, parse_entries, render, Entry, ScanConfig};

pub const CSV_HEADER: [&str; 6] = ["t", "status", "field_disc", "witness_q", "proven_order", "certificate_id"];

/// The JSON report file. `generated_at` is the only field that varies
/// between identical runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: String,
    pub generated_at: u64,
    pub report: SurvivalReport,
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn csv_text(report: &SurvivalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in &report.rows {
        let head = row.headline();
        let t = row.t.to_string();
        let disc = row.field_disc.as_ref().map(|d| d.to_string()).unwrap_or_default();
        let q = head.map(|c| c.q.to_string()).unwrap_or_default();
        let order = head.map(|c| c.order.proven_order.to_string()).unwrap_or_default();
        let id = head.map(|c| c.id()).unwrap_or_default();
        w.write_record([t.as_str(), row.status.as_str(), &disc, &q, &order, &id])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn report_json(doc: &ReportDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
}

pub struct PipelineOutcome {
    pub document: ReportDocument,
    pub records: Vec<CatalogRecord>,
}

impl PipelineOutcome {
    pub fn report(&self) -> &SurvivalReport {
        &self.document.report
    }

    pub fn contract_violations(&self) -> usize {
        self.document.report.counts.violations
    }
}

pub fn run_pipeline(config: &ScanConfig) -> Result<PipelineOutcome> {
    run_pipeline_at(config, now_unix())
}

/// As [`run_pipeline`] with a fixed timestamp.
pub fn run_pipeline_at(config: &ScanConfig, timestamp: u64) -> Result<PipelineOutcome> {
    let curve = config.curve()?;
    let report = scan(&curve, &config.lo, &config.hi, &config.tracer());
    let records = catalog::records_from_report(&report, timestamp);
    let document = ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config: render(config),
        generated_at: timestamp,
        report,
    };
    if let Some(p) = &config.csv {
        write(p, &csv_text(&document.report))?;
    }
    if let Some(p) = &config.report {
        write(p, &report_json(&document))?;
    }
    if let Some(p) = &config.catalog {
        catalog::append(p, &records)?;
        catalog::compact_file(p)?;
    }
    Ok(PipelineOutcome { document, records })
}
