//! Line-delimited JSON catalog of computed fields, keyed by defining
//! polynomial. Appends are cheap; compaction folds records per key.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serial::big;
use crate::torsion::{ClassGroupSummary, SurvivalReport, TorsionCertificate};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub schema_version: u32,
    /// Defining polynomial, descending integer coefficients.
    pub key: String,
    #[serde(with = "big")]
    pub field_disc: BigInt,
    pub class_group: Option<ClassGroupSummary>,
    pub certificates: Vec<TorsionCertificate>,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CatalogRecord {
    fn same_content(&self, o: &CatalogRecord) -> bool {
        CatalogRecord { timestamp: 0, ..self.clone() } == CatalogRecord { timestamp: 0, ..o.clone() }
    }
}

/// One record per field met in the report.
pub fn records_from_report(report: &SurvivalReport, timestamp: u64) -> Vec<CatalogRecord> {
    let mut out: Vec<CatalogRecord> = Vec::new();
    for row in &report.rows {
        let (Some(key), Some(disc)) = (&row.field, &row.field_disc) else {
            continue;
        };
        out.push(CatalogRecord {
            schema_version: SCHEMA_VERSION,
            key: key.clone(),
            field_disc: disc.clone(),
            class_group: row.class_group.clone(),
            certificates: row.certificates.clone(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp,
        });
    }
    compact(out)
}

fn cert_key(c: &TorsionCertificate) -> (String, BigInt, BigInt) {
    (c.curve.clone(), c.t.clone(), c.q.clone())
}

/// Fold `new` into `old`: later certificates replace earlier ones with the
/// same (curve, t, q); the old timestamp survives when nothing changed.
pub fn upsert(old: &CatalogRecord, new: &CatalogRecord) -> CatalogRecord {
    let mut certs: BTreeMap<(String, BigInt, BigInt), TorsionCertificate> = BTreeMap::new();
    for c in old.certificates.iter().chain(&new.certificates) {
        certs.insert(cert_key(c), c.clone());
    }
    let merged = CatalogRecord {
        schema_version: new.schema_version,
        key: new.key.clone(),
        field_disc: new.field_disc.clone(),
        class_group: new.class_group.clone().or_else(|| old.class_group.clone()),
        certificates: certs.into_values().collect(),
        tool_version: new.tool_version.clone(),
        timestamp: new.timestamp,
    };
    if merged.same_content(old) {
        old.clone()
    } else {
        merged
    }
}

/// One record per key, sorted by key; records for a key are upserted in
/// input order.
pub fn compact(records: Vec<CatalogRecord>) -> Vec<CatalogRecord> {
    let mut by_key: BTreeMap<String, CatalogRecord> = BTreeMap::new();
    for r in records {
        let merged = match by_key.get(&r.key) {
            Some(old) => upsert(old, &r),
            None => upsert(&r, &r),
        };
        by_key.insert(merged.key.clone(), merged);
    }
    by_key.into_values().collect()
}

fn io(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {}", path.display(), e))
}

pub fn to_line(r: &CatalogRecord) -> String {
    serde_json::to_string(r).expect("serializable")
}

pub fn load(path: &Path) -> Result<Vec<CatalogRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                column: e.column(),
                message: format!("catalog {}: {}", path.display(), e),
            })
        })
        .collect()
}

pub fn append(path: &Path, records: &[CatalogRecord]) -> Result<()> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io(path, e))?;
    for r in records {
        writeln!(f, "{}", to_line(r)).map_err(|e| io(path, e))?;
    }
    Ok(())
}

/// Rewrite the file with one record per key.
pub fn compact_file(path: &Path) -> Result<usize> {
    let records = compact(load(path)?);
    let mut text = String::new();
    for r in &records {
        text.push_str(&to_line(r));
        text.push('\n');
    }
    let tmp = path.with_extension("compacting");
    fs::write(&tmp, text).map_err(|e| io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io(path, e))?;
    Ok(records.len())
}
