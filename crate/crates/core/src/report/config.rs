//! `key = value` scan configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;

use crate::arith::{FactorEffort, Poly};
use crate::class_group::RelationConfig;
use crate::curve::{validate_curve, SuperellipticCurve};
use crate::error::{Error, Result};
use crate::torsion::TracerConfig;

pub const KEYS: &[&str] = &[
    "curve.m",
    "curve.f",
    "scan.range",
    "scan.seed",
    "budget.factor",
    "budget.principality",
    "budget.relations",
    "out.csv",
    "out.catalog",
    "out.report",
];

pub const DEFAULT_PRINCIPALITY_RADIUS: u64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub m: u32,
    /// Descending coefficients of f.
    pub f: Poly,
    pub lo: BigInt,
    pub hi: BigInt,
    pub seed: u64,
    /// `None` keeps the default factoring effort.
    pub factor_budget: Option<u64>,
    pub principality_radius: u64,
    pub relation_budget: Option<u64>,
    pub csv: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl ScanConfig {
    pub fn curve(&self) -> Result<SuperellipticCurve> {
        validate_curve(self.m, self.f.clone())
    }

    pub fn tracer(&self) -> TracerConfig {
        let factor = match self.factor_budget {
            Some(b) => FactorEffort::with_budget(b, self.seed),
            None => FactorEffort {
                seed: self.seed,
                ..FactorEffort::default()
            },
        };
        let mut relations = match self.relation_budget {
            Some(b) => RelationConfig::with_budget(b),
            None => RelationConfig::default(),
        };
        relations.seed = self.seed;
        TracerConfig {
            factor,
            principality_radius: self.principality_radius,
            relations,
        }
    }

    pub fn range_size(&self) -> BigInt {
        &self.hi - &self.lo + 1
    }
}

/// One `key = value` assignment; `line == 0` marks a command-line override.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    pub key_col: usize,
    pub value_col: usize,
}

impl Entry {
    pub fn flag(key: &str, value: &str) -> Self {
        Entry {
            key: key.to_string(),
            value: value.to_string(),
            line: 0,
            key_col: 1,
            value_col: 1,
        }
    }
}

fn err(line: usize, column: usize, message: String) -> Error {
    Error::Parse {
        line,
        column,
        message,
    }
}

/// Split text into entries; `#` starts a comment.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let eq = body
            .find('=')
            .ok_or_else(|| err(line, 1, "expected `key = value`".to_string()))?;
        let key_part = &body[..eq];
        let value_part = &body[eq + 1..];
        let key = key_part.trim();
        let key_col = key_part.len() - key_part.trim_start().len() + 1;
        let value = value_part.trim();
        let value_col = eq + 2 + (value_part.len() - value_part.trim_start().len());
        if key.is_empty() {
            return Err(err(line, key_col, "missing key".to_string()));
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
            key_col,
            value_col,
        });
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<ScanConfig> {
    build_config(&parse_entries(text)?, &[])
}

fn parse_u64(e: &Entry, positive: bool) -> Result<u64> {
    let v: u64 = e
        .value
        .parse()
        .map_err(|_| err(e.line, e.value_col, format!("{} must be a nonnegative integer, got {:?}", e.key, e.value)))?;
    if positive && v == 0 {
        return Err(err(e.line, e.value_col, format!("{} must be positive", e.key)));
    }
    Ok(v)
}

fn parse_range(e: &Entry) -> Result<(BigInt, BigInt)> {
    let bad = || err(e.line, e.value_col, format!("expected `lo..hi`, got {:?}", e.value));
    let (a, b) = e.value.split_once("..").ok_or_else(bad)?;
    let lo: BigInt = a.trim().parse().map_err(|_| bad())?;
    let hi: BigInt = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(err(e.line, e.value_col, format!("range {}..{} is empty", lo, hi)));
    }
    Ok((lo, hi))
}

/// Entries from a file, then overrides; a key may appear once per source.
pub fn build_config(entries: &[Entry], overrides: &[Entry]) -> Result<ScanConfig> {
    let mut chosen: Vec<&Entry> = Vec::new();
    for source in [entries, overrides] {
        let mut seen: Vec<&str> = Vec::new();
        for e in source {
            if !KEYS.contains(&e.key.as_str()) {
                return Err(err(e.line, e.key_col, format!("unknown key {:?}", e.key)));
            }
            if seen.contains(&e.key.as_str()) {
                return Err(err(e.line, e.key_col, format!("duplicate key {:?}", e.key)));
            }
            seen.push(&e.key);
            chosen.retain(|c| c.key != e.key);
            chosen.push(e);
        }
    }
    let get = |k: &str| chosen.iter().copied().find(|e| e.key == k);
    let last_line = entries.iter().map(|e| e.line).max().unwrap_or(0);
    let missing = |k: &str| err(last_line + 1, 1, format!("missing required key {:?}", k));

    let me = get("curve.m").ok_or_else(|| missing("curve.m"))?;
    let m: u32 = me
        .value
        .parse()
        .map_err(|_| err(me.line, me.value_col, format!("curve.m must be an integer, got {:?}", me.value)))?;
    if m < 2 {
        return Err(err(me.line, me.value_col, format!("curve.m = {} must be at least 2", m)));
    }
    let fe = get("curve.f").ok_or_else(|| missing("curve.f"))?;
    let f = Poly::parse_descending(&fe.value).map_err(|msg| err(fe.line, fe.value_col, msg))?;
    validate_curve(m, f.clone()).map_err(|e| err(fe.line, fe.value_col, e.to_string()))?;
    let re = get("scan.range").ok_or_else(|| missing("scan.range"))?;
    let (lo, hi) = parse_range(re)?;

    let opt = |k: &str, positive: bool| get(k).map(|e| parse_u64(e, positive)).transpose();
    let path = |k: &str| get(k).map(|e| PathBuf::from(&e.value));
    Ok(ScanConfig {
        m,
        f,
        lo,
        hi,
        seed: opt("scan.seed", false)?.unwrap_or(0),
        factor_budget: opt("budget.factor", true)?,
        principality_radius: opt("budget.principality", true)?.unwrap_or(DEFAULT_PRINCIPALITY_RADIUS),
        relation_budget: opt("budget.relations", true)?,
        csv: path("out.csv"),
        catalog: path("out.catalog"),
        report: path("out.report"),
    })
}

/// Canonical text; `parse_config(&render(c)) == c`.
pub fn render(c: &ScanConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "curve.m = {}", c.m);
    let _ = writeln!(s, "curve.f = {}", c.f.to_descending_text());
    let _ = writeln!(s, "scan.range = {}..{}", c.lo, c.hi);
    if c.seed != 0 {
        let _ = writeln!(s, "scan.seed = {}", c.seed);
    }
    if let Some(b) = c.factor_budget {
        let _ = writeln!(s, "budget.factor = {}", b);
    }
    if c.principality_radius != DEFAULT_PRINCIPALITY_RADIUS {
        let _ = writeln!(s, "budget.principality = {}", c.principality_radius);
    }
    if let Some(b) = c.relation_budget {
        let _ = writeln!(s, "budget.relations = {}", b);
    }
    for (k, p) in [("out.csv", &c.csv), ("out.catalog", &c.catalog), ("out.report", &c.report)] {
        if let Some(p) = p {
            let _ = writeln!(s, "{} = {}", k, p.display());
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "curve.m = 5\ncurve.f = 1,0,0,0,0,-31\nscan.range = 2..10\n";

    fn parse_error(text: &str) -> (usize, usize, String) {
        match parse_config(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {:?}", other),
        }
    }

    #[test]
    fn defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.m, 5);
        assert_eq!(c.lo, BigInt::from(2));
        assert_eq!(c.principality_radius, DEFAULT_PRINCIPALITY_RADIUS);
        assert_eq!(c.factor_budget, None);
        assert!(c.csv.is_none());
        assert_eq!(parse_config(&render(&c)).unwrap(), c);
    }

    #[test]
    fn rejections() {
        let (l, col, _) = parse_error("curve.m = 1\ncurve.f = 1,0\nscan.range = 0..1");
        assert_eq!((l, col), (1, 11));
        let (l, _, msg) = parse_error("curve.m = 2\ncurve.f = 1,0,1\nscan.range = 3..2");
        assert_eq!(l, 3);
        assert!(msg.contains("empty"));
        let (l, col, msg) = parse_error("curve.m = 2\n  colour = red\n");
        assert_eq!((l, col), (2, 3));
        assert!(msg.contains("unknown key"));
        let (l, col, _) = parse_error("curve.m = 2\ncurve.f = 1,x,1\nscan.range = 0..1");
        assert_eq!((l, col), (2, 11));
        let (_, _, msg) = parse_error("curve.m = 2\ncurve.f = 1,0,1\nscan.range = 0..1\nbudget.factor = 0");
        assert!(msg.contains("positive"));
    }

    #[test]
    fn overrides_replace_file_values() {
        let entries = parse_entries(MINIMAL).unwrap();
        let c = build_config(&entries, &[Entry::flag("scan.range", "3..3"), Entry::flag("scan.seed", "9")]).unwrap();
        assert_eq!((c.lo.clone(), c.hi.clone()), (BigInt::from(3), BigInt::from(3)));
        assert_eq!(c.seed, 9);
        assert_eq!(c.tracer().relations.seed, 9);
    }
}
