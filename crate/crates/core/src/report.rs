//! JSON and CSV renderings of verification and identity runs.
//!
//! Big integers are written as decimal strings. JSON output is canonical
//! (pretty-printed, fixed field order, trailing newline) so a parsed report
//! re-serializes byte for byte.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::bounds::TheoremId;
use crate::error::{Error, Result};
use crate::identities::{IdentityCheckResult, IdentityRanges};
use crate::verifier::{
    BoundValue, ClaimRecord, GridSpec, LogBinomialComparison, RecordParams, Summary, Verdict,
};
use crate::{ExactInt, PAdicOrder};

/// Serde adapter: `BigInt` as a decimal string.
pub mod decimal {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::ExactInt;

    pub fn serialize<S: Serializer>(v: &ExactInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
    }
}

/// Serde adapter: `Option<BigInt>` as a decimal string or null.
pub mod decimal_opt {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::ExactInt;

    pub fn serialize<S: Serializer>(v: &Option<ExactInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ExactInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                s.parse()
                    .map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
            })
            .transpose()
    }
}

/// Seconds since the Unix epoch, or `None` when timestamps are suppressed.
pub fn timestamp(enabled: bool) -> Option<String> {
    enabled.then(|| {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("unix:{secs}")
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub theorem_id: TheoremId,
    pub grid: GridSpec,
    pub timestamp: Option<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub run: RunInfo,
    pub records: Vec<ClaimRecord>,
    pub summary: Summary,
}

fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        records_to_csv(&self.records)
    }
}

const CLAIM_COLUMNS: [&str; 10] = [
    "theorem_id",
    "params",
    "sum",
    "ord",
    "bound",
    "verdict",
    "margin",
    "lhs",
    "rhs",
    "note",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// One row per record; empty cells stand for absent values.
pub fn records_to_csv(records: &[ClaimRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CLAIM_COLUMNS)?;
    for r in records {
        let bound = match &r.bound {
            Some(BoundValue::Exponent(e)) => e.to_string(),
            Some(BoundValue::Marker(m)) => m.clone(),
            None => String::new(),
        };
        w.write_record([
            r.theorem_id.name().to_string(),
            r.params.to_compact(),
            opt(&r.sum),
            opt(&r.ord),
            bound,
            r.verdict.name().to_string(),
            opt(&r.margin),
            opt(&r.comparison.as_ref().map(|c| c.lhs.clone())),
            opt(&r.comparison.as_ref().map(|c| c.rhs.clone())),
            opt(&r.note),
        ])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::param(format!("csv flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_cell<T: std::str::FromStr>(cell: &str, what: &str) -> Result<Option<T>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|_| Error::param(format!("bad {what} cell {cell:?}")))
}

/// Inverse of [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<ClaimRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let cell = |i: usize| row.get(i).unwrap_or("");
        let verdict: Verdict = serde_json::from_value(serde_json::Value::String(cell(5).into()))?;
        let ord = match cell(3) {
            "" => None,
            "inf" => Some(PAdicOrder::Infinite),
            s => Some(PAdicOrder::Finite(
                s.parse()
                    .map_err(|_| Error::param(format!("bad ord cell {s:?}")))?,
            )),
        };
        let bound = match cell(4) {
            "" => None,
            s => Some(match s.parse::<i64>() {
                Ok(e) => BoundValue::Exponent(e),
                Err(_) => BoundValue::Marker(s.to_string()),
            }),
        };
        let lhs: Option<ExactInt> = parse_cell(cell(7), "lhs")?;
        let rhs: Option<ExactInt> = parse_cell(cell(8), "rhs")?;
        out.push(ClaimRecord {
            theorem_id: cell(0).parse()?,
            params: RecordParams::from_compact(cell(1))?,
            sum: parse_cell(cell(2), "sum")?,
            ord,
            bound,
            verdict,
            margin: parse_cell(cell(6), "margin")?,
            comparison: lhs
                .zip(rhs)
                .map(|(lhs, rhs)| LogBinomialComparison { lhs, rhs }),
            note: Some(cell(9).to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRunInfo {
    pub identity_id: String,
    pub ranges: IdentityRanges,
    pub timestamp: Option<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<IdentityCheckResult>,
}

impl IdentitySummary {
    pub fn from_results(results: &[IdentityCheckResult]) -> Self {
        let passed = results.iter().filter(|r| r.pass).count() as u64;
        IdentitySummary {
            total: results.len() as u64,
            passed,
            failed: results.len() as u64 - passed,
            first_failure: results.iter().find(|r| !r.pass).cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub run: IdentityRunInfo,
    pub results: Vec<IdentityCheckResult>,
    pub summary: IdentitySummary,
}

impl IdentityReport {
    pub fn to_json(&self) -> Result<String> {
        canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["identity_id", "params", "pass", "witness"])?;
        for r in &self.results {
            w.write_record([
                r.identity_id.name(),
                &r.params,
                if r.pass { "true" } else { "false" },
                r.witness.as_deref().unwrap_or(""),
            ])?;
        }
        finish_csv(w)
    }
}
