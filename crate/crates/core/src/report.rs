//! Verification records and report emission.
//!
//! Every lemma/theorem instance check across the crate produces one
//! [`VerificationRecord`]. The record orients every inequality as
//! `lhs <= rhs` with `margin = rhs - lhs`; a pass or fail within
//! `1e-9 * max(1, |rhs|)` of equality is downgraded to `marginal` so that
//! floating-point-sensitive inequalities stay auditable.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

/// Relative width of the band around equality that is reported as marginal.
pub const MARGINAL_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Marginal,
    Fail,
    HypothesesUnmet,
    Singular,
    Indeterminate,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Marginal => "marginal",
            Status::Fail => "fail",
            Status::HypothesesUnmet => "hypotheses-unmet",
            Status::Singular => "singular",
            Status::Indeterminate => "indeterminate",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One lemma/theorem instance check: inputs, both sides, margin, outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub statement: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub status: Status,
    pub runtime_ms: u64,
}

impl VerificationRecord {
    /// Classify `lhs <= rhs` with the marginal band around equality.
    pub fn from_bounds(
        statement: &str,
        params: BTreeMap<String, String>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let margin = rhs - lhs;
        let band = MARGINAL_BAND * rhs.abs().max(1.0);
        let status = if margin >= band {
            Status::Pass
        } else if margin < -band {
            Status::Fail
        } else {
            Status::Marginal
        };
        VerificationRecord {
            statement: statement.to_string(),
            params,
            lhs: Some(lhs),
            rhs: Some(rhs),
            margin: Some(margin),
            status,
            runtime_ms: 0,
        }
    }

    /// For checks decided in exact arithmetic: `holds` is trustworthy even at
    /// zero margin, so no marginal band applies.
    pub fn from_exact(
        statement: &str,
        params: BTreeMap<String, String>,
        lhs: f64,
        rhs: f64,
        holds: bool,
    ) -> Self {
        VerificationRecord {
            statement: statement.to_string(),
            params,
            lhs: Some(lhs),
            rhs: Some(rhs),
            margin: Some(rhs - lhs),
            status: if holds { Status::Pass } else { Status::Fail },
            runtime_ms: 0,
        }
    }

    pub fn hypotheses_unmet(
        statement: &str,
        mut params: BTreeMap<String, String>,
        violated: &str,
    ) -> Self {
        params.insert("unmet_hypothesis".into(), violated.into());
        VerificationRecord {
            statement: statement.to_string(),
            params,
            lhs: None,
            rhs: None,
            margin: None,
            status: Status::HypothesesUnmet,
            runtime_ms: 0,
        }
    }

    pub fn singular(statement: &str, mut params: BTreeMap<String, String>, detail: &str) -> Self {
        params.insert("singularity".into(), detail.into());
        VerificationRecord {
            statement: statement.to_string(),
            params,
            lhs: None,
            rhs: None,
            margin: None,
            status: Status::Singular,
            runtime_ms: 0,
        }
    }

    pub fn indeterminate(
        statement: &str,
        mut params: BTreeMap<String, String>,
        detail: &str,
    ) -> Self {
        params.insert("indeterminate".into(), detail.into());
        VerificationRecord {
            statement: statement.to_string(),
            params,
            lhs: None,
            rhs: None,
            margin: None,
            status: Status::Indeterminate,
            runtime_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Marginal)
    }

    /// Canonical params encoding, also the tie-break sort key.
    pub fn params_key(&self) -> String {
        params_json(&self.params)
    }
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}` (csv|json)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Format a real to 17 significant digits ('.' decimal separator); this
/// round-trips any finite f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Stable record ordering: statement id, then lexicographic params.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| {
        (a.statement.as_str(), a.params_key()).cmp(&(b.statement.as_str(), b.params_key()))
    });
}

fn params_json(params: &BTreeMap<String, String>) -> String {
    // BTreeMap keeps key order deterministic.
    serde_json::to_string(params).expect("string map serializes")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn opt_g17(x: Option<f64>) -> String {
    x.map(fmt_g17).unwrap_or_default()
}

/// CSV emission: header `statement,params,lhs,rhs,margin,status,runtime_ms`,
/// params JSON-encoded in one column, reals at 17 significant digits.
/// On an i/o failure a partial-output marker is appended best-effort before
/// the error propagates.
pub fn emit_csv(records: &[VerificationRecord], w: &mut dyn Write) -> Result<(), ReportError> {
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "statement,params,lhs,rhs,margin,status,runtime_ms")?;
        for r in records {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                csv_quote(&r.statement),
                csv_quote(&r.params_key()),
                opt_g17(r.lhs),
                opt_g17(r.rhs),
                opt_g17(r.margin),
                r.status,
                r.runtime_ms
            )?;
        }
        Ok(())
    };
    if let Err(e) = run() {
        let _ = writeln!(w, "#-- partial output: aborted ({e}) --");
        return Err(e.into());
    }
    Ok(())
}

struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// JSON emission: array of record objects, reals at 17 significant digits
/// (exact f64 round-trip). Same partial-output contract as [`emit_csv`].
pub fn emit_json(records: &[VerificationRecord], w: &mut dyn Write) -> Result<(), ReportError> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *w, G17Formatter);
    if let Err(e) = records.serialize(&mut ser) {
        let _ = writeln!(w, "\n#-- partial output: aborted ({e}) --");
        return Err(e.into());
    }
    writeln!(w)?;
    Ok(())
}

/// Parse a JSON report back; `parse_json(emit_json(x)) == x`.
pub fn parse_json(r: &mut dyn Read) -> Result<Vec<VerificationRecord>, ReportError> {
    Ok(serde_json::from_reader(r)?)
}

pub fn emit(
    records: &[VerificationRecord],
    format: ReportFormat,
    w: &mut dyn Write,
) -> Result<(), ReportError> {
    match format {
        ReportFormat::Csv => emit_csv(records, w),
        ReportFormat::Json => emit_json(records, w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn status_band() {
        let r = VerificationRecord::from_bounds("x", params(&[]), 1.0, 2.0);
        assert_eq!(r.status, Status::Pass);
        let r = VerificationRecord::from_bounds("x", params(&[]), 2.0, 2.0 - 1e-12);
        assert_eq!(r.status, Status::Marginal);
        let r = VerificationRecord::from_bounds("x", params(&[]), 2.0 + 1e-12, 2.0);
        assert_eq!(r.status, Status::Marginal);
        let r = VerificationRecord::from_bounds("x", params(&[]), 3.0, 2.0);
        assert_eq!(r.status, Status::Fail);
        assert!(r.margin.unwrap() < -MARGINAL_BAND * 2.0f64.abs().max(1.0));
    }

    #[test]
    fn csv_header_only_when_empty() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "statement,params,lhs,rhs,margin,status,runtime_ms\n");
    }

    #[test]
    fn csv_line_count() {
        let recs: Vec<_> = (0..3)
            .map(|i| {
                VerificationRecord::from_bounds(
                    "s",
                    params(&[("i", &i.to_string())]),
                    1.0,
                    2.0,
                )
            })
            .collect();
        let mut buf = Vec::new();
        emit_csv(&recs, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }

    #[test]
    fn json_round_trip() {
        let mut recs = vec![
            VerificationRecord::from_bounds(
                "thm-1.1",
                params(&[("q", "101"), ("r", "2")]),
                0.12345678901234567,
                1e300,
            ),
            VerificationRecord::hypotheses_unmet("fs-bound", params(&[("q", "39")]), "q >= 40"),
        ];
        recs[0].runtime_ms = 0;
        let mut buf = Vec::new();
        emit_json(&recs, &mut buf).unwrap();
        let parsed = parse_json(&mut buf.as_slice()).unwrap();
        assert_eq!(parsed, recs);
    }

    #[test]
    fn sorting_is_by_statement_then_params() {
        let mut recs = vec![
            VerificationRecord::from_bounds("b", params(&[("q", "2")]), 0.0, 1.0),
            VerificationRecord::from_bounds("a", params(&[("q", "9")]), 0.0, 1.0),
            VerificationRecord::from_bounds("b", params(&[("q", "1")]), 0.0, 1.0),
        ];
        sort_records(&mut recs);
        assert_eq!(recs[0].statement, "a");
        assert_eq!(recs[1].params["q"], "1");
    }
}
