//! CSV reports.

use sha2::{Digest, Sha256};

use relaycap::{BoundKind, BoundResult};

pub const BOUNDS_HEADER: &str = "channel,bound,value,converged,card_u,card_v,card_yhat,evaluations,witness,caveat";
pub const SIMULATE_HEADER: &str = "n,rate,p_err,ci,relay_fail,multicode_fail,decode_fail";

/// Hex SHA-256 of the channel file text.
pub fn channel_id(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Six decimals; negative rates are reported as 0.
pub fn format_value(v: f64) -> String {
    let v = if v > 0.0 { v } else { 0.0 };
    format!("{v:.6}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub bound: BoundKind,
    pub value: f64,
    pub converged: bool,
    pub card_u: Option<usize>,
    pub card_v: Option<usize>,
    pub card_yhat: Option<usize>,
    pub evaluations: u64,
    pub witness: Option<String>,
}

impl ReportRow {
    pub fn from_result(r: &BoundResult, witness: Option<String>) -> Self {
        ReportRow {
            bound: r.kind,
            value: r.value,
            converged: r.converged,
            card_u: r.card_u(),
            card_v: r.card_v(),
            card_yhat: r.card_yhat(),
            evaluations: r.evaluations,
            witness,
        }
    }

    /// Upper-bound values at a fixed auxiliary cardinality may fall short of
    /// the true bound.
    pub fn caveat(&self) -> &'static str {
        if self.bound == BoundKind::Nub {
            "cardinality"
        } else {
            ""
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub channel_id: String,
    pub rows: Vec<ReportRow>,
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUNDS_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [
                self.channel_id.clone(),
                r.bound.to_string(),
                format_value(r.value),
                r.converged.to_string(),
                opt(r.card_u),
                opt(r.card_v),
                opt(r.card_yhat),
                r.evaluations.to_string(),
                csv_field(r.witness.as_deref().unwrap_or("")),
                r.caveat().to_string(),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}
