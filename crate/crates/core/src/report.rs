//! Report records emitted by the checkers and probes, with text, JSON, and
//! CSV views. Serialization is deterministic: fixed struct order, sorted
//! object keys, no floating point anywhere.

use serde::Serialize;
use serde_json::Value;

/// One counterexample to an identity check (never expected).
#[derive(Serialize, Clone, Debug)]
pub struct Failure {
    pub point: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// Outcome of a sampled exact-identity check.
#[derive(Serialize, Clone, Debug)]
pub struct IdentityReport {
    pub op: String,
    pub field_p: u64,
    pub prec: i64,
    pub seed: u64,
    pub samples: usize,
    pub exact_matches: usize,
    pub failures: Vec<Failure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.exact_matches == self.samples && self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}/{} exact matches (p = {}, prec = {}, seed = {})\n",
            self.op, self.exact_matches, self.samples, self.field_p, self.prec, self.seed
        );
        for f in &self.failures {
            out.push_str(&format!(
                "  mismatch at ({}): lhs = ({}), rhs = ({})\n",
                f.point.join("; "),
                f.lhs.join("; "),
                f.rhs.join("; ")
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!(
            "op,field_p,prec,seed,samples,exact_matches,failures\n{},{},{},{},{},{},{}\n",
            self.op,
            self.field_p,
            self.prec,
            self.seed,
            self.samples,
            self.exact_matches,
            self.failures.len()
        )
    }
}

/// Outcome of a regularity probe: tabular rows plus a verdict line.
#[derive(Serialize, Clone, Debug)]
pub struct ProbeReport {
    pub check: String,
    pub params: Value,
    pub rows: Vec<Value>,
    pub verdict: String,
}

impl ProbeReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} ({})\n", self.check, compact_params(&self.params));
        for row in &self.rows {
            out.push_str("  ");
            out.push_str(&row_line(row));
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }

    /// Header from the keys of the first row (rows share one shape per
    /// table; keys come out sorted from the JSON map).
    pub fn to_csv(&self) -> String {
        let Some(Value::Object(first)) = self.rows.first() else {
            return format!("check,verdict\n{},{}\n", self.check, self.verdict);
        };
        let keys: Vec<&String> = first.keys().collect();
        let mut out = keys
            .iter()
            .map(|k| k.as_str())
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in &self.rows {
            if let Value::Object(obj) = row {
                let line = keys
                    .iter()
                    .map(|k| obj.get(*k).map(plain).unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&line);
                out.push('\n');
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn compact_params(params: &Value) -> String {
    match params {
        Value::Object(obj) => obj
            .iter()
            .map(|(k, v)| format!("{k} = {}", plain(v)))
            .collect::<Vec<_>>()
            .join(", "),
        other => plain(other),
    }
}

fn row_line(row: &Value) -> String {
    match row {
        Value::Object(obj) => obj
            .iter()
            .map(|(k, v)| format!("{k} = {}", plain(v)))
            .collect::<Vec<_>>()
            .join(", "),
        other => plain(other),
    }
}
