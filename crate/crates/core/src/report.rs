//! Machine-readable verification reports.
//!
//! Floats are written with 17 significant digits so repeated runs produce
//! byte-identical JSON.

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn opt_real(x: Option<f64>) -> Value {
    x.map(real).unwrap_or(Value::Null)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
    TrendOnly,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::TrendOnly => "trend-only",
        }
    }

    pub fn from_checks(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Row of named values inside a report's `statistics` array.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Stat(Map<String, Value>);

impl Stat {
    pub fn new(name: impl Into<String>) -> Self {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(name.into()));
        Stat(m)
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self
    }

    pub fn uint(mut self, key: &str, v: u64) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self
    }

    pub fn real(mut self, key: &str, v: f64) -> Self {
        self.0.insert(key.into(), real(v));
        self
    }

    pub fn opt_real(mut self, key: &str, v: Option<f64>) -> Self {
        self.0.insert(key.into(), opt_real(v));
        self
    }

    pub fn complex(mut self, key: &str, v: Complex64) -> Self {
        self.0.insert(format!("{key}_re"), real(v.re));
        self.0.insert(format!("{key}_im"), real(v.im));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(v));
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.0.insert(key.into(), Value::String(v.into()));
        self
    }

    pub fn value(mut self, key: &str, v: Value) -> Self {
        self.0.insert(key.into(), v);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hypothesis {
    pub eta: Option<f64>,
    pub q: Option<u64>,
}

/// Report shared by all verifiers: `claim`, `hypothesis`, `statistics`, `verdict`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub claim: String,
    pub hypothesis: Hypothesis,
    pub statistics: Vec<Stat>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(claim: impl Into<String>, hypothesis: Hypothesis) -> Self {
        Report {
            claim: claim.into(),
            hypothesis,
            statistics: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn push(&mut self, stat: Stat) {
        self.statistics.push(stat);
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::TrendOnly)
    }

    pub fn to_json(&self) -> Value {
        let mut hyp = Map::new();
        hyp.insert("eta".into(), opt_real(self.hypothesis.eta));
        hyp.insert(
            "Q".into(),
            self.hypothesis.q.map(Value::from).unwrap_or(Value::Null),
        );
        let mut m = Map::new();
        m.insert("claim".into(), Value::String(self.claim.clone()));
        m.insert("hypothesis".into(), Value::Object(hyp));
        m.insert(
            "statistics".into(),
            Value::Array(self.statistics.iter().cloned().map(Stat::into_value).collect()),
        );
        m.insert("verdict".into(), Value::String(self.verdict.as_str().into()));
        Value::Object(m)
    }
}
