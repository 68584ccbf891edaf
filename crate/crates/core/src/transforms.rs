//! Eratosthenes transform `F' = F ∗ μ` and its inverse, the Wintner and
//! Carmichael coefficient transforms, and convergence diagnostics for the
//! series behind them.
//!
//! Every infinite series is reported through checkpointed partial sums.
//! Convergence labels are heuristics drawn from finite data, never proofs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::expansions::RamanujanCoefficients;
use crate::number_theory::FactorTable;
use crate::ramanujan_sums::cq_kluyver;
use crate::report::{opt_real, real};

/// Absolute tolerance for comparing complex values at desk magnitudes.
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// Tolerance used when a series is not known to terminate inside the table.
pub const DEFAULT_SERIES_TOLERANCE: f64 = 1e-6;

type EvalFn = dyn Fn(u64) -> Result<Complex64> + Send + Sync;

/// An arithmetic function `a ↦ F(a)` with optional period and support hints.
#[derive(Clone)]
pub struct ArithmeticFunctionView {
    label: String,
    period_hint: Option<u64>,
    support_hint: Option<Arc<BTreeSet<u64>>>,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for ArithmeticFunctionView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithmeticFunctionView")
            .field("label", &self.label)
            .field("period_hint", &self.period_hint)
            .field("support_hint", &self.support_hint)
            .finish_non_exhaustive()
    }
}

impl ArithmeticFunctionView {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::fallible(label, move |a| Ok(f(a)))
    }

    pub fn fallible(
        label: impl Into<String>,
        f: impl Fn(u64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        ArithmeticFunctionView {
            label: label.into(),
            period_hint: None,
            support_hint: None,
            eval: Arc::new(f),
        }
    }

    pub fn real(label: impl Into<String>, f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, move |a| Complex64::new(f(a), 0.0))
    }

    pub fn constant(label: impl Into<String>, c: Complex64) -> Self {
        Self::new(label, move |_| c)
            .with_period(1)
            .expect("a constant has period 1")
    }

    pub fn zero() -> Self {
        Self::constant("zero", Complex64::new(0.0, 0.0))
    }

    /// Indicator of a finite set of naturals.
    pub fn indicator(label: impl Into<String>, set: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = set.into_iter().collect();
        let members = set.clone();
        Self::real(label, move |a| if members.contains(&a) { 1.0 } else { 0.0 }).with_support(set)
    }

    /// The divisor function `d(a)`.
    pub fn divisor_count(t: Arc<FactorTable>) -> Self {
        Self::fallible("divisor count d(a)", move |a| {
            Ok(Complex64::new(t.num_divisors(a)? as f64, 0.0))
        })
    }

    /// `a ↦ c_q(a)`, declared `q`-periodic.
    pub fn ramanujan_sum(q: u64, t: Arc<FactorTable>) -> Result<Self> {
        let label = format!("c_{q}(a)");
        Self::fallible(label, move |a| Ok(Complex64::new(cq_kluyver(q, a, &t)? as f64, 0.0)))
            .with_period(q)
    }

    pub fn von_mangoldt(t: Arc<FactorTable>) -> Self {
        Self::fallible("von Mangoldt", move |a| Ok(Complex64::new(t.von_mangoldt(a)?, 0.0)))
    }

    /// Declares period `q`, validated on `a ∈ 1..=3q`.
    pub fn with_period(mut self, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("period must be positive"));
        }
        for a in 1..=3 * q {
            let lhs = self.evaluate(a)?;
            let rhs = self.evaluate(a + q)?;
            if (lhs - rhs).norm() > EXACT_TOLERANCE {
                return Err(Error::invalid(format!(
                    "{} is not {q}-periodic: F({a}) = {lhs} but F({}) = {rhs}",
                    self.label,
                    a + q
                )));
            }
        }
        self.period_hint = Some(q);
        Ok(self)
    }

    /// Declares that `F` vanishes off `support`, validated on `1..=2·max(support)`.
    pub fn with_support(mut self, support: BTreeSet<u64>) -> Result<Self> {
        if support.contains(&0) {
            return Err(Error::invalid("support hint contains 0"));
        }
        let top = support.iter().next_back().copied().unwrap_or(0);
        for a in 1..=2 * top.max(1) {
            if support.contains(&a) {
                continue;
            }
            let v = self.evaluate(a)?;
            if v.norm() > EXACT_TOLERANCE {
                return Err(Error::invalid(format!(
                    "{} is {v} at {a}, outside its declared support",
                    self.label
                )));
            }
        }
        self.support_hint = Some(Arc::new(support));
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period_hint(&self) -> Option<u64> {
        self.period_hint
    }

    pub fn support_hint(&self) -> Option<&BTreeSet<u64>> {
        self.support_hint.as_deref()
    }

    pub fn evaluate(&self, a: u64) -> Result<Complex64> {
        if a == 0 {
            return Err(Error::invalid(format!("{} evaluated at 0", self.label)));
        }
        (self.eval)(a).map_err(|e| match e {
            Error::Evaluation { .. } => e,
            other => Error::Evaluation {
                label: self.label.clone(),
                arg: a,
                message: other.to_string(),
            },
        })
    }
}

/// `|F'(d)| ≤ constant·(log d)^(-eta)` for `d ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDecay {
    pub eta: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    InvertedFromF,
    /// Built from `d·Σ μ(K)G(dK)` truncated at `d·K ≤ coefficient_limit`.
    LuchtSeries {
        coefficient_limit: u64,
        tail_bound: Option<f64>,
    },
}

/// Tabulated `F'(d)` for `1 ≤ d ≤ d_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct EratosthenesTable {
    d_max: u64,
    /// Index 0 is unused and always zero.
    values: Vec<Complex64>,
    provenance: Provenance,
    support_bound: Option<u64>,
    decay: Option<LogDecay>,
}

impl EratosthenesTable {
    /// Wraps `values[i] = F'(i + 1)`.
    pub fn from_values(values: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("Eratosthenes table needs at least one entry"));
        }
        if let Some(d) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid(format!("F'({}) is not finite", d + 1)));
        }
        let d_max = values.len() as u64;
        let mut padded = Vec::with_capacity(values.len() + 1);
        padded.push(Complex64::new(0.0, 0.0));
        padded.extend(values);
        Ok(EratosthenesTable {
            d_max,
            values: padded,
            provenance,
            support_bound: None,
            decay: None,
        })
    }

    /// Declares `F'(d) = 0` for every `d > bound`, including beyond `d_max`.
    pub fn with_support_bound(mut self, bound: u64) -> Result<Self> {
        for d in bound.saturating_add(1)..=self.d_max {
            if self.values[d as usize].norm() > EXACT_TOLERANCE {
                return Err(Error::invalid(format!(
                    "F'({d}) = {} contradicts declared support bound {bound}",
                    self.values[d as usize]
                )));
            }
        }
        self.support_bound = Some(bound);
        Ok(self)
    }

    pub fn with_decay(mut self, decay: LogDecay) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn support_bound(&self) -> Option<u64> {
        self.support_bound
    }

    pub fn decay(&self) -> Option<LogDecay> {
        self.decay
    }

    /// True when every nonzero `F'(d)` is known to lie in the table.
    pub fn is_complete(&self) -> bool {
        self.support_bound.is_some_and(|b| b <= self.d_max)
    }

    pub fn value(&self, d: u64) -> Result<Complex64> {
        if d == 0 || d > self.d_max {
            return Err(Error::OutOfRange {
                what: "d",
                value: d,
                limit: self.d_max,
            });
        }
        Ok(self.values[d as usize])
    }

    /// `F'(1..=d_max)`.
    pub fn values(&self) -> &[Complex64] {
        &self.values[1..]
    }
}

fn mobius_vec(n: u64, t: &FactorTable) -> Result<Vec<i64>> {
    t.check("d_max", n)?;
    let mut mu = vec![0i64; n as usize + 1];
    for k in 1..=n {
        mu[k as usize] = t.mobius(k)?;
    }
    Ok(mu)
}

/// `F'(d) = Σ_{e | d} μ(d/e)·F(e)` for `d ≤ d_max`.
pub fn eratosthenes_transform(
    f: &ArithmeticFunctionView,
    d_max: u64,
    t: &FactorTable,
) -> Result<EratosthenesTable> {
    let mu = mobius_vec(d_max, t)?;
    let n = d_max as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for e in 1..=n {
        let fe = f.evaluate(e as u64)?;
        if fe == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 1..=n / e {
            match mu[k] {
                0 => {}
                1 => out[e * k - 1] += fe,
                _ => out[e * k - 1] -= fe,
            }
        }
    }
    EratosthenesTable::from_values(out, Provenance::InvertedFromF)
}

/// Single-point Möbius inversion `Σ_{e | n} μ(n/e)·F(e)`.
pub fn eratosthenes_at(f: &ArithmeticFunctionView, n: u64, t: &FactorTable) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for e in t.divisors(n)? {
        match t.mobius(n / e)? {
            0 => {}
            1 => acc += f.evaluate(e)?,
            _ => acc -= f.evaluate(e)?,
        }
    }
    Ok(acc)
}

/// `Σ_{d | a} F'(d)`.
pub fn inverse_eratosthenes(e: &EratosthenesTable, a: u64) -> Result<Complex64> {
    if a == 0 || a > e.d_max {
        return Err(Error::OutOfRange {
            what: "a",
            value: a,
            limit: e.d_max,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= a {
        if a.is_multiple_of(d) {
            acc += e.values[d as usize];
            let co = a / d;
            if co != d {
                acc += e.values[co as usize];
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// `F(a)` for every `a ≤ d_max`, as `out[a - 1]`.
pub fn inverse_eratosthenes_all(e: &EratosthenesTable) -> Vec<Complex64> {
    let n = e.d_max as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for d in 1..=n {
        let v = e.values[d];
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut a = d;
        while a <= n {
            out[a - 1] += v;
            a += d;
        }
    }
    out
}

/// A coefficient computed as the limit of a truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    pub q: u64,
    pub value: Complex64,
    /// `(truncation point, partial value)`, strictly increasing in the point.
    pub checkpoints: Vec<(u64, Complex64)>,
    pub tail_bound: Option<f64>,
    pub converged: bool,
    pub exact: bool,
}

impl CoefficientEstimate {
    pub(crate) fn from_checkpoints(
        q: u64,
        checkpoints: Vec<(u64, Complex64)>,
        tail_bound: Option<f64>,
        tolerance: f64,
        exact: bool,
    ) -> Self {
        let value = checkpoints
            .last()
            .map(|&(_, v)| v)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0));
        let converged = match checkpoints.as_slice() {
            [.., (_, prev), (_, last)] => (last - prev).norm() < tolerance,
            _ => false,
        };
        CoefficientEstimate {
            q,
            value,
            checkpoints,
            tail_bound,
            converged,
            exact,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("q".into(), Value::from(self.q));
        m.insert("value_re".into(), real(self.value.re));
        m.insert("value_im".into(), real(self.value.im));
        m.insert(
            "checkpoints".into(),
            Value::Array(
                self.checkpoints
                    .iter()
                    .map(|&(x, v)| Value::Array(vec![Value::from(x), real(v.re), real(v.im)]))
                    .collect(),
            ),
        );
        m.insert("tail_bound".into(), opt_real(self.tail_bound));
        m.insert("converged".into(), Value::Bool(self.converged));
        m.insert("exact".into(), Value::Bool(self.exact));
        Value::Object(m)
    }
}

/// `{n/8, n/4, n/2, n}` with zeros and duplicates dropped.
pub(crate) fn fractional_checkpoints(n: u64, fractions: &[u64]) -> Vec<u64> {
    let mut pts: Vec<u64> = fractions.iter().map(|&f| n / f).filter(|&x| x > 0).collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// `Win_q F = Σ_{q | d} F'(d)/d`, truncated at the table end.
pub fn wintner_coefficient(e: &EratosthenesTable, q: u64) -> Result<CoefficientEstimate> {
    wintner_coefficient_with_tolerance(e, q, DEFAULT_SERIES_TOLERANCE)
}

pub fn wintner_coefficient_with_tolerance(
    e: &EratosthenesTable,
    q: u64,
    tolerance: f64,
) -> Result<CoefficientEstimate> {
    if q == 0 {
        return Err(Error::invalid("q must be at least 1"));
    }
    let marks = fractional_checkpoints(e.d_max, &[8, 4, 2, 1]);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut d = q;
    for &x in &marks {
        while d <= x {
            acc += e.values[d as usize] / d as f64;
            d += q;
        }
        checkpoints.push((x, acc));
    }

    let exact = e.is_complete();
    let (tolerance, tail_bound) = if exact {
        (EXACT_TOLERANCE, Some(0.0))
    } else {
        (tolerance, wintner_tail_bound(e, q))
    };
    Ok(CoefficientEstimate::from_checkpoints(
        q,
        checkpoints,
        tail_bound,
        tolerance,
        exact,
    ))
}

// Σ_{m > M} C/(q·m·log^η(qm)) ≤ (C/q)·log(qM)^(1-η)/(η-1), with M = ⌊d_max/q⌋.
fn wintner_tail_bound(e: &EratosthenesTable, q: u64) -> Option<f64> {
    let decay = e.decay?;
    if decay.eta <= 1.0 {
        return None;
    }
    let m = e.d_max / q;
    let x = (q * m) as f64;
    if m == 0 || x < 2.0 {
        return None;
    }
    Some(decay.constant / q as f64 * x.ln().powf(1.0 - decay.eta) / (decay.eta - 1.0))
}

/// `Car_q F = (1/φ(q))·lim (1/x)·Σ_{a ≤ x} F(a)·c_q(a)` at each checkpoint.
///
/// When `F` declares a period `Q`, the average over whole multiples of
/// `lcm(q, Q)` is the limit itself; two such points are appended after the
/// caller's checkpoints and the estimate is marked exact.
pub fn carmichael_coefficient(
    f: &ArithmeticFunctionView,
    q: u64,
    x_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<CoefficientEstimate> {
    if q == 0 {
        return Err(Error::invalid("q must be at least 1"));
    }
    t.check("q", q)?;
    if x_checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("checkpoints must be strictly increasing"));
    }
    if x_checkpoints.first() == Some(&0) {
        return Err(Error::invalid("checkpoints must be positive"));
    }

    let mut marks = x_checkpoints.to_vec();
    let mut exact = false;
    if let Some(period) = f.period_hint() {
        let full = q.lcm(&period);
        let last = marks.last().copied().unwrap_or(0);
        let first = (last / full + 1)
            .checked_mul(full)
            .ok_or(Error::Overflow("carmichael checkpoints"))?;
        marks.push(first);
        marks.push(first + full);
        exact = true;
    }
    if marks.is_empty() {
        return Err(Error::invalid(
            "need at least one checkpoint when F has no declared period",
        ));
    }

    let period = crate::ramanujan_sums::cq_period(q, t)?;
    let phi = t.totient(q)? as f64;
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = 1u64;
    for &x in &marks {
        while a <= x {
            let c = period[((a - 1) % q) as usize];
            if c != 0 {
                acc += f.evaluate(a)? * c as f64;
            }
            a += 1;
        }
        checkpoints.push((x, acc / (x as f64 * phi)));
    }

    let tolerance = if exact {
        EXACT_TOLERANCE
    } else {
        DEFAULT_SERIES_TOLERANCE
    };
    Ok(CoefficientEstimate::from_checkpoints(
        q,
        checkpoints,
        None,
        tolerance,
        exact,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    PlausiblyFinite,
    Diverging,
    Inconclusive,
}

impl SeriesVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesVerdict::PlausiblyFinite => "plausibly-finite",
            SeriesVerdict::Diverging => "diverging",
            SeriesVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Partial sums of a nonnegative series with a heuristic verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub checkpoints: Vec<(u64, f64)>,
    /// Fitted `s` in "window mass ≈ harmonic mass · (log n)^(-s)".
    pub fitted_exponent: Option<f64>,
    pub verdict: SeriesVerdict,
}

impl SeriesReport {
    pub fn total(&self) -> f64 {
        self.checkpoints.last().map(|&(_, s)| s).unwrap_or(0.0)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(
            "checkpoints".into(),
            Value::Array(
                self.checkpoints
                    .iter()
                    .map(|&(x, s)| Value::Array(vec![Value::from(x), real(s)]))
                    .collect(),
            ),
        );
        m.insert("fitted_exponent".into(), opt_real(self.fitted_exponent));
        m.insert("verdict".into(), Value::String(self.verdict.as_str().into()));
        Value::Object(m)
    }
}

const MAX_WINDOWS: u32 = 10;
const FIT_WINDOWS: usize = 4;
const FINITE_EXPONENT: f64 = 1.0;
const DIVERGING_EXPONENT: f64 = 0.25;

/// Classifies `Σ terms[n-1]` from dyadic windows ending at `terms.len()`.
///
/// Each window's mass is divided by the harmonic mass `Σ 1/n` over the same
/// window and fitted against `(log n)^(-s)`. Since `Σ 1/(n (log n)^s)`
/// converges exactly when `s > 1`, `s > 1` reads as plausibly finite and
/// `s ≤ 1/4` (keeping pace with the harmonic series) as diverging. Two
/// consecutive windows with mass below `tolerance` also read as finite.
pub fn assess_series(terms: &[f64], tolerance: f64) -> SeriesReport {
    let n = terms.len() as u64;
    if n == 0 {
        return SeriesReport {
            checkpoints: Vec::new(),
            fitted_exponent: None,
            verdict: SeriesVerdict::PlausiblyFinite,
        };
    }
    let mut prefix = Vec::with_capacity(terms.len() + 1);
    prefix.push(0.0f64);
    for &x in terms {
        prefix.push(prefix.last().unwrap() + x);
    }

    let mut bounds = vec![n];
    let mut k = 1;
    while k <= MAX_WINDOWS && (n >> k) >= 2 {
        bounds.push(n >> k);
        k += 1;
    }
    bounds.reverse();
    let checkpoints: Vec<(u64, f64)> = bounds.iter().map(|&b| (b, prefix[b as usize])).collect();

    // windows (lo, hi], newest last
    let windows: Vec<(u64, u64, f64)> = bounds
        .windows(2)
        .map(|w| (w[0], w[1], prefix[w[1] as usize] - prefix[w[0] as usize]))
        .collect();

    let tail_small = windows.len() >= 2
        && windows[windows.len() - 2..]
            .iter()
            .all(|&(_, _, mass)| mass < tolerance);
    if tail_small || (windows.len() == 1 && windows[0].2 < tolerance) {
        return SeriesReport {
            checkpoints,
            fitted_exponent: None,
            verdict: SeriesVerdict::PlausiblyFinite,
        };
    }

    let points: Vec<(f64, f64)> = windows
        .iter()
        .rev()
        .filter(|&&(lo, _, mass)| lo >= 8 && mass > 0.0)
        .take(FIT_WINDOWS)
        .map(|&(lo, hi, mass)| {
            let harmonic: f64 = ((lo + 1)..=hi).map(|m| 1.0 / m as f64).sum();
            let mid = ((lo as f64) * (hi as f64)).sqrt();
            (mid.ln().ln(), (mass / harmonic).ln())
        })
        .collect();
    if points.len() < 2 {
        return SeriesReport {
            checkpoints,
            fitted_exponent: None,
            verdict: SeriesVerdict::Inconclusive,
        };
    }
    let s = -least_squares_slope(&points);
    let verdict = if s > FINITE_EXPONENT {
        SeriesVerdict::PlausiblyFinite
    } else if s <= DIVERGING_EXPONENT {
        SeriesVerdict::Diverging
    } else {
        SeriesVerdict::Inconclusive
    };
    SeriesReport {
        checkpoints,
        fitted_exponent: Some(s),
        verdict,
    }
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Partial sums of `Σ_d |F'(d)|/d`, the hypothesis of Wintner's criterion.
pub fn wintner_assumption_check(e: &EratosthenesTable) -> SeriesReport {
    let terms: Vec<f64> = e
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm() / (i + 1) as f64)
        .collect();
    if e.is_complete() {
        let mut report = assess_series(&terms, EXACT_TOLERANCE);
        report.verdict = SeriesVerdict::PlausiblyFinite;
        return report;
    }
    assess_series(&terms, DEFAULT_SERIES_TOLERANCE)
}

/// Partial sums of `Σ_{q ≤ Q} 2^ω(q)·|G(q)|`.
pub fn weighted_coefficient_sum(
    g: &RamanujanCoefficients,
    q_max: u64,
    t: &FactorTable,
) -> Result<SeriesReport> {
    t.check("Q", q_max)?;
    let mut terms = Vec::with_capacity(q_max as usize);
    for q in 1..=q_max {
        let w = (1u64 << t.omega(q)?) as f64;
        terms.push(w * g.coefficient(q, t)?.norm());
    }
    let mut report = assess_series(&terms, DEFAULT_SERIES_TOLERANCE);
    if g.support_max().is_some_and(|m| m <= q_max) {
        report.verdict = SeriesVerdict::PlausiblyFinite;
    }
    Ok(report)
}
