//! Ramanujan coefficient families, truncated expansions, the Lucht
//! expansion of `F'`, η-decay profiling and the bound verifiers built on
//! them.
//!
//! All logarithms are natural. Decay statistics start at `q = 2`; the
//! `q = 1` term is always split off exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::number_theory::FactorTable;
use crate::periodic_correlations::PeriodicFunction;
use crate::ramanujan_sums::cq_kluyver;
use crate::report::{Hypothesis, Report, Stat, Verdict};
use crate::transforms::{
    assess_series, carmichael_coefficient, least_squares_slope, eratosthenes_transform, fractional_checkpoints, wintner_coefficient,
    CoefficientEstimate, EratosthenesTable, Provenance, SeriesReport, SeriesVerdict,
    DEFAULT_SERIES_TOLERANCE, EXACT_TOLERANCE,
};

/// Margin applied to empirically fitted constants before validation.
pub const CALIBRATION_MARGIN: f64 = 1.05;

/// Upper end of the range used by [`decay_hypothesis`].
pub const DECAY_GATE_Q: u64 = 4096;

/// Largest growth of the decay statistic from `Q/2` to `Q` still read as bounded.
pub const DECAY_GATE_GROWTH: f64 = 1.01;

/// `|G(q)| ≤ constant / (q·(log q)^(1+eta))` for `q ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaDecay {
    pub eta: f64,
    pub constant: f64,
}

type CoefficientFn = dyn Fn(u64) -> Complex64 + Send + Sync;

#[derive(Clone)]
pub enum CoefficientKind {
    Table(BTreeMap<u64, Complex64>),
    /// `1/q`
    RamanujanR0,
    /// `1/φ(q)`
    HardyH0,
    /// `-log(q)/q`, which expands the divisor function.
    DivisorLog,
    /// `scale / (q·log^(1+eta)(q+1))`
    PowerLogDecay { eta: f64, scale: f64 },
    Custom {
        f: Arc<CoefficientFn>,
        decay: Option<EtaDecay>,
    },
}

impl fmt::Debug for CoefficientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientKind::Table(m) => f.debug_tuple("Table").field(m).finish(),
            CoefficientKind::RamanujanR0 => f.write_str("RamanujanR0"),
            CoefficientKind::HardyH0 => f.write_str("HardyH0"),
            CoefficientKind::DivisorLog => f.write_str("DivisorLog"),
            CoefficientKind::PowerLogDecay { eta, scale } => f
                .debug_struct("PowerLogDecay")
                .field("eta", eta)
                .field("scale", scale)
                .finish(),
            CoefficientKind::Custom { decay, .. } => {
                f.debug_struct("Custom").field("decay", decay).finish_non_exhaustive()
            }
        }
    }
}

/// The coefficient `G` of an expansion `F(a) = Σ_q G(q)·c_q(a)`.
#[derive(Debug, Clone)]
pub struct RamanujanCoefficients {
    kind: CoefficientKind,
    label: String,
}

impl RamanujanCoefficients {
    pub fn table(label: impl Into<String>, entries: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let map: BTreeMap<u64, Complex64> = entries.into_iter().collect();
        if map.contains_key(&0) {
            return Err(Error::invalid("coefficient table keys must be at least 1"));
        }
        if let Some((q, v)) = map.iter().find(|(_, v)| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid(format!("G({q}) = {v} is not finite")));
        }
        Ok(RamanujanCoefficients {
            kind: CoefficientKind::Table(map),
            label: label.into(),
        })
    }

    pub fn ramanujan_r0() -> Self {
        RamanujanCoefficients {
            kind: CoefficientKind::RamanujanR0,
            label: "R0(q) = 1/q".into(),
        }
    }

    pub fn hardy_h0() -> Self {
        RamanujanCoefficients {
            kind: CoefficientKind::HardyH0,
            label: "H0(q) = 1/phi(q)".into(),
        }
    }

    pub fn divisor_log() -> Self {
        RamanujanCoefficients {
            kind: CoefficientKind::DivisorLog,
            label: "-log(q)/q".into(),
        }
    }

    pub fn power_log_decay(eta: f64, scale: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::invalid(format!("eta must be a positive real, got {eta}")));
        }
        if !scale.is_finite() {
            return Err(Error::invalid("scale must be finite"));
        }
        Ok(RamanujanCoefficients {
            kind: CoefficientKind::PowerLogDecay { eta, scale },
            label: format!("{scale}/(q log^(1+{eta})(q+1))"),
        })
    }

    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
        decay: Option<EtaDecay>,
    ) -> Self {
        RamanujanCoefficients {
            kind: CoefficientKind::Custom {
                f: Arc::new(f),
                decay,
            },
            label: label.into(),
        }
    }

    pub fn kind(&self) -> &CoefficientKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coefficient(&self, q: u64, t: &FactorTable) -> Result<Complex64> {
        if q == 0 {
            return Err(Error::invalid("coefficients are indexed from q = 1"));
        }
        let qf = q as f64;
        let re = |x: f64| Complex64::new(x, 0.0);
        Ok(match &self.kind {
            CoefficientKind::Table(m) => m.get(&q).copied().unwrap_or_default(),
            CoefficientKind::RamanujanR0 => re(1.0 / qf),
            CoefficientKind::HardyH0 => re(1.0 / t.totient(q)? as f64),
            CoefficientKind::DivisorLog => re(-qf.ln() / qf),
            CoefficientKind::PowerLogDecay { eta, scale } => {
                re(scale / (qf * (qf + 1.0).ln().powf(1.0 + eta)))
            }
            CoefficientKind::Custom { f, .. } => f(q),
        })
    }

    /// Largest `q` with a nonzero entry, for finitely supported tables.
    pub fn support_max(&self) -> Option<u64> {
        match &self.kind {
            CoefficientKind::Table(m) => Some(
                m.iter()
                    .rev()
                    .find(|(_, v)| v.norm() != 0.0)
                    .map(|(&q, _)| q)
                    .unwrap_or(0),
            ),
            _ => None,
        }
    }

    /// A known η-decay bound, when the family carries one.
    pub fn eta_decay(&self) -> Option<EtaDecay> {
        match &self.kind {
            CoefficientKind::PowerLogDecay { eta, scale } => Some(EtaDecay {
                eta: *eta,
                constant: scale.abs(),
            }),
            CoefficientKind::Custom { decay, .. } => *decay,
            _ => None,
        }
    }

    /// For a finitely supported table, `F(a) = Σ_{q ∈ S} G(q)·c_q(a)`
    /// tabulated over one period `lcm(S)`.
    pub fn finite_expansion(&self, t: &FactorTable) -> Result<PeriodicFunction> {
        let CoefficientKind::Table(map) = &self.kind else {
            return Err(Error::invalid("finite expansions need a coefficient table"));
        };
        let period = map
            .keys()
            .try_fold(1u64, |acc, &q| {
                let l = acc.lcm(&q);
                (l <= 10_000_000).then_some(l)
            })
            .ok_or_else(|| Error::Resource("period of the finite expansion is too large".into()))?;
        let mut values = vec![Complex64::new(0.0, 0.0); period as usize];
        for (&q, &g) in map {
            if g.norm() == 0.0 {
                continue;
            }
            let row = crate::ramanujan_sums::cq_period(q, t)?;
            for (i, v) in values.iter_mut().enumerate() {
                *v += g * row[i % q as usize] as f64;
            }
        }
        PeriodicFunction::new(format!("expansion of {}", self.label), values)
    }
}

/// `sup_{2 ≤ q ≤ Q} |G(q)|·q·(log q)^(1+η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile {
    pub eta_tested: f64,
    pub sup_statistic: f64,
    pub q_argmax: u64,
    pub q_max: u64,
}

pub fn eta_decay_profile(
    g: &RamanujanCoefficients,
    eta: f64,
    q_max: u64,
    t: &FactorTable,
) -> Result<DecayProfile> {
    if q_max < 2 {
        return Err(Error::invalid("decay profiles need Q ≥ 2"));
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::invalid(format!("eta must be a positive real, got {eta}")));
    }
    let mut sup = 0.0f64;
    let mut argmax = 2;
    for q in 2..=q_max {
        let qf = q as f64;
        let s = g.coefficient(q, t)?.norm() * qf * qf.ln().powf(1.0 + eta);
        if s > sup {
            sup = s;
            argmax = q;
        }
    }
    Ok(DecayProfile {
        eta_tested: eta,
        sup_statistic: sup,
        q_argmax: argmax,
        q_max,
    })
}

/// Numerical check that `G` plausibly has η-decay at the claimed `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayGate {
    pub half: DecayProfile,
    pub full: DecayProfile,
    pub growth: f64,
    pub met: bool,
}

impl DecayGate {
    pub fn stat(&self) -> Stat {
        Stat::new("eta-decay gate")
            .real("eta", self.full.eta_tested)
            .uint("Q", self.full.q_max)
            .real("sup_half", self.half.sup_statistic)
            .real("sup_full", self.full.sup_statistic)
            .uint("q_argmax", self.full.q_argmax)
            .real("growth", self.growth)
            .flag("met", self.met)
    }
}

/// Compares the decay statistic on `Q/2` and `Q`; a bounded statistic
/// barely moves while one that misses the decay keeps growing with `log Q`.
/// Finitely supported tables satisfy every η-decay and always pass.
pub fn decay_hypothesis(g: &RamanujanCoefficients, eta: f64, t: &FactorTable) -> Result<DecayGate> {
    let q_max = DECAY_GATE_Q.min(t.limit());
    let full = eta_decay_profile(g, eta, q_max, t)?;
    let half = eta_decay_profile(g, eta, (q_max / 2).max(2), t)?;
    let growth = if half.sup_statistic > 0.0 {
        full.sup_statistic / half.sup_statistic
    } else if full.sup_statistic > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let met = matches!(g.kind, CoefficientKind::Table(_)) || growth <= DECAY_GATE_GROWTH;
    Ok(DecayGate {
        half,
        full,
        growth,
        met,
    })
}

/// Partial sums of `Σ_{q ≤ x} G(q)·c_q(a)` and of `Σ_{q ≤ x} |G(q)·c_q(a)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionEvaluation {
    pub a: u64,
    pub checkpoints: Vec<(u64, Complex64)>,
    pub abs_checkpoints: Vec<(u64, f64)>,
}

impl ExpansionEvaluation {
    pub fn value(&self) -> Complex64 {
        self.checkpoints.last().map(|&(_, v)| v).unwrap_or_default()
    }
}

pub fn evaluate_expansion(
    g: &RamanujanCoefficients,
    a: u64,
    x_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<ExpansionEvaluation> {
    if a == 0 {
        return Err(Error::invalid("a must be at least 1"));
    }
    let Some(&x_max) = x_checkpoints.last() else {
        return Err(Error::invalid("need at least one checkpoint"));
    };
    if x_checkpoints.windows(2).any(|w| w[0] >= w[1]) || x_checkpoints[0] == 0 {
        return Err(Error::invalid("checkpoints must be positive and strictly increasing"));
    }
    t.check("checkpoint", x_max)?;

    let mut checkpoints = Vec::with_capacity(x_checkpoints.len());
    let mut abs_checkpoints = Vec::with_capacity(x_checkpoints.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut abs_acc = 0.0f64;
    let mut q = 1u64;
    for &x in x_checkpoints {
        while q <= x {
            let c = cq_kluyver(q, a, t)?;
            if c != 0 {
                let term = g.coefficient(q, t)? * c as f64;
                acc += term;
                abs_acc += term.norm();
            }
            q += 1;
        }
        checkpoints.push((x, acc));
        abs_checkpoints.push((x, abs_acc));
    }
    Ok(ExpansionEvaluation {
        a,
        checkpoints,
        abs_checkpoints,
    })
}

/// `F'(d) = d·Σ_{K ≤ K_max} μ(K)·G(dK)`, checkpointed at `K_max/4`, `K_max/2`, `K_max`.
///
/// The tail bound uses `log(dK) ≥ log(d·K_max)` beyond the cut:
/// `d·Σ_{K > K_max} |G(dK)| ≤ C / (η·log^η(d·K_max))`.
pub fn lucht_expansion(
    g: &RamanujanCoefficients,
    d: u64,
    k_max: u64,
    t: &FactorTable,
) -> Result<CoefficientEstimate> {
    if d == 0 || k_max == 0 {
        return Err(Error::invalid("d and K_max must be positive"));
    }
    t.check("K_max", k_max)?;
    d.checked_mul(k_max).ok_or(Error::Overflow("d·K_max"))?;
    lucht_checkpointed(g, d, k_max, |k| t.mobius(k), t)
}

fn lucht_checkpointed(
    g: &RamanujanCoefficients,
    d: u64,
    k_max: u64,
    mobius: impl Fn(u64) -> Result<i64>,
    t: &FactorTable,
) -> Result<CoefficientEstimate> {
    let marks = fractional_checkpoints(k_max, &[4, 2, 1]);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 1u64;
    for &x in &marks {
        while k <= x {
            match mobius(k)? {
                0 => {}
                m => acc += g.coefficient(d * k, t)? * m as f64,
            }
            k += 1;
        }
        checkpoints.push((x, acc * d as f64));
    }
    let (tail_bound, exact) = lucht_tail(g, d * k_max);
    let tolerance = if exact {
        EXACT_TOLERANCE
    } else {
        DEFAULT_SERIES_TOLERANCE
    };
    Ok(CoefficientEstimate::from_checkpoints(
        d,
        checkpoints,
        tail_bound,
        tolerance,
        exact,
    ))
}

fn lucht_tail(g: &RamanujanCoefficients, cut: u64) -> (Option<f64>, bool) {
    if let Some(m) = g.support_max() {
        if cut >= m {
            return (Some(0.0), true);
        }
    }
    match g.eta_decay() {
        Some(decay) if cut >= 2 => (
            Some(decay.constant / (decay.eta * (cut as f64).ln().powf(decay.eta))),
            false,
        ),
        _ => (None, false),
    }
}

/// `F'(d)` for `d ≤ d_max` from the Lucht series truncated at `d·K ≤ coefficient_limit`.
///
/// With this truncation `Σ_{d|a} F'(d)` regroups exactly into the
/// expansion partial sum over `q ≤ coefficient_limit` (Kluyver's formula),
/// for every `a ≤ d_max`.
pub fn lucht_eratosthenes_table(
    g: &RamanujanCoefficients,
    d_max: u64,
    coefficient_limit: u64,
    t: &FactorTable,
) -> Result<EratosthenesTable> {
    if d_max == 0 || coefficient_limit < d_max {
        return Err(Error::invalid("need 1 ≤ d_max ≤ coefficient_limit"));
    }
    t.check("coefficient_limit", coefficient_limit)?;
    let n = coefficient_limit as usize;
    let mut mu = vec![0i64; n + 1];
    let mut coeff = vec![Complex64::new(0.0, 0.0); n + 1];
    for q in 1..=n {
        mu[q] = t.mobius(q as u64)?;
        coeff[q] = g.coefficient(q as u64, t)?;
    }
    let mut values = Vec::with_capacity(d_max as usize);
    let mut worst_tail: Option<f64> = Some(0.0);
    let mut all_exact = true;
    for d in 1..=d_max as usize {
        let k_max = n / d;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=k_max {
            match mu[k] {
                0 => {}
                1 => acc += coeff[d * k],
                _ => acc -= coeff[d * k],
            }
        }
        values.push(acc * d as f64);
        let (tail, exact) = lucht_tail(g, (d * k_max) as u64);
        all_exact &= exact;
        worst_tail = match (worst_tail, tail) {
            (Some(w), Some(x)) => Some(w.max(x)),
            _ => None,
        };
    }
    let table = EratosthenesTable::from_values(
        values,
        Provenance::LuchtSeries {
            coefficient_limit,
            tail_bound: worst_tail,
        },
    )?;
    match g.support_max() {
        Some(m) if all_exact && m <= d_max => table.with_support_bound(m),
        _ => Ok(table),
    }
}

fn fit_constant(samples: impl IntoIterator<Item = f64>) -> f64 {
    samples.into_iter().fold(0.0, f64::max) * CALIBRATION_MARGIN
}

fn gate_or_report(
    claim: &str,
    g: &RamanujanCoefficients,
    eta: f64,
    t: &FactorTable,
) -> Result<(DecayGate, Option<Report>)> {
    let gate = decay_hypothesis(g, eta, t)?;
    if gate.met {
        return Ok((gate, None));
    }
    let mut report = Report::new(
        claim,
        Hypothesis {
            eta: Some(eta),
            q: Some(gate.full.q_max),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    report.verdict = Verdict::HypothesisNotMet;
    Ok((gate, Some(report)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub arg: u64,
    pub value: Complex64,
    pub statistic: f64,
    pub tail_bound: Option<f64>,
}

/// Outcome of a calibrate-then-validate check of `statistic ≤ constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub report: Report,
    /// Fitted constant, margin included; `None` when the gate refused.
    pub constant: Option<f64>,
    pub calibration: Vec<BoundRow>,
    pub validation: Vec<BoundRow>,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.report.verdict == Verdict::Pass
    }

    pub fn max_validation_statistic(&self) -> f64 {
        self.validation.iter().map(|r| r.statistic).fold(0.0, f64::max)
    }
}

/// Checks `|F'(d)|·(log d)^η ≤ K` with `F'` from the Lucht series.
///
/// `K` is the largest statistic over `calibration` (entries below 2 skipped)
/// times [`CALIBRATION_MARGIN`]; it is then asserted over `d_range`.
pub fn theorem1_verifier(
    g: &RamanujanCoefficients,
    eta: f64,
    calibration: &[u64],
    d_range: &[u64],
    k_max: u64,
    t: &FactorTable,
) -> Result<BoundCheck> {
    const CLAIM: &str = "F'(d) << (log d)^(-eta)";
    let (gate, refused) = gate_or_report(CLAIM, g, eta, t)?;
    if let Some(report) = refused {
        return Ok(BoundCheck {
            report,
            constant: None,
            calibration: Vec::new(),
            validation: Vec::new(),
        });
    }
    t.check("K_max", k_max)?;
    let mut mu = vec![0i64; k_max as usize + 1];
    for k in 1..=k_max {
        mu[k as usize] = t.mobius(k)?;
    }
    let row = |d: u64| -> Result<BoundRow> {
        d.checked_mul(k_max).ok_or(Error::Overflow("d·K_max"))?;
        let est = lucht_checkpointed(g, d, k_max, |k| Ok(mu[k as usize]), t)?;
        let statistic = if d >= 2 {
            est.value.norm() * (d as f64).ln().powf(eta)
        } else {
            0.0
        };
        Ok(BoundRow {
            arg: d,
            value: est.value,
            statistic,
            tail_bound: est.tail_bound,
        })
    };
    let calibration: Vec<BoundRow> = calibration
        .iter()
        .filter(|&&d| d >= 2)
        .map(|&d| row(d))
        .collect::<Result<_>>()?;
    let validation: Vec<BoundRow> = d_range.iter().map(|&d| row(d)).collect::<Result<_>>()?;
    let constant = fit_constant(calibration.iter().map(|r| r.statistic));

    let mut sorted: Vec<&BoundRow> = validation.iter().filter(|r| r.arg >= 2).collect();
    sorted.sort_by_key(|r| r.arg);
    let envelope_nonincreasing = sorted.windows(2).all(|w| w[1].statistic <= w[0].statistic);

    let mut report = Report::new(
        CLAIM,
        Hypothesis {
            eta: Some(eta),
            q: Some(k_max),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    report.push(
        Stat::new("fitted constant")
            .real("constant", constant)
            .real("margin", CALIBRATION_MARGIN)
            .uint("calibration_points", calibration.len() as u64),
    );
    let mut ok = true;
    for r in &validation {
        let within = r.statistic <= constant;
        ok &= within;
        report.push(
            Stat::new("F'(d)")
                .uint("d", r.arg)
                .complex("value", r.value)
                .real("statistic", r.statistic)
                .opt_real("tail_bound", r.tail_bound)
                .flag("within_bound", within),
        );
    }
    report.push(Stat::new("envelope").flag("nonincreasing", envelope_nonincreasing));
    report.verdict = Verdict::from_checks(ok);
    Ok(BoundCheck {
        report,
        constant: Some(constant),
        calibration,
        validation,
    })
}

/// `F(a₀p) - F(a₀)` from the expansion truncated at `x`.
///
/// `c_q(a₀p) = c_q(a₀)` unless `p | q`, so only the terms `q = p·m ≤ x`
/// differ and the difference is summed over those alone.
pub fn expansion_difference_along_prime(
    g: &RamanujanCoefficients,
    a0: u64,
    p: u64,
    x: u64,
    t: &FactorTable,
) -> Result<Complex64> {
    t.check("x", x)?;
    let a0p = a0.checked_mul(p).ok_or(Error::Overflow("a0·p"))?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut q = p;
    while q <= x {
        let delta = cq_kluyver(q, a0p, t)? - cq_kluyver(q, a0, t)?;
        if delta != 0 {
            acc += g.coefficient(q, t)? * delta as f64;
        }
        q += p;
    }
    Ok(acc)
}

/// Checks `|F(a₀p) - F(a₀)|·(log p)^η ≤ K` over primes coprime to `a₀`.
///
/// `K` is fitted on the primes `≤ calibration_bound`, then asserted on the
/// next `prime_count` primes above it. Rows also carry the statistic divided by
/// `d(a₀)`, the factor that enters through `F(a₀p) - F(a₀) = Σ_{d|a₀} F'(dp)`.
pub fn corollary1_verifier(
    g: &RamanujanCoefficients,
    eta: f64,
    a0: u64,
    calibration_bound: u64,
    prime_count: usize,
    x: u64,
    t: &FactorTable,
) -> Result<BoundCheck> {
    const CLAIM: &str = "F(a0 p) = F(a0) + O((log p)^(-eta))";
    let (gate, refused) = gate_or_report(CLAIM, g, eta, t)?;
    if let Some(report) = refused {
        return Ok(BoundCheck {
            report,
            constant: None,
            calibration: Vec::new(),
            validation: Vec::new(),
        });
    }
    if a0 == 0 {
        return Err(Error::invalid("a0 must be at least 1"));
    }
    let base = evaluate_expansion(g, a0, &[x], t)?.value();
    let d_a0 = t.num_divisors(a0)? as f64;
    let coprime: Vec<u64> = t
        .primes()
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| !a0.is_multiple_of(p))
        .collect();
    let row = |p: u64| -> Result<BoundRow> {
        let diff = expansion_difference_along_prime(g, a0, p, x, t)?;
        Ok(BoundRow {
            arg: p,
            value: diff,
            statistic: diff.norm() * (p as f64).ln().powf(eta),
            tail_bound: None,
        })
    };
    let calibration: Vec<BoundRow> = coprime
        .iter()
        .take_while(|&&p| p <= calibration_bound)
        .map(|&p| row(p))
        .collect::<Result<_>>()?;
    let beyond: Vec<u64> = coprime.iter().copied().filter(|&p| p > calibration_bound).collect();
    if beyond.len() < prime_count {
        return Err(Error::Resource(format!(
            "only {} primes coprime to {a0} in ({calibration_bound}, sieve limit], {prime_count} requested",
            beyond.len()
        )));
    }
    let validation: Vec<BoundRow> = beyond[..prime_count]
        .iter()
        .map(|&p| row(p))
        .collect::<Result<_>>()?;
    let constant = fit_constant(calibration.iter().map(|r| r.statistic));

    let mut report = Report::new(
        CLAIM,
        Hypothesis {
            eta: Some(eta),
            q: Some(x),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    report.push(
        Stat::new("base value")
            .uint("a0", a0)
            .complex("F_a0", base)
            .real("divisor_count_a0", d_a0),
    );
    report.push(
        Stat::new("fitted constant")
            .real("constant", constant)
            .real("margin", CALIBRATION_MARGIN)
            .uint("calibration_bound", calibration_bound),
    );
    let worst = validation
        .iter()
        .max_by(|a, b| a.statistic.total_cmp(&b.statistic));
    let ok = validation.iter().all(|r| r.statistic <= constant);
    if let Some(w) = worst {
        report.push(
            Stat::new("worst prime")
                .uint("p", w.arg)
                .complex("difference", w.value)
                .real("statistic", w.statistic)
                .real("normalized", w.statistic / d_a0),
        );
    }
    let last_prime = validation.last().map(|r| r.arg);
    for r in validation
        .iter()
        .filter(|r| [2, 3, 5, 7, 101, 1009, 10007].contains(&r.arg) || Some(r.arg) == last_prime)
    {
        report.push(
            Stat::new("difference")
                .uint("p", r.arg)
                .complex("value", r.value)
                .real("statistic", r.statistic)
                .real("normalized", r.statistic / d_a0)
                .flag("within_bound", r.statistic <= constant),
        );
    }
    report.push(
        Stat::new("summary")
            .uint("primes_checked", validation.len() as u64)
            .flag("all_within_bound", ok),
    );
    report.verdict = Verdict::from_checks(ok);
    Ok(BoundCheck {
        report,
        constant: Some(constant),
        calibration,
        validation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Row {
    pub a: u64,
    pub value: Complex64,
    pub divisor_log_sum: f64,
    pub bound: f64,
    pub ratio: f64,
    pub chain_lhs: f64,
    pub chain_rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Check {
    pub report: Report,
    /// `(K₁, K₂, K₃)`, margin not included.
    pub constants: Option<(f64, f64, f64)>,
    pub rows: Vec<Theorem3Row>,
}

fn divisor_log_sum(a: u64, eta: f64, t: &FactorTable) -> Result<f64> {
    Ok(t.divisors(a)?
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| (d as f64).ln().powf(-eta))
        .sum())
}

/// Checks `|F(a)| ≤ K₁|G(1)| + K₂ + K₃·Σ_{d|a, d>1} (log d)^(-η)`.
///
/// `K₁ = 1` covers the `q = 1` term exactly. `K₂` is the largest excess
/// `|F(a)| - |G(1)|` among calibration arguments with an empty divisor sum
/// (only `a = 1`), and `K₃` the largest remaining excess per unit of
/// divisor sum. The bound, with [`CALIBRATION_MARGIN`], is then asserted on
/// `a_range` together with the truncated inequality
/// `Σ_{2≤q≤x} (a,q)|G(q)| ≤ Σ_{d|a} d·Σ_{2≤q≤x, d|q} |G(q)|`.
pub fn theorem3_verifier(
    g: &RamanujanCoefficients,
    eta: f64,
    calibration: &[u64],
    a_range: &[u64],
    x: u64,
    t: &FactorTable,
) -> Result<Theorem3Check> {
    const CLAIM: &str = "F(a) = O(|G(1)|) + O(1) + O(sum_{d|a,d>1} (log d)^(-eta))";
    let (gate, refused) = gate_or_report(CLAIM, g, eta, t)?;
    if let Some(report) = refused {
        return Ok(Theorem3Check {
            report,
            constants: None,
            rows: Vec::new(),
        });
    }
    t.check("x", x)?;
    let g1 = g.coefficient(1, t)?.norm();
    let abs_g: Vec<f64> = (0..=x)
        .map(|q| if q == 0 { Ok(0.0) } else { Ok(g.coefficient(q, t)?.norm()) })
        .collect::<Result<_>>()?;

    let mut calib = Vec::with_capacity(calibration.len());
    for &a in calibration {
        let f = evaluate_expansion(g, a, &[x], t)?.value();
        calib.push((a, (f.norm() - g1).max(0.0), divisor_log_sum(a, eta, t)?));
    }
    let k2 = calib
        .iter()
        .filter(|c| c.2 == 0.0)
        .map(|c| c.1)
        .fold(0.0, f64::max);
    let k3 = calib
        .iter()
        .filter(|c| c.2 > 0.0)
        .map(|c| (c.1 - k2).max(0.0) / c.2)
        .fold(0.0, f64::max);

    let mut rows = Vec::with_capacity(a_range.len());
    for &a in a_range {
        let value = evaluate_expansion(g, a, &[x], t)?.value();
        let s = divisor_log_sum(a, eta, t)?;
        let bound = CALIBRATION_MARGIN * (g1 + k2 + k3 * s);
        let ratio = if bound > 0.0 {
            value.norm() / bound
        } else if value.norm() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let chain_lhs: f64 = (2..=x).map(|q| a.gcd(&q) as f64 * abs_g[q as usize]).sum();
        let mut chain_rhs = 0.0;
        for d in t.divisors(a)? {
            let mut inner = 0.0;
            let mut q = d.max(2).div_ceil(d) * d;
            while q <= x {
                inner += abs_g[q as usize];
                q += d;
            }
            chain_rhs += d as f64 * inner;
        }
        rows.push(Theorem3Row {
            a,
            value,
            divisor_log_sum: s,
            bound,
            ratio,
            chain_lhs,
            chain_rhs,
        });
    }

    let mut report = Report::new(
        CLAIM,
        Hypothesis {
            eta: Some(eta),
            q: Some(x),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    report.push(
        Stat::new("fitted constants")
            .real("K1", 1.0)
            .real("K2", k2)
            .real("K3", k3)
            .real("G1_abs", g1)
            .real("margin", CALIBRATION_MARGIN),
    );
    let mut ok = true;
    for r in &rows {
        let chain_ok = r.chain_lhs <= r.chain_rhs * (1.0 + 1e-12);
        ok &= r.ratio <= 1.0 && chain_ok;
        report.push(
            Stat::new("F(a)")
                .uint("a", r.a)
                .complex("value", r.value)
                .real("divisor_log_sum", r.divisor_log_sum)
                .real("bound", r.bound)
                .real("ratio", r.ratio)
                .real("chain_lhs", r.chain_lhs)
                .real("chain_rhs", r.chain_rhs)
                .flag("chain_ok", chain_ok),
        );
    }
    report.verdict = Verdict::from_checks(ok);
    Ok(Theorem3Check {
        report,
        constants: Some((1.0, k2, k3)),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsoluteConvergenceRow {
    pub a: u64,
    pub series: SeriesReport,
    /// `(Q, Σ_{q≤Q} |G(q)c_q(a)| / (1 + d(a)))` per requested checkpoint.
    pub ratios: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsoluteConvergenceCheck {
    pub report: Report,
    pub rows: Vec<AbsoluteConvergenceRow>,
    pub max_ratio: f64,
}

/// Partial sums of `Σ_q |G(q)·c_q(a)|` against `1 + d(a)`.
///
/// An argument whose series is not plausibly finite flags the expansion as
/// not absolutely convergent and fails the report.
pub fn absolute_convergence_verifier(
    g: &RamanujanCoefficients,
    eta: Option<f64>,
    a_range: &[u64],
    q_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<AbsoluteConvergenceCheck> {
    let Some(&q_max) = q_checkpoints.last() else {
        return Err(Error::invalid("need at least one checkpoint"));
    };
    if q_checkpoints.windows(2).any(|w| w[0] >= w[1]) || q_checkpoints[0] == 0 {
        return Err(Error::invalid("checkpoints must be positive and strictly increasing"));
    }
    t.check("Q", q_max)?;
    let coeffs: Vec<f64> = (1..=q_max)
        .map(|q| Ok(g.coefficient(q, t)?.norm()))
        .collect::<Result<_>>()?;

    let mut report = Report::new(
        "sum_q |G(q) c_q(a)| << 1 + d(a)",
        Hypothesis {
            eta,
            q: Some(q_max),
        },
    );
    let mut rows = Vec::with_capacity(a_range.len());
    let mut max_ratio = 0.0f64;
    let mut ok = true;
    for &a in a_range {
        let mut terms = Vec::with_capacity(q_max as usize);
        for q in 1..=q_max {
            let c = cq_kluyver(q, a, t)?;
            terms.push(coeffs[q as usize - 1] * c.unsigned_abs() as f64);
        }
        let norm = 1.0 + t.num_divisors(a)? as f64;
        let mut ratios = Vec::with_capacity(q_checkpoints.len());
        let mut acc = 0.0;
        let mut q = 0usize;
        for &x in q_checkpoints {
            while q < x as usize {
                acc += terms[q];
                q += 1;
            }
            ratios.push((x, acc / norm));
        }
        let series = if g.support_max().is_some_and(|m| m <= q_max) {
            SeriesReport {
                verdict: SeriesVerdict::PlausiblyFinite,
                ..assess_series(&terms, EXACT_TOLERANCE)
            }
        } else {
            assess_series(&terms, DEFAULT_SERIES_TOLERANCE)
        };
        let absolutely = series.verdict == SeriesVerdict::PlausiblyFinite;
        ok &= absolutely;
        let last = ratios.last().map(|r| r.1).unwrap_or(0.0);
        max_ratio = max_ratio.max(last);
        let mut stat = Stat::new("absolute series")
            .uint("a", a)
            .value("series", series.to_json())
            .flag("absolutely_convergent", absolutely);
        for &(x, r) in &ratios {
            stat = stat.real(&format!("ratio_Q{x}"), r);
        }
        report.push(stat);
        rows.push(AbsoluteConvergenceRow { a, series, ratios });
    }
    report.push(Stat::new("summary").real("max_ratio", max_ratio));
    report.verdict = Verdict::from_checks(ok);
    Ok(AbsoluteConvergenceCheck {
        report,
        rows,
        max_ratio,
    })
}

/// Null-function uniqueness check.
///
/// When `G` passes the decay gate at `eta > 1` and its expansion vanishes on
/// `1..=a_max` (last two checkpoints within tolerance), the Wintner
/// coefficients recovered from those values must vanish too.
pub fn corollary2_witness(
    g: &RamanujanCoefficients,
    eta: f64,
    a_max: u64,
    x_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<Report> {
    const CLAIM: &str = "no non-trivial expansion of 0 with eta-decay, eta > 1";
    let (gate, refused) = gate_or_report(CLAIM, g, eta, t)?;
    if let Some(report) = refused {
        return Ok(report);
    }
    let mut report = Report::new(
        CLAIM,
        Hypothesis {
            eta: Some(eta),
            q: x_checkpoints.last().copied(),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    if eta <= 1.0 {
        report.push(Stat::new("gate").text("reason", "eta must exceed 1"));
        report.verdict = Verdict::HypothesisNotMet;
        return Ok(report);
    }
    let mut values = Vec::with_capacity(a_max as usize);
    let mut max_abs = 0.0f64;
    let mut stabilized = true;
    for a in 1..=a_max {
        let ev = evaluate_expansion(g, a, x_checkpoints, t)?;
        let tail: Vec<Complex64> = ev.checkpoints.iter().rev().take(2).map(|c| c.1).collect();
        stabilized &= tail.iter().all(|v| v.norm() < EXACT_TOLERANCE);
        max_abs = max_abs.max(ev.value().norm());
        values.push(ev.value());
    }
    report.push(
        Stat::new("expansion on 1..=a_max")
            .uint("a_max", a_max)
            .real("max_abs", max_abs)
            .flag("expands_zero", stabilized),
    );
    if !stabilized {
        report.verdict = Verdict::HypothesisNotMet;
        return Ok(report);
    }
    let tabulated = values.clone();
    let f = crate::transforms::ArithmeticFunctionView::new("expanded values", move |a| {
        tabulated.get(a as usize - 1).copied().unwrap_or_default()
    });
    let e = eratosthenes_transform(&f, a_max, t)?;
    let mut max_win = 0.0f64;
    for q in 1..=a_max {
        max_win = max_win.max(wintner_coefficient(&e, q)?.value.norm());
    }
    let ok = max_win < EXACT_TOLERANCE;
    report.push(Stat::new("recovered Wintner coefficients").real("max_abs", max_win));
    report.verdict = Verdict::from_checks(ok);
    Ok(report)
}

/// Recovery of a finitely supported `G` from `F(a) = Σ_{q ∈ S} G(q)·c_q(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRecovery {
    /// `(q, G(q), Win_q F, Car_q F)` for `1 ≤ q ≤ max(S)`.
    pub rows: Vec<(u64, Complex64, Complex64, Complex64)>,
    pub max_wintner_residual: f64,
    pub max_carmichael_residual: f64,
}

/// Tabulates `F` from `G`, then recomputes `G` through the Wintner
/// transform of `F'` and the exact-period Carmichael mean.
pub fn finite_recovery(g: &RamanujanCoefficients, t: &FactorTable) -> Result<FiniteRecovery> {
    let Some(top) = g.support_max() else {
        return Err(Error::invalid("recovery needs finitely supported coefficients"));
    };
    let top = top.max(1);
    let f = g.finite_expansion(t)?.to_view();
    let e = eratosthenes_transform(&f, 2 * top, t)?.with_support_bound(top)?;
    let mut rows = Vec::with_capacity(top as usize);
    let (mut win_res, mut car_res) = (0.0f64, 0.0f64);
    for q in 1..=top {
        let want = g.coefficient(q, t)?;
        let win = wintner_coefficient(&e, q)?.value;
        let car = carmichael_coefficient(&f, q, &[], t)?.value;
        win_res = win_res.max((win - want).norm());
        car_res = car_res.max((car - want).norm());
        rows.push((q, want, win, car));
    }
    Ok(FiniteRecovery {
        rows,
        max_wintner_residual: win_res,
        max_carmichael_residual: car_res,
    })
}

/// Checks `|Win_q F|·q·(log q)^(η-1) ≤ K` for `2 ≤ q ≤ q_max`, with `F'`
/// from the Lucht series truncated at `d·K ≤ coefficient_limit`.
///
/// `K` is the largest statistic over `2 ≤ q ≤ calibration_max` times
/// [`CALIBRATION_MARGIN`].
pub fn remark7_verifier(
    g: &RamanujanCoefficients,
    eta: f64,
    calibration_max: u64,
    q_max: u64,
    coefficient_limit: u64,
    t: &FactorTable,
) -> Result<BoundCheck> {
    const CLAIM: &str = "Win_q F << (log q)^(1-eta) / q";
    let (gate, refused) = gate_or_report(CLAIM, g, eta, t)?;
    if let Some(report) = refused {
        return Ok(BoundCheck {
            report,
            constant: None,
            calibration: Vec::new(),
            validation: Vec::new(),
        });
    }
    if calibration_max < 2 || q_max < calibration_max {
        return Err(Error::invalid("need 2 ≤ calibration_max ≤ q_max"));
    }
    let e = lucht_eratosthenes_table(g, coefficient_limit, coefficient_limit, t)?;
    let mut rows = Vec::with_capacity(q_max as usize - 1);
    for q in 2..=q_max {
        let est = wintner_coefficient(&e, q)?;
        let qf = q as f64;
        rows.push(BoundRow {
            arg: q,
            value: est.value,
            statistic: est.value.norm() * qf * qf.ln().powf(eta - 1.0),
            tail_bound: est.tail_bound,
        });
    }
    let (calibration, validation): (Vec<BoundRow>, Vec<BoundRow>) =
        rows.into_iter().partition(|r| r.arg <= calibration_max);
    let constant = fit_constant(calibration.iter().map(|r| r.statistic));
    let worst = validation
        .iter()
        .chain(&calibration)
        .max_by(|a, b| a.statistic.total_cmp(&b.statistic))
        .cloned();
    let ok = validation.iter().all(|r| r.statistic <= constant);

    let mut report = Report::new(
        CLAIM,
        Hypothesis {
            eta: Some(eta),
            q: Some(q_max),
        },
    );
    report.push(gate.stat().text("coefficients", g.label()));
    report.push(
        Stat::new("fitted constant")
            .real("constant", constant)
            .real("margin", CALIBRATION_MARGIN)
            .uint("calibration_max", calibration_max)
            .uint("coefficient_limit", coefficient_limit),
    );
    if let Some(w) = worst {
        report.push(
            Stat::new("largest statistic")
                .uint("q", w.arg)
                .complex("win", w.value)
                .real("statistic", w.statistic),
        );
    }
    for r in validation.iter().filter(|r| [101, 200, 300, 400, q_max].contains(&r.arg)) {
        report.push(
            Stat::new("Win_q")
                .uint("q", r.arg)
                .complex("value", r.value)
                .real("statistic", r.statistic)
                .flag("within_bound", r.statistic <= constant),
        );
    }
    report.verdict = Verdict::from_checks(ok);
    Ok(BoundCheck {
        report,
        constant: Some(constant),
        calibration,
        validation,
    })
}

/// Distance of expansion partial sums from their target at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub a: u64,
    pub target: Complex64,
    pub errors: Vec<(u64, f64)>,
    /// Each checkpoint strictly improves on the previous one.
    pub decreasing: bool,
    /// Least-squares slope of `log error` against `log x`, for context.
    pub fitted_slope: Option<f64>,
}

impl TrendCheck {
    pub fn stat(&self, label: &str) -> Stat {
        let errors: Vec<serde_json::Value> = self
            .errors
            .iter()
            .map(|&(x, e)| serde_json::Value::Array(vec![x.into(), crate::report::real(e)]))
            .collect();
        Stat::new("trend")
            .text("coefficients", label)
            .uint("a", self.a)
            .complex("target", self.target)
            .value("errors", errors.into())
            .opt_real("fitted_slope", self.fitted_slope)
            .flag("decreasing", self.decreasing)
    }
}

pub fn trend_check(
    g: &RamanujanCoefficients,
    a: u64,
    target: Complex64,
    x_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<TrendCheck> {
    let ev = evaluate_expansion(g, a, x_checkpoints, t)?;
    let errors: Vec<(u64, f64)> = ev
        .checkpoints
        .iter()
        .map(|&(x, v)| (x, (v - target).norm()))
        .collect();
    let decreasing = errors.windows(2).all(|w| w[1].1 < w[0].1);
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .filter(|e| e.1 > 0.0)
        .map(|&(x, e)| ((x as f64).ln(), e.ln()))
        .collect();
    let fitted_slope = (pts.len() >= 2).then(|| least_squares_slope(&pts));
    Ok(TrendCheck {
        a,
        target,
        errors,
        decreasing,
        fitted_slope,
    })
}

/// Trend checks for the expansions of `0` by `1/q` and `1/φ(q)` and of
/// `d(a)` by `-log(q)/q`.
///
/// The verdict is `trend-only` when every error sequence strictly
/// decreases and `fail` otherwise.
pub fn zero_expansion_trends(
    zero_args: &[u64],
    divisor_args: &[u64],
    x_checkpoints: &[u64],
    t: &FactorTable,
) -> Result<(Report, Vec<TrendCheck>)> {
    let mut report = Report::new(
        "expansions of 0 and d(a) converge (trend only)",
        Hypothesis {
            eta: None,
            q: x_checkpoints.last().copied(),
        },
    );
    let mut checks = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    for g in [RamanujanCoefficients::ramanujan_r0(), RamanujanCoefficients::hardy_h0()] {
        for &a in zero_args {
            let c = trend_check(&g, a, zero, x_checkpoints, t)?;
            report.push(c.stat(g.label()));
            checks.push(c);
        }
    }
    let dl = RamanujanCoefficients::divisor_log();
    for &a in divisor_args {
        let target = Complex64::new(t.num_divisors(a)? as f64, 0.0);
        let c = trend_check(&dl, a, target, x_checkpoints, t)?;
        report.push(c.stat(dl.label()));
        checks.push(c);
    }
    let ok = checks.iter().all(|c| c.decreasing);
    report.push(
        Stat::new("summary")
            .uint("sequences", checks.len() as u64)
            .uint("decreasing", checks.iter().filter(|c| c.decreasing).count() as u64),
    );
    report.verdict = if ok { Verdict::TrendOnly } else { Verdict::Fail };
    Ok((report, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::inverse_eratosthenes;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn table() -> FactorTable {
        FactorTable::new(200_000).unwrap()
    }

    #[test]
    fn closed_forms() {
        let t = table();
        assert_eq!(RamanujanCoefficients::ramanujan_r0().coefficient(4, &t).unwrap(), c(0.25));
        assert_eq!(RamanujanCoefficients::hardy_h0().coefficient(12, &t).unwrap(), c(0.25));
        assert_eq!(
            RamanujanCoefficients::divisor_log().coefficient(3, &t).unwrap(),
            c(-(3f64.ln()) / 3.0)
        );
        let g = RamanujanCoefficients::power_log_decay(1.5, 2.0).unwrap();
        assert_eq!(g.coefficient(1, &t).unwrap(), c(2.0 / 2f64.ln().powf(2.5)));
        assert!(RamanujanCoefficients::power_log_decay(0.0, 1.0).is_err());
        assert!(RamanujanCoefficients::table("bad", [(0, c(1.0))]).is_err());
        assert!(RamanujanCoefficients::table("nan", [(1, c(f64::NAN))]).is_err());
    }

    #[test]
    fn expansion_examples() {
        let t = table();
        let g = RamanujanCoefficients::table("e2", [(2, c(1.0))]).unwrap();
        let ev = evaluate_expansion(&g, 3, &[2, 10, 100], &t).unwrap();
        assert!(ev.checkpoints.iter().all(|&(_, v)| v == c(-1.0)));

        let dl = RamanujanCoefficients::divisor_log();
        let ev = evaluate_expansion(&dl, 1, &[1000, 10_000, 100_000], &t).unwrap();
        let errs: Vec<f64> = ev.checkpoints.iter().map(|&(_, v)| (v - c(1.0)).norm()).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");

        let r0 = RamanujanCoefficients::ramanujan_r0();
        let ev = evaluate_expansion(&r0, 1, &[1000, 10_000, 100_000], &t).unwrap();
        let errs: Vec<f64> = ev.checkpoints.iter().map(|&(_, v)| v.norm()).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");

        assert!(evaluate_expansion(&r0, 1, &[10, 10], &t).is_err());
        assert!(evaluate_expansion(&r0, 1, &[300_000], &t).is_err());
    }

    #[test]
    fn lucht_examples() {
        let t = table();
        let g = RamanujanCoefficients::table("3 + c_2", [(1, c(3.0)), (2, c(1.0))]).unwrap();
        assert_eq!(lucht_expansion(&g, 1, 100, &t).unwrap().value, c(2.0));
        assert_eq!(lucht_expansion(&g, 2, 100, &t).unwrap().value, c(2.0));
        let f3 = lucht_expansion(&g, 3, 100, &t).unwrap();
        assert_eq!(f3.value, c(0.0));
        assert!(f3.exact && f3.converged);

        let single = RamanujanCoefficients::table("5", [(1, c(5.0))]).unwrap();
        for d in 1..=20 {
            let want = if d == 1 { 5.0 } else { 0.0 };
            assert_eq!(lucht_expansion(&single, d, 50, &t).unwrap().value, c(want));
        }

        let r0 = RamanujanCoefficients::ramanujan_r0();
        let est = lucht_expansion(&r0, 1, 100_000, &t).unwrap();
        let mags: Vec<f64> = est.checkpoints.iter().map(|c| c.1.norm()).collect();
        assert!(mags[2] < 1e-3, "{mags:?}");

        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let est = lucht_expansion(&g, 10, 1000, &t).unwrap();
        let tail = est.tail_bound.unwrap();
        assert!((tail - 1.0 / (1.5 * 10_000f64.ln().powf(1.5))).abs() < 1e-15);
        let far = lucht_expansion(&g, 10, 100_000, &t).unwrap();
        assert!((far.value - est.value).norm() <= tail);
    }

    #[test]
    fn lucht_table_regroups_into_expansion() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let l = 5000;
        let e = lucht_eratosthenes_table(&g, 200, l, &t).unwrap();
        for a in 1..=200 {
            let lhs = inverse_eratosthenes(&e, a).unwrap();
            // Σ_{d|a} d Σ_{dK ≤ L} μ(K) G(dK) = Σ_{q ≤ L} G(q) c_q(a)
            let rhs = evaluate_expansion(&g, a, &[l], &t).unwrap().value();
            assert!((lhs - rhs).norm() < 1e-12, "a = {a}");
        }
        assert!(matches!(e.provenance(), Provenance::LuchtSeries { tail_bound: Some(_), .. }));
    }

    #[test]
    fn decay_profile_examples() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let p = eta_decay_profile(&g, 1.5, 10_000, &t).unwrap();
        assert!(p.sup_statistic < 1.0);

        let dl = RamanujanCoefficients::divisor_log();
        let p = eta_decay_profile(&dl, 0.5, 10_000, &t).unwrap();
        let closed = 10_000f64.ln().powf(2.5);
        assert!((p.sup_statistic - closed).abs() < 1e-9 * closed);
        assert_eq!(p.q_argmax, 10_000);
        let p2 = eta_decay_profile(&dl, 0.5, 20_000, &t).unwrap();
        let expected_ratio = (20_000f64.ln() / 10_000f64.ln()).powf(2.5);
        assert!((p2.sup_statistic / p.sup_statistic - expected_ratio).abs() < 1e-9);

        let one = RamanujanCoefficients::table("5", [(1, c(5.0))]).unwrap();
        assert_eq!(eta_decay_profile(&one, 1.0, 100, &t).unwrap().sup_statistic, 0.0);
        assert!(eta_decay_profile(&one, 1.0, 1, &t).is_err());
    }

    #[test]
    fn gate_separates_families() {
        let t = table();
        let good = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        assert!(decay_hypothesis(&good, 1.5, &t).unwrap().met);
        assert!(!decay_hypothesis(&good, 2.0, &t).unwrap().met);
        for bad in [
            RamanujanCoefficients::divisor_log(),
            RamanujanCoefficients::ramanujan_r0(),
            RamanujanCoefficients::hardy_h0(),
        ] {
            assert!(!decay_hypothesis(&bad, 0.5, &t).unwrap().met, "{}", bad.label());
        }
    }

    #[test]
    fn theorem1_refuses_without_decay() {
        let t = table();
        let r = theorem1_verifier(&RamanujanCoefficients::divisor_log(), 1.5, &[2, 3], &[10], 100, &t)
            .unwrap();
        assert_eq!(r.report.verdict, Verdict::HypothesisNotMet);
        assert!(r.constant.is_none());
    }

    #[test]
    fn theorem1_finite_support() {
        let t = table();
        let g = RamanujanCoefficients::table("small", [(1, c(1.0)), (3, c(-2.0))]).unwrap();
        let r = theorem1_verifier(&g, 1.5, &[5, 6, 7], &[10, 100, 1000], 1000, &t).unwrap();
        assert!(r.passed());
        assert!(r.validation.iter().all(|row| row.statistic == 0.0));
    }

    #[test]
    fn corollary1_constant_function() {
        let t = table();
        let g = RamanujanCoefficients::table("one", [(1, c(4.0))]).unwrap();
        let r = corollary1_verifier(&g, 1.5, 2, 100, 50, 10_000, &t).unwrap();
        assert!(r.passed());
        assert!(r.validation.iter().all(|row| row.value == c(0.0)));
    }

    #[test]
    fn prime_difference_matches_direct_evaluation() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let x = 20_000;
        for a0 in [1u64, 2, 6] {
            let base = evaluate_expansion(&g, a0, &[x], &t).unwrap().value();
            for p in [5u64, 7, 101, 997] {
                let direct = evaluate_expansion(&g, a0 * p, &[x], &t).unwrap().value() - base;
                let fast = expansion_difference_along_prime(&g, a0, p, x, &t).unwrap();
                assert!((direct - fast).norm() < 1e-12, "a0 = {a0}, p = {p}");
            }
        }
    }

    #[test]
    fn corollary1_a0_one_is_theorem1_at_primes() {
        // F(p) - F(1) = F'(p) when a0 = 1
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let x = 50_000;
        let e = lucht_eratosthenes_table(&g, 100, x, &t).unwrap();
        for p in [2u64, 3, 5, 7, 11, 97] {
            let diff = expansion_difference_along_prime(&g, 1, p, x, &t).unwrap();
            assert!((diff - e.value(p).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn theorem3_examples() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let calibration: Vec<u64> = (1..=64).collect();
        let r = theorem3_verifier(&g, 1.5, &calibration, &[1, 2, 6, 12, 30, 210], 20_000, &t).unwrap();
        assert!(r.report.verdict == Verdict::Pass, "{:?}", r.rows);
        assert_eq!(r.rows[0].divisor_log_sum, 0.0);
        assert!(r.rows.iter().all(|row| row.ratio <= 1.0 && row.chain_lhs <= row.chain_rhs));

        // the |G(1)| term vanishes when G(1) = 0
        let shifted = RamanujanCoefficients::custom(
            "G without q = 1",
            |q| if q == 1 { c(0.0) } else { c(1.0 / (q as f64 * (q as f64 + 1.0).ln().powf(2.5))) },
            Some(EtaDecay { eta: 1.5, constant: 1.0 }),
        );
        let r = theorem3_verifier(&shifted, 1.5, &calibration, &[6], 20_000, &t).unwrap();
        assert_eq!(r.report.statistics[1].get("G1_abs").unwrap().as_f64(), Some(0.0));
    }

    #[test]
    fn absolute_convergence_examples() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let r = absolute_convergence_verifier(&g, Some(1.5), &[1, 12], &[1000, 10_000, 100_000], &t)
            .unwrap();
        assert_eq!(r.report.verdict, Verdict::Pass);
        let one: f64 = (1..=100_000u64)
            .map(|q| g.coefficient(q, &t).unwrap().norm() * t.mobius(q).unwrap().abs() as f64)
            .sum();
        assert!((r.rows[0].ratios[2].1 * 2.0 - one).abs() < 1e-9);

        let r0 = RamanujanCoefficients::ramanujan_r0();
        let r = absolute_convergence_verifier(&r0, None, &[2], &[1000, 10_000, 100_000], &t).unwrap();
        assert_eq!(r.rows[0].series.verdict, SeriesVerdict::Diverging);
        assert_eq!(r.report.verdict, Verdict::Fail);
    }

    #[test]
    fn corollary2_examples() {
        let t = table();
        let zero = RamanujanCoefficients::table("zero", []).unwrap();
        let r = corollary2_witness(&zero, 1.5, 50, &[100, 200], &t).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let r0 = RamanujanCoefficients::ramanujan_r0();
        let r = corollary2_witness(&r0, 1.5, 50, &[100, 200], &t).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        let nonzero = RamanujanCoefficients::table("g", [(3, c(1.0))]).unwrap();
        let r = corollary2_witness(&nonzero, 1.5, 50, &[100, 200], &t).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn finite_recovery_examples() {
        let t = table();
        let g = RamanujanCoefficients::table(
            "g",
            [(1, c(2.0)), (4, c(-1.5)), (6, c(0.25)), (12, c(3.0))],
        )
        .unwrap();
        let r = finite_recovery(&g, &t).unwrap();
        assert_eq!(r.rows.len(), 12);
        assert!(r.max_wintner_residual < 1e-9 && r.max_carmichael_residual < 1e-9);
        assert!(finite_recovery(&RamanujanCoefficients::ramanujan_r0(), &t).is_err());
    }

    #[test]
    fn remark7_examples() {
        let t = table();
        let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
        let r = remark7_verifier(&g, 1.5, 100, 500, 20_000, &t).unwrap();
        assert!(r.passed(), "{:?}", r.report.to_json());
        // Win recovers G when the Lucht table and the Wintner sum share one cut
        for row in r.validation.iter().take(20) {
            let want = g.coefficient(row.arg, &t).unwrap();
            assert!((row.value - want).norm() < 1e-12, "q = {}", row.arg);
        }
        let r = remark7_verifier(&RamanujanCoefficients::divisor_log(), 1.5, 100, 500, 20_000, &t).unwrap();
        assert_eq!(r.report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn trend_examples() {
        let t = table();
        let dl = RamanujanCoefficients::divisor_log();
        let c1 = trend_check(&dl, 1, c(1.0), &[1000, 10_000, 100_000], &t).unwrap();
        assert!(c1.decreasing);
        assert!(c1.fitted_slope.unwrap() < 0.0);
        let (report, checks) = zero_expansion_trends(&[1], &[1], &[1000, 10_000, 100_000], &t).unwrap();
        assert_eq!(checks.len(), 3);
        assert_eq!(report.verdict, Verdict::TrendOnly);
    }

    #[test]
    fn finite_expansion_is_tabulated() {
        let t = table();
        let g = RamanujanCoefficients::table("g", [(1, c(3.0)), (2, c(1.0)), (3, c(-0.5))]).unwrap();
        let f = g.finite_expansion(&t).unwrap();
        assert_eq!(f.period(), 6);
        for a in 1..=30 {
            let direct = evaluate_expansion(&g, a, &[3], &t).unwrap().value();
            assert!((f.eval(a) - direct).norm() < 1e-12);
        }
    }
}
