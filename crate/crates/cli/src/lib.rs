//! Verification suites behind the `gre` binary.

use std::fmt;
use std::sync::Arc;

use clap::ValueEnum;
use gre_core::expansions::{
    absolute_convergence_verifier, corollary1_verifier, corollary2_witness, finite_recovery,
    lucht_eratosthenes_table, remark7_verifier, theorem1_verifier, theorem3_verifier,
    zero_expansion_trends, RamanujanCoefficients,
};
use gre_core::number_theory::FactorTable;
use gre_core::periodic_correlations::{
    build_counterexample_one, correlation_eratosthenes, diverts_values, ippify, reef_gap_report,
    theorem4_verifier, verify_counterexample_identity, Classification, PeriodicFunction,
};
use gre_core::ramanujan_sums::{build_cq_table, cq_direct, cq_holder, cq_kluyver};
use gre_core::report::{real, Hypothesis, Stat};
use gre_core::transforms::{
    eratosthenes_transform, inverse_eratosthenes_all, wintner_assumption_check,
    weighted_coefficient_sum, ArithmeticFunctionView, SeriesVerdict,
};
use gre_core::{Error, Report, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    CsumIdentities,
    TransformsRoundtrip,
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Corollary1,
    Corollary2,
    Counterexample,
    ZeroExpansions,
    Remark7,
    Remark8,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::CsumIdentities => "csum-identities",
            Suite::TransformsRoundtrip => "transforms-roundtrip",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Corollary1 => "corollary1",
            Suite::Corollary2 => "corollary2",
            Suite::Counterexample => "counterexample",
            Suite::ZeroExpansions => "zero-expansions",
            Suite::Remark7 => "remark7",
            Suite::Remark8 => "remark8",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub sieve_limit: u64,
    pub eta: f64,
    pub p0: u64,
    pub format: Format,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            sieve_limit: 1_000_000,
            eta: 1.5,
            p0: 5,
            format: Format::Json,
            seed: 1,
        }
    }
}

#[derive(Debug)]
pub enum SuiteError {
    Usage(String),
    Resource(String),
    Failed(String),
}

impl SuiteError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SuiteError::Usage(_) => 2,
            SuiteError::Resource(_) => 3,
            SuiteError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::Usage(m) => write!(f, "usage: {m}"),
            SuiteError::Resource(m) => write!(f, "resource: {m}"),
            SuiteError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for SuiteError {}

impl From<Error> for SuiteError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => SuiteError::Usage(e.to_string()),
            Error::Resource(_) | Error::OutOfRange { .. } => SuiteError::Resource(e.to_string()),
            Error::Evaluation { ref message, .. } if message.contains("outside 1..=") => {
                SuiteError::Resource(e.to_string())
            }
            _ => SuiteError::Failed(e.to_string()),
        }
    }
}

type SuiteResult<T> = std::result::Result<T, SuiteError>;

/// Reports produced by one suite, plus a suite-specific CSV when one exists.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub reports: Vec<Report>,
    pub csv: Option<String>,
}

impl SuiteOutcome {
    /// Every report passed; a `trend-only` report counts as passed.
    pub fn passed(&self) -> bool {
        !self.reports.is_empty() && self.reports.iter().all(Report::passed)
    }

    pub fn to_json(&self, cfg: &SuiteConfig) -> Value {
        json!({
            "suite": self.suite.name(),
            "config": {
                "sieve_limit": cfg.sieve_limit,
                "eta": real(cfg.eta),
                "p0": cfg.p0,
                "seed": cfg.seed,
            },
            "reports": self.reports.iter().map(Report::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    /// The suite's own table when it has one, else `claim,index,key,value`
    /// rows flattened from the report statistics.
    pub fn to_csv(&self) -> String {
        if let Some(csv) = &self.csv {
            return csv.clone();
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["claim", "index", "key", "value"]).expect("in-memory write");
        for r in &self.reports {
            for (i, stat) in r.statistics.iter().enumerate() {
                for (k, v) in stat.entries() {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    w.write_record([r.claim.as_str(), &i.to_string(), k, &text])
                        .expect("in-memory write");
                }
            }
            w.write_record([r.claim.as_str(), "", "verdict", r.verdict.as_str()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn render(&self, cfg: &SuiteConfig) -> String {
        match cfg.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(cfg)).expect("plain JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteResult<SuiteOutcome> {
    if !(cfg.eta.is_finite() && cfg.eta > 0.0) {
        return Err(SuiteError::Usage(format!("--eta must be a positive real, got {}", cfg.eta)));
    }
    if cfg.suite == Suite::Theorem2 && cfg.eta <= 1.0 {
        return Err(SuiteError::Usage(format!(
            "theorem2 needs eta > 1, got {}",
            cfg.eta
        )));
    }
    let t = Arc::new(FactorTable::new(cfg.sieve_limit)?);
    let mut csv = None;
    let reports = match cfg.suite {
        Suite::CsumIdentities => csum_identities(&t, &mut csv)?,
        Suite::TransformsRoundtrip => transforms_roundtrip(cfg, &t)?,
        Suite::Theorem1 => vec![theorem1(cfg, &t)?],
        Suite::Theorem2 => theorem2(cfg, &t)?,
        Suite::Theorem3 => vec![theorem3(cfg, &t)?],
        Suite::Theorem4 => theorem4(cfg, &t)?,
        Suite::Corollary1 => corollary1(cfg, &t)?,
        Suite::Corollary2 => corollary2(cfg, &t)?,
        Suite::Counterexample => counterexample(cfg, &t, &mut csv)?,
        Suite::ZeroExpansions => vec![zero_expansions(&t)?],
        Suite::Remark7 => vec![remark7(cfg, &t)?],
        Suite::Remark8 => remark8(cfg, &t)?,
    };
    Ok(SuiteOutcome {
        suite: cfg.suite,
        reports,
        csv,
    })
}

fn power_log(cfg: &SuiteConfig) -> SuiteResult<RamanujanCoefficients> {
    Ok(RamanujanCoefficients::power_log_decay(cfg.eta, 1.0)?)
}

fn decades_up_to(limit: u64, from: u64, to: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = from;
    while x <= to.min(limit) {
        out.push(x);
        x *= 10;
    }
    out
}

fn csum_identities(t: &FactorTable, csv: &mut Option<String>) -> SuiteResult<Vec<Report>> {
    const N: u64 = 256;
    let mut report = Report::new(
        "c_q(a) by cosine sum, Hölder and Kluyver formulas agree",
        Hypothesis { eta: None, q: Some(N) },
    );
    let mut mismatches = 0u64;
    let mut gcd_violations = 0u64;
    let mut first_mismatch = None;
    for q in 1..=N {
        for a in 1..=N {
            let d = cq_direct(q, a)?;
            let h = cq_holder(q, a, t)?;
            let k = cq_kluyver(q, a, t)?;
            if d != h || h != k {
                mismatches += 1;
                first_mismatch.get_or_insert((q, a));
            }
            if d.unsigned_abs() > num_integer::gcd(q, a) {
                gcd_violations += 1;
            }
        }
    }
    let mut pairs = 0u64;
    let mut multiplicative_failures = 0u64;
    for q1 in 1..=200u64 {
        for q2 in 1..=200 / q1 {
            if num_integer::gcd(q1, q2) != 1 {
                continue;
            }
            pairs += 1;
            for a in 1..=N {
                if cq_kluyver(q1 * q2, a, t)? != cq_kluyver(q1, a, t)? * cq_kluyver(q2, a, t)? {
                    multiplicative_failures += 1;
                }
            }
        }
    }
    let mut stat = Stat::new("agreement")
        .uint("q_max", N)
        .uint("a_max", N)
        .uint("mismatches", mismatches)
        .uint("gcd_bound_violations", gcd_violations)
        .uint("coprime_pairs", pairs)
        .uint("multiplicativity_failures", multiplicative_failures);
    if let Some((q, a)) = first_mismatch {
        stat = stat.uint("first_mismatch_q", q).uint("first_mismatch_a", a);
    }
    report.push(stat);
    report.verdict =
        Verdict::from_checks(mismatches == 0 && gcd_violations == 0 && multiplicative_failures == 0);

    let table = build_cq_table(N, N, t)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf).expect("in-memory write");
    *csv = Some(String::from_utf8(buf).expect("ASCII table"));
    Ok(vec![report])
}

fn transforms_roundtrip(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let n = 2000.min(t.limit());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut exact_failures = 0u64;
    let mut float_residual = 0.0f64;
    for trial in 0..120 {
        let integer = trial < 100;
        let values: Vec<f64> = (0..n)
            .map(|_| {
                if integer {
                    rng.gen_range(-1000i64..=1000) as f64
                } else {
                    rng.gen_range(-1000.0..1000.0)
                }
            })
            .collect();
        let copy = values.clone();
        let f = ArithmeticFunctionView::real("sample", move |a| copy[a as usize - 1]);
        let back = inverse_eratosthenes_all(&eratosthenes_transform(&f, n, t)?);
        for (v, b) in values.iter().zip(&back) {
            if integer {
                if b.re != *v || b.im != 0.0 {
                    exact_failures += 1;
                }
            } else {
                float_residual = float_residual.max((b - Complex64::new(*v, 0.0)).norm());
            }
        }
    }
    let mut report = Report::new(
        "Möbius inversion recovers F from F'",
        Hypothesis { eta: None, q: Some(n) },
    );
    report.push(
        Stat::new("roundtrip")
            .uint("d_max", n)
            .uint("integer_functions", 100)
            .uint("exact_failures", exact_failures)
            .uint("float_functions", 20)
            .real("max_float_residual", float_residual)
            .uint("seed", cfg.seed),
    );
    report.verdict = Verdict::from_checks(exact_failures == 0 && float_residual < 1e-9);
    Ok(vec![report])
}

fn theorem1(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Report> {
    let g = power_log(cfg)?;
    let calibration: Vec<u64> = (2..=100).collect();
    let d_range = [10, 100, 1000, 10_000];
    let k_max = 1_000_000.min(t.limit());
    Ok(theorem1_verifier(&g, cfg.eta, &calibration, &d_range, k_max, t)?.report)
}

fn theorem2(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::new(
        "finite G is recovered as Win F and Car F",
        Hypothesis { eta: Some(cfg.eta), q: Some(12) },
    );
    let (mut worst_win, mut worst_car) = (0.0f64, 0.0f64);
    for trial in 0..20u64 {
        let mut entries = Vec::new();
        for q in 1..=12u64 {
            if rng.gen_bool(0.5) {
                entries.push((q, Complex64::new(rng.gen_range(-5.0..=5.0), 0.0)));
            }
        }
        if entries.is_empty() {
            entries.push((rng.gen_range(1..=12), Complex64::new(rng.gen_range(-5.0..=5.0), 0.0)));
        }
        let support: Vec<u64> = entries.iter().map(|e| e.0).collect();
        let g = RamanujanCoefficients::table(format!("trial {trial}"), entries)?;
        let r = finite_recovery(&g, t)?;
        worst_win = worst_win.max(r.max_wintner_residual);
        worst_car = worst_car.max(r.max_carmichael_residual);
        report.push(
            Stat::new("recovery")
                .uint("trial", trial)
                .value("support", support.into())
                .real("wintner_residual", r.max_wintner_residual)
                .real("carmichael_residual", r.max_carmichael_residual),
        );
    }
    report.push(
        Stat::new("summary")
            .real("max_wintner_residual", worst_win)
            .real("max_carmichael_residual", worst_car)
            .uint("seed", cfg.seed),
    );
    report.verdict = Verdict::from_checks(worst_win < 1e-9 && worst_car < 1e-9);

    // The hypotheses of the uniqueness argument, for the η-decay family.
    let g = power_log(cfg)?;
    let q_max = 100_000.min(t.limit());
    let weighted = weighted_coefficient_sum(&g, q_max, t)?;
    let e = lucht_eratosthenes_table(&g, q_max, q_max, t)?;
    let wa = wintner_assumption_check(&e);
    let mut context = Report::new(
        "series hypotheses for the eta-decay family",
        Hypothesis { eta: Some(cfg.eta), q: Some(q_max) },
    );
    context.push(
        Stat::new("weighted coefficient sum")
            .text("coefficients", g.label())
            .value("series", weighted.to_json()),
    );
    context.push(Stat::new("Wintner assumption").value("series", wa.to_json()));
    context.verdict = Verdict::TrendOnly;
    Ok(vec![report, context])
}

fn theorem3(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Report> {
    let g = power_log(cfg)?;
    let calibration: Vec<u64> = (1..=64).collect();
    let a_range: Vec<u64> = [2u64, 6, 12, 30, 210, 2310, 30030]
        .into_iter()
        .filter(|&a| a <= t.limit())
        .collect();
    let x = 100_000.min(t.limit());
    Ok(theorem3_verifier(&g, cfg.eta, &calibration, &a_range, x, t)?.report)
}

fn theorem4(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let ce = build_counterexample_one(cfg.p0, t)?;
    let diverting = theorem4_verifier(&ce.correlation_function()?, 25, t)?;
    let mono = PeriodicFunction::from_integers("monochromatic control", &vec![7; cfg.p0 as usize])?;
    let control = theorem4_verifier(&mono, 25, t)?;
    let mut gate = Report::new(
        "monochromatic functions are outside the diverting-values hypothesis",
        Hypothesis { eta: None, q: Some(cfg.p0) },
    );
    gate.push(Stat::new("control").text("verdict", control.verdict.as_str()));
    gate.verdict = Verdict::from_checks(control.report.verdict == Verdict::HypothesisNotMet);
    Ok(vec![diverting.report, gate])
}

fn corollary1(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let g = power_log(cfg)?;
    let x = 1_000_000.min(t.limit());
    [1u64, 2, 6]
        .into_iter()
        .map(|a0| Ok(corollary1_verifier(&g, cfg.eta, a0, 100, 1000, x, t)?.report))
        .collect()
}

fn corollary2(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let checkpoints = [500.min(t.limit()), 1000.min(t.limit())];
    if checkpoints[0] == checkpoints[1] {
        return Err(SuiteError::Resource("corollary2 needs a sieve limit of at least 1000".into()));
    }
    let zero = RamanujanCoefficients::table("zero", [])?;
    let main = corollary2_witness(&zero, cfg.eta, 50, &checkpoints, t)?;
    let r0 = corollary2_witness(&RamanujanCoefficients::ramanujan_r0(), cfg.eta, 50, &checkpoints, t)?;
    let nonzero = corollary2_witness(&power_log(cfg)?, cfg.eta, 50, &checkpoints, t)?;
    let mut controls = Report::new(
        "expansions of 0 without eta-decay, and decaying expansions of nonzero F, are excluded",
        Hypothesis { eta: Some(cfg.eta), q: Some(checkpoints[1]) },
    );
    controls.push(Stat::new("R0").text("verdict", r0.verdict.as_str()));
    controls.push(Stat::new("power-log decay").text("verdict", nonzero.verdict.as_str()));
    controls.verdict = Verdict::from_checks(
        r0.verdict == Verdict::HypothesisNotMet && nonzero.verdict == Verdict::HypothesisNotMet,
    );
    Ok(vec![main, controls])
}

fn counterexample(
    cfg: &SuiteConfig,
    t: &FactorTable,
    csv: &mut Option<String>,
) -> SuiteResult<Vec<Report>> {
    let ce = build_counterexample_one(cfg.p0, t)?;
    let a_max = 4 * cfg.p0;
    let identity = failed_as_report(
        "C(N, a) = c_p0(a - 1)",
        cfg.p0,
        verify_counterexample_identity(&ce, a_max),
    )?;
    let (gap_report, gap_csv) = match reef_gap_report(&ce, a_max, t) {
        Ok(gap) => {
            let mut buf = Vec::new();
            gap.write_csv(&mut buf).expect("in-memory write");
            (gap.report, Some(String::from_utf8(buf).expect("ASCII table")))
        }
        Err(e) => (
            failed_as_report("the correlation has no exact finite Ramanujan formula", cfg.p0, Err(e))?,
            None,
        ),
    };
    *csv = gap_csv;
    let theorem4 = theorem4_verifier(&ce.correlation_function()?, 25, t)?.report;

    // the square-free restriction keeps the values on reduced residues
    let e = correlation_eratosthenes(&ce.spec(), cfg.p0, t)?;
    let f = ce.correlation_function()?;
    let mut ipp = Report::new(
        "IPPification keeps F on reduced residues and still diverts values",
        Hypothesis { eta: None, q: Some(cfg.p0) },
    );
    let mut values = Vec::new();
    let mut agree = true;
    for a in 1..=cfg.p0 {
        let v = ippify(&e, a, t)?;
        if a < cfg.p0 {
            agree &= v == f.eval(a);
        }
        values.push(v);
    }
    let restricted = PeriodicFunction::new("IPPified correlation", values.clone())?;
    let class = diverts_values(&restricted)?;
    ipp.push(
        Stat::new("IPPified values")
            .value("values_re", values.iter().map(|v| real(v.re)).collect::<Vec<_>>().into())
            .flag("agrees_on_reduced_residues", agree)
            .flag("diverting", matches!(class, Classification::Diverting { .. })),
    );
    ipp.verdict = Verdict::from_checks(agree && matches!(class, Classification::Diverting { .. }));
    Ok(vec![identity, gap_report, theorem4, ipp])
}

fn failed_as_report(claim: &str, p0: u64, r: gre_core::Result<Report>) -> SuiteResult<Report> {
    match r {
        Ok(report) => Ok(report),
        Err(Error::Verification { at, message }) => {
            let mut report = Report::new(claim, Hypothesis { eta: None, q: Some(p0) });
            report.push(Stat::new("failure").uint("at", at).text("message", message));
            report.verdict = Verdict::Fail;
            Ok(report)
        }
        Err(e) => Err(e.into()),
    }
}

fn zero_expansions(t: &FactorTable) -> SuiteResult<Report> {
    let checkpoints = decades_up_to(t.limit(), 1000, 1_000_000);
    if checkpoints.len() < 2 {
        return Err(SuiteError::Resource(
            "zero-expansions needs a sieve limit of at least 10000".into(),
        ));
    }
    Ok(zero_expansion_trends(&[1, 2, 6], &[1, 2], &checkpoints, t)?.0)
}

fn remark7(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Report> {
    let g = power_log(cfg)?;
    let limit = 100_000.min(t.limit());
    Ok(remark7_verifier(&g, cfg.eta, 100, 500, limit, t)?.report)
}

fn remark8(cfg: &SuiteConfig, t: &FactorTable) -> SuiteResult<Vec<Report>> {
    let g = power_log(cfg)?;
    let checkpoints = decades_up_to(t.limit(), 1000, 100_000);
    if checkpoints.is_empty() {
        return Err(SuiteError::Resource("remark8 needs a sieve limit of at least 1000".into()));
    }
    let a_range: Vec<u64> = [1u64, 2, 6, 12, 30, 210].into_iter().filter(|&a| a <= t.limit()).collect();
    let main = absolute_convergence_verifier(&g, Some(cfg.eta), &a_range, &checkpoints, t)?.report;
    let control =
        absolute_convergence_verifier(&RamanujanCoefficients::ramanujan_r0(), None, &[2], &checkpoints, t)?;
    let mut flagged = Report::new(
        "R0 is not absolutely convergent at a = 2",
        Hypothesis { eta: None, q: checkpoints.last().copied() },
    );
    let verdict = control.rows[0].series.verdict;
    flagged.push(Stat::new("control").value("series", control.rows[0].series.to_json()));
    flagged.verdict = Verdict::from_checks(verdict == SeriesVerdict::Diverging);
    Ok(vec![main, flagged])
}
