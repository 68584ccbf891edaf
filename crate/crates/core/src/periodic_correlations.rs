//! Periodic functions, the diverting-values classifier, shifted
//! correlations `C_{f,g}(N,a)`, the prime-successor counterexample and its
//! finite Ramanujan formula, and IPPification.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::number_theory::FactorTable;
use crate::ramanujan_sums::{cq_kluyver, cq_period};
use crate::report::{real, Hypothesis, Report, Stat, Verdict};
use crate::transforms::{
    eratosthenes_at, eratosthenes_transform, ArithmeticFunctionView, EratosthenesTable,
    EXACT_TOLERANCE,
};

/// A function on the naturals given by its values on one period `1..=Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    label: String,
    values: Vec<Complex64>,
}

impl PeriodicFunction {
    /// `values[r - 1] = F(r)` for `r = 1..=Q`.
    pub fn new(label: impl Into<String>, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a periodic function needs at least one value"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("periodic function values must be finite"));
        }
        Ok(PeriodicFunction {
            label: label.into(),
            values,
        })
    }

    pub fn from_fn(
        label: impl Into<String>,
        period: u64,
        mut f: impl FnMut(u64) -> Complex64,
    ) -> Result<Self> {
        Self::new(label, (1..=period).map(&mut f).collect())
    }

    pub fn from_integers(label: impl Into<String>, values: &[i64]) -> Result<Self> {
        Self::new(
            label,
            values.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect(),
        )
    }

    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `F(a)` with `a` reduced into `1..=Q`; `a = 0` reads `F(Q)`.
    pub fn eval(&self, a: u64) -> Complex64 {
        let q = self.period();
        let r = a % q;
        self.values[if r == 0 { q - 1 } else { r - 1 } as usize]
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re.fract() == 0.0)
    }

    pub fn to_view(&self) -> ArithmeticFunctionView {
        let me = self.clone();
        ArithmeticFunctionView::new(self.label.clone(), move |a| me.eval(a))
            .with_period(self.period())
            .expect("tabulated values repeat with their own period")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Smallest reduced residue `a ≠ 1` with `F(a) ≠ F(1)`.
    Diverting { witness: u64 },
    Monochromatic,
}

/// Decides whether `F` diverts values on the reduced residues mod `Q`.
pub fn diverts_values(f: &PeriodicFunction) -> Result<Classification> {
    let q = f.period();
    if q <= 2 {
        return Err(Error::invalid(format!(
            "diverting values need a period above 2, got {q}"
        )));
    }
    let exact = f.is_integer_valued();
    let one = f.eval(1);
    for a in 2..q {
        if a.gcd(&q) != 1 {
            continue;
        }
        let v = f.eval(a);
        let differs = if exact {
            v != one
        } else {
            (v - one).norm() > EXACT_TOLERANCE
        };
        if differs {
            return Ok(Classification::Diverting { witness: a });
        }
    }
    Ok(Classification::Monochromatic)
}

#[derive(Debug, Clone)]
pub struct CorrelationSpec {
    pub f: ArithmeticFunctionView,
    pub g: ArithmeticFunctionView,
    pub n: u64,
}

impl CorrelationSpec {
    pub fn new(f: ArithmeticFunctionView, g: ArithmeticFunctionView, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("correlation length N must be at least 1"));
        }
        Ok(CorrelationSpec { f, g, n })
    }

    /// `a ↦ C_{f,g}(N, a)`.
    pub fn as_view(&self) -> ArithmeticFunctionView {
        let spec = self.clone();
        let label = format!("C[{}, {}](N = {})", self.f.label(), self.g.label(), self.n);
        ArithmeticFunctionView::fallible(label, move |a| correlation(&spec, a))
    }
}

/// `Σ_{n ≤ N} f(n)·g(n + a)`; only the declared support of `f` is visited.
pub fn correlation(spec: &CorrelationSpec, a: u64) -> Result<Complex64> {
    if a == 0 {
        return Err(Error::invalid("correlation shift must be at least 1"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut term = |n: u64| -> Result<()> {
        let fv = spec.f.evaluate(n)?;
        if fv != Complex64::new(0.0, 0.0) {
            let shifted = n.checked_add(a).ok_or(Error::Overflow("n + a"))?;
            acc += fv * spec.g.evaluate(shifted)?;
        }
        Ok(())
    };
    match spec.f.support_hint() {
        Some(support) => {
            for &n in support.range(1..=spec.n) {
                term(n)?;
            }
        }
        None => {
            for n in 1..=spec.n {
                term(n)?;
            }
        }
    }
    Ok(acc)
}

/// `f₀ = 1_{n₀}`, `g₀ = c_{p₀}` and `N = n₀`, so that `C(N, a) = c_{p₀}(a - 1)`.
#[derive(Debug, Clone)]
pub struct CounterexampleOne {
    pub p0: u64,
    pub n0: u64,
    pub n: u64,
    row: Vec<i64>,
}

impl CounterexampleOne {
    /// `c_{p₀}(a)` with `a` reduced into `1..=p₀`.
    pub fn cp0(&self, a: u64) -> i64 {
        let r = a % self.p0;
        self.row[if r == 0 { self.p0 - 1 } else { r - 1 } as usize]
    }

    pub fn spec(&self) -> CorrelationSpec {
        let f = ArithmeticFunctionView::indicator(format!("1_{{{}}}", self.n0), [self.n0])
            .expect("a one-point indicator vanishes off its point");
        let me = self.clone();
        let g = ArithmeticFunctionView::new(format!("c_{}", self.p0), move |a| {
            Complex64::new(me.cp0(a) as f64, 0.0)
        })
        .with_period(self.p0)
        .expect("Ramanujan sums are periodic");
        CorrelationSpec::new(f, g, self.n).expect("N = n0 is positive")
    }

    /// The correlation tabulated over one period in `a`.
    pub fn correlation_function(&self) -> Result<PeriodicFunction> {
        let spec = self.spec();
        let values = (1..=self.p0)
            .map(|a| correlation(&spec, a))
            .collect::<Result<Vec<_>>>()?;
        PeriodicFunction::new(format!("C(N = {}, a) for p0 = {}", self.n, self.p0), values)
    }
}

pub fn build_counterexample_one(p0: u64, t: &FactorTable) -> Result<CounterexampleOne> {
    if p0 <= 2 || !t.is_prime(p0)? {
        return Err(Error::invalid(format!("p0 must be an odd prime, got {p0}")));
    }
    // p0 - 1 itself is prime only for p0 = 3, and it lies below p0
    let found = t.primes_in_ap(p0, p0 - 1, 2, t.limit())?;
    let n0 = found
        .primes
        .iter()
        .copied()
        .find(|&p| p > p0)
        .ok_or_else(|| {
            Error::Resource(format!(
                "no prime ≡ -1 (mod {p0}) above {p0} up to {}",
                t.limit()
            ))
        })?;
    Ok(CounterexampleOne {
        p0,
        n0,
        n: n0,
        row: cq_period(p0, t)?,
    })
}

/// Asserts `C(N, a) = c_{p₀}(a - 1)` as exact integers for `1 ≤ a ≤ a_max`.
pub fn verify_counterexample_identity(ce: &CounterexampleOne, a_max: u64) -> Result<Report> {
    if a_max == 0 {
        return Err(Error::invalid("a_max must be at least 1"));
    }
    let spec = ce.spec();
    let mut report = Report::new(
        "C(N, a) = c_p0(a - 1)",
        Hypothesis {
            eta: None,
            q: Some(ce.p0),
        },
    );
    report.push(
        Stat::new("counterexample")
            .uint("p0", ce.p0)
            .uint("n0", ce.n0)
            .uint("N", ce.n),
    );
    let mut values = Vec::with_capacity(a_max as usize);
    for a in 1..=a_max {
        let c = correlation(&spec, a)?;
        let want = ce.cp0(a - 1);
        if c.im != 0.0 || c.re != want as f64 {
            return Err(Error::Verification {
                at: a,
                message: format!("C(N, {a}) = {c}, expected c_{}({}) = {want}", ce.p0, a - 1),
            });
        }
        values.push(want);
    }
    report.push(
        Stat::new("identity")
            .uint("a_max", a_max)
            .int("C_at_1", values[0])
            .value("values", values.iter().copied().collect())
            .flag("exact", true),
    );
    report.verdict = Verdict::Pass;
    Ok(report)
}

/// Coefficients `ĝ_Q(q)` of a finite Ramanujan formula for a correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReefSpec {
    pub g_hat: BTreeMap<u64, Complex64>,
    pub q_trunc: u64,
}

impl ReefSpec {
    pub fn new(g_hat: BTreeMap<u64, Complex64>, q_trunc: u64) -> Result<Self> {
        if let Some((&q, _)) = g_hat.iter().find(|(&q, _)| q == 0 || q > q_trunc) {
            return Err(Error::invalid(format!("coefficient index {q} outside 1..={q_trunc}")));
        }
        Ok(ReefSpec { g_hat, q_trunc })
    }

    /// `ĝ = 1_{p₀}`.
    pub fn counterexample(ce: &CounterexampleOne) -> Self {
        ReefSpec {
            g_hat: BTreeMap::from([(ce.p0, Complex64::new(1.0, 0.0))]),
            q_trunc: ce.p0,
        }
    }
}

/// `Σ_{q ≤ Q} ĝ(q)/φ(q) · Σ_{n ≤ N} f(n)c_q(n) · c_q(a)`, inner sums cached.
pub struct ReefEvaluator<'a> {
    reef: &'a ReefSpec,
    t: &'a FactorTable,
    inner: BTreeMap<u64, (Complex64, i64)>,
}

impl<'a> ReefEvaluator<'a> {
    pub fn new(
        f: &ArithmeticFunctionView,
        reef: &'a ReefSpec,
        n: u64,
        t: &'a FactorTable,
    ) -> Result<Self> {
        let mut inner = BTreeMap::new();
        for &q in reef.g_hat.keys() {
            let spec = CorrelationSpec::new(f.clone(), ramanujan_view(q, t)?, n)?;
            // shift 0 is not a correlation shift; sum f(n)c_q(n) directly
            let mut s = Complex64::new(0.0, 0.0);
            let mut add = |m: u64| -> Result<()> {
                let fv = spec.f.evaluate(m)?;
                if fv != Complex64::new(0.0, 0.0) {
                    s += fv * cq_kluyver(q, m, t)? as f64;
                }
                Ok(())
            };
            match spec.f.support_hint() {
                Some(support) => {
                    for &m in support.range(1..=n) {
                        add(m)?;
                    }
                }
                None => {
                    for m in 1..=n {
                        add(m)?;
                    }
                }
            }
            inner.insert(q, (s, t.totient(q)?));
        }
        Ok(ReefEvaluator { reef, t, inner })
    }

    /// `Σ_{n ≤ N} f(n)c_q(n)`.
    pub fn inner_sum(&self, q: u64) -> Option<Complex64> {
        self.inner.get(&q).map(|v| v.0)
    }

    pub fn rhs(&self, a: u64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&q, &g) in &self.reef.g_hat {
            let (s, phi) = self.inner[&q];
            acc += g / phi as f64 * s * cq_kluyver(q, a, self.t)? as f64;
        }
        Ok(acc)
    }
}

fn ramanujan_view(q: u64, t: &FactorTable) -> Result<ArithmeticFunctionView> {
    let row = cq_period(q, t)?;
    ArithmeticFunctionView::new(format!("c_{q}"), move |a| {
        let r = (a % q) as usize;
        Complex64::new(row[if r == 0 { q as usize - 1 } else { r - 1 }] as f64, 0.0)
    })
    .with_period(q)
}

pub fn reef_rhs(
    f: &ArithmeticFunctionView,
    reef: &ReefSpec,
    n: u64,
    a: u64,
    t: &FactorTable,
) -> Result<Complex64> {
    ReefEvaluator::new(f, reef, n, t)?.rhs(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReefRow {
    pub a: u64,
    pub lhs: i64,
    pub rhs: Complex64,
    /// `φ(p₀)·RHS`, an integer for the counterexample.
    pub rhs_scaled: i64,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReefGap {
    pub report: Report,
    pub rows: Vec<ReefRow>,
}

impl ReefGap {
    /// Shifts where the finite formula disagrees with the correlation.
    pub fn failure_set(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| !r.equal).map(|r| r.a).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "a,lhs_re,lhs_im,rhs_re,rhs_im,equal")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.a,
                real(r.lhs as f64),
                real(0.0),
                real(r.rhs.re),
                real(r.rhs.im),
                r.equal
            )?;
        }
        Ok(())
    }
}

/// Compares `C(N, a) = c_{p₀}(a - 1)` with the finite formula for `ĝ = 1_{p₀}`.
///
/// Both sides are compared exactly after multiplying by `φ(p₀)`. Asserts
/// `|LHS| ≥ 1` everywhere, `RHS = 1/(p₀ - 1)` off multiples of `p₀`,
/// equality on multiples of `p₀`, and at least one disagreement.
pub fn reef_gap_report(ce: &CounterexampleOne, a_max: u64, t: &FactorTable) -> Result<ReefGap> {
    if a_max < 2 * ce.p0 {
        return Err(Error::invalid(format!(
            "a_max = {a_max} must be at least 2·p0 = {}",
            2 * ce.p0
        )));
    }
    let spec = ce.spec();
    let reef = ReefSpec::counterexample(ce);
    let eval = ReefEvaluator::new(&spec.f, &reef, spec.n, t)?;
    let phi = t.totient(ce.p0)?;
    let inner = eval.inner_sum(ce.p0).unwrap_or_default();
    if inner.im != 0.0 || inner.re.fract() != 0.0 {
        return Err(Error::Invariant(format!("inner sum {inner} is not an integer")));
    }
    let inner = inner.re as i64;

    let fail = |a: u64, message: String| Err(Error::Verification { at: a, message });
    let mut rows = Vec::with_capacity(a_max as usize);
    for a in 1..=a_max {
        let lhs = ce.cp0(a - 1);
        let rhs = eval.rhs(a)?;
        let rhs_scaled = inner * cq_kluyver(ce.p0, a, t)?;
        let equal = lhs * phi == rhs_scaled;
        if lhs.abs() < 1 {
            return fail(a, format!("|C(N, {a})| = {} < 1", lhs.abs()));
        }
        if a % ce.p0 != 0 && rhs_scaled != 1 {
            return fail(a, format!("RHS = {rhs_scaled}/{phi}, expected 1/{phi}"));
        }
        if a % ce.p0 == 0 && !equal {
            return fail(a, format!("relative formula fails: {lhs} != {rhs_scaled}/{phi}"));
        }
        rows.push(ReefRow {
            a,
            lhs,
            rhs,
            rhs_scaled,
            equal,
        });
    }
    if rows.iter().all(|r| r.equal) {
        return fail(a_max, "the finite formula matched every shift".into());
    }

    let failures: Vec<u64> = rows.iter().filter(|r| !r.equal).map(|r| r.a).collect();
    let off_multiples = failures.iter().all(|a| a % ce.p0 != 0)
        && failures.len() as u64 == a_max - a_max / ce.p0;
    let mut report = Report::new(
        "the correlation has no exact finite Ramanujan formula",
        Hypothesis {
            eta: None,
            q: Some(ce.p0),
        },
    );
    report.push(
        Stat::new("counterexample")
            .uint("p0", ce.p0)
            .uint("n0", ce.n0)
            .uint("N", ce.n)
            .int("inner_sum", inner)
            .int("phi_p0", phi),
    );
    report.push(
        Stat::new("comparison")
            .uint("a_max", a_max)
            .uint("failures", failures.len() as u64)
            .value("failure_set", failures.iter().copied().collect())
            .flag("failures_are_non_multiples", off_multiples)
            .flag("relative_formula_on_multiples", true),
    );
    report.verdict = Verdict::from_checks(off_multiples);
    Ok(ReefGap { report, rows })
}

/// Eratosthenes transform of `a ↦ C_{f,g}(N, a)` on `1..=d_max`.
pub fn correlation_eratosthenes(
    spec: &CorrelationSpec,
    d_max: u64,
    t: &FactorTable,
) -> Result<EratosthenesTable> {
    eratosthenes_transform(&spec.as_view(), d_max, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem4Verdict {
    NotApplicable,
    NoGrePossible,
    /// The sampled prime subsequences were not the predicted constants.
    Inconsistent,
}

impl Theorem4Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem4Verdict::NotApplicable => "not-applicable",
            Theorem4Verdict::NoGrePossible => "no-GRE-possible",
            Theorem4Verdict::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem4Outcome {
    pub verdict: Theorem4Verdict,
    pub witness: Option<u64>,
    /// `(p, F'(p))` for primes `p ≡ 1 (mod Q)`.
    pub class_one: Vec<(u64, Complex64)>,
    /// `(p, F'(p))` for primes `p ≡ witness (mod Q)`.
    pub class_witness: Vec<(u64, Complex64)>,
    pub report: Report,
}

/// Samples `F'(p)` along the prime classes `1` and the diverting witness.
///
/// `F'(p) = F(p) - F(1)` is computed through the transform itself and the
/// two subsequences must be the constants `0` and `F(a) - F(1) ≠ 0`.
pub fn theorem4_verifier(
    f: &PeriodicFunction,
    primes_per_class: usize,
    t: &FactorTable,
) -> Result<Theorem4Outcome> {
    let q = f.period();
    let mut report = Report::new(
        "a function diverting values has no G.R.E.",
        Hypothesis {
            eta: None,
            q: Some(q),
        },
    );
    let Classification::Diverting { witness } = diverts_values(f)? else {
        report.push(Stat::new("classification").text("class", "monochromatic"));
        report.verdict = Verdict::HypothesisNotMet;
        report.push(Stat::new("outcome").text("theorem4", Theorem4Verdict::NotApplicable.as_str()));
        return Ok(Theorem4Outcome {
            verdict: Theorem4Verdict::NotApplicable,
            witness: None,
            class_one: Vec::new(),
            class_witness: Vec::new(),
            report,
        });
    };
    let view = f.to_view();
    let sample = |r: u64| -> Result<Vec<(u64, Complex64)>> {
        let found = t.primes_in_ap(q, r, primes_per_class, t.limit())?;
        if found.exhausted {
            return Err(Error::Resource(format!(
                "only {} primes ≡ {r} (mod {q}) up to {}, {primes_per_class} requested",
                found.primes.len(),
                t.limit()
            )));
        }
        found
            .primes
            .iter()
            .map(|&p| Ok((p, eratosthenes_at(&view, p, t)?)))
            .collect()
    };
    let class_one = sample(1)?;
    let class_witness = sample(witness)?;
    let jump = f.eval(witness) - f.eval(1);
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= EXACT_TOLERANCE;
    let one_ok = class_one.iter().all(|&(_, v)| close(v, Complex64::new(0.0, 0.0)));
    let witness_ok = class_witness.iter().all(|&(_, v)| close(v, jump));
    let verdict = if one_ok && witness_ok {
        Theorem4Verdict::NoGrePossible
    } else {
        Theorem4Verdict::Inconsistent
    };

    report.push(
        Stat::new("classification")
            .text("class", "diverting")
            .uint("witness", witness)
            .complex("F_1", f.eval(1))
            .complex("F_witness", f.eval(witness)),
    );
    for (r, class, ok) in [(1, &class_one, one_ok), (witness, &class_witness, witness_ok)] {
        report.push(
            Stat::new("prime class")
                .uint("residue", r)
                .uint("primes", class.len() as u64)
                .value("sample", class.iter().take(5).map(|c| c.0).collect())
                .complex("limit", class.first().map(|c| c.1).unwrap_or_default())
                .flag("constant", ok),
        );
    }
    report.push(Stat::new("outcome").text("theorem4", verdict.as_str()));
    report.verdict = Verdict::from_checks(verdict == Theorem4Verdict::NoGrePossible);
    Ok(Theorem4Outcome {
        verdict,
        witness: Some(witness),
        class_one,
        class_witness,
        report,
    })
}

/// `Σ_{d | a, μ(d) ≠ 0} F'(d)`: same transform, square-free divisors only.
pub fn ippify(e: &EratosthenesTable, a: u64, t: &FactorTable) -> Result<Complex64> {
    if a == 0 || a > e.d_max() {
        return Err(Error::OutOfRange {
            what: "a",
            value: a,
            limit: e.d_max(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for d in t.square_free_divisors(a)? {
        acc += e.value(d)?;
    }
    Ok(acc)
}
