use std::sync::{Arc, OnceLock};

use gre_core::expansions::{
    corollary2_witness, eta_decay_profile, evaluate_expansion, lucht_eratosthenes_table,
    RamanujanCoefficients,
};
use gre_core::number_theory::FactorTable;
use gre_core::periodic_correlations::{build_counterexample_one, correlation, reef_gap_report};
use gre_core::ramanujan_sums::{cq_direct, cq_holder, cq_kluyver};
use gre_core::transforms::{
    eratosthenes_transform, inverse_eratosthenes, inverse_eratosthenes_all, weighted_coefficient_sum,
    ArithmeticFunctionView, SeriesVerdict,
};
use gre_core::Verdict;
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn table() -> &'static Arc<FactorTable> {
    static T: OnceLock<Arc<FactorTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(FactorTable::new(200_000).unwrap()))
}

fn finite_g() -> impl Strategy<Value = Vec<(u64, f64)>> {
    prop::collection::vec((1u64..=12, -5.0f64..=5.0), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn methods_agree(q in 1u64..2000, a in 1u64..100_000) {
        let t = table();
        let k = cq_kluyver(q, a, t).unwrap();
        prop_assert_eq!(k, cq_holder(q, a, t).unwrap());
        prop_assert_eq!(k, cq_direct(q, a).unwrap());
    }

    #[test]
    fn ramanujan_sums_are_periodic(q in 1u64..500, a in 1u64..10_000) {
        let t = table();
        prop_assert_eq!(cq_kluyver(q, a, t).unwrap(), cq_kluyver(q, a + q, t).unwrap());
    }

    #[test]
    fn ramanujan_sums_are_multiplicative_in_q(q1 in 1u64..200, q2 in 1u64..200, a in 1u64..5000) {
        prop_assume!(q1.gcd(&q2) == 1);
        let t = table();
        prop_assert_eq!(
            cq_kluyver(q1 * q2, a, t).unwrap(),
            cq_kluyver(q1, a, t).unwrap() * cq_kluyver(q2, a, t).unwrap()
        );
    }

    #[test]
    fn float_roundtrip(values in prop::collection::vec(-1e3f64..1e3, 1..400)) {
        let t = table();
        let n = values.len() as u64;
        let copy = values.clone();
        let f = ArithmeticFunctionView::real("sample", move |a| copy[a as usize - 1]);
        let back = inverse_eratosthenes_all(&eratosthenes_transform(&f, n, t).unwrap());
        for (v, b) in values.iter().zip(&back) {
            prop_assert!((b.re - v).abs() < 1e-9 && b.im.abs() < 1e-9);
        }
    }

    #[test]
    fn lucht_table_reproduces_finite_expansion(entries in finite_g()) {
        let t = table();
        let g = RamanujanCoefficients::table(
            "sample",
            entries.into_iter().map(|(q, v)| (q, Complex64::new(v, 0.0))),
        ).unwrap();
        let e = lucht_eratosthenes_table(&g, 100, 1000, t).unwrap();
        for a in 1..=100 {
            let lhs = inverse_eratosthenes(&e, a).unwrap();
            let rhs = evaluate_expansion(&g, a, &[12, 24], t).unwrap();
            prop_assert_eq!(rhs.checkpoints[0].1, rhs.checkpoints[1].1);
            prop_assert!((lhs - rhs.value()).norm() < 1e-9, "a = {}", a);
        }
    }
}

#[test]
fn counterexample_invariants() {
    let t = table();
    for p0 in [3u64, 5, 7, 11, 13] {
        let ce = build_counterexample_one(p0, t).unwrap();
        let spec = ce.spec();
        for a in 1..=4 * p0 {
            assert_eq!(correlation(&spec, a).unwrap(), correlation(&spec, a + p0).unwrap());
        }
        let gap = reef_gap_report(&ce, 4 * p0, t).unwrap();
        let expected: Vec<u64> = (1..=4 * p0).filter(|a| a % p0 != 0).collect();
        assert_eq!(gap.failure_set(), expected);
    }
}

#[test]
fn divisor_log_profile_grows_like_a_log_power() {
    let t = table();
    let g = RamanujanCoefficients::divisor_log();
    let eta = 0.5;
    let (q, q2) = (20_000u64, 40_000u64);
    let r = eta_decay_profile(&g, eta, q2, t).unwrap().sup_statistic
        / eta_decay_profile(&g, eta, q, t).unwrap().sup_statistic;
    let predicted = ((q2 as f64).ln() / (q as f64).ln()).powf(2.0 + eta);
    assert!((r / predicted - 1.0).abs() < 1e-9, "{r} vs {predicted}");
}

#[test]
fn null_expansion_has_null_wintner_coefficients() {
    let t = table();
    let zero = RamanujanCoefficients::table("zero", []).unwrap();
    let r = corollary2_witness(&zero, 1.5, 50, &[500, 1000], t).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    let g = RamanujanCoefficients::power_log_decay(1.5, 1.0).unwrap();
    let r = corollary2_witness(&g, 1.5, 50, &[500, 1000], t).unwrap();
    assert_eq!(r.verdict, Verdict::HypothesisNotMet);
}

#[test]
fn weighted_sums_separate_families() {
    let t = table();
    let r0 = weighted_coefficient_sum(&RamanujanCoefficients::ramanujan_r0(), 100_000, t).unwrap();
    assert_eq!(r0.verdict, SeriesVerdict::Diverging);
    let one = RamanujanCoefficients::table("one", [(1, Complex64::new(1.0, 0.0))]).unwrap();
    assert_eq!(weighted_coefficient_sum(&one, 1000, t).unwrap().verdict, SeriesVerdict::PlausiblyFinite);
    let fast = RamanujanCoefficients::power_log_decay(1.2, 1.0).unwrap();
    assert_eq!(
        weighted_coefficient_sum(&fast, 100_000, t).unwrap().verdict,
        SeriesVerdict::PlausiblyFinite
    );
}
