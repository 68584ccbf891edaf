//! Ramanujan sums `c_q(a)`.
//!
//! Three routes are provided. [`cq_kluyver`] is the production path;
//! [`cq_holder`] is an independent closed form and [`cq_direct`] evaluates
//! the defining cosine sum in floating point, serving as the oracle.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::number_theory::FactorTable;

/// Moduli up to this bound have been validated against the exact routes.
pub const DIRECT_VALIDATED_MAX_Q: u64 = 100_000;

/// Largest accepted distance from the cosine sum to the nearest integer.
pub const DIRECT_RESIDUAL_LIMIT: f64 = 1e-6;

/// Seed of the spot check run by [`build_cq_table`].
pub const SPOT_CHECK_SEED: u64 = 0x5eed_c0de;

fn check_args(q: u64, a: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::invalid("modulus q must be at least 1"));
    }
    if a == 0 {
        return Err(Error::invalid(
            "argument a must be at least 1; reduce into 1..=q explicitly",
        ));
    }
    Ok(())
}

/// Reduces a (possibly non-positive) argument into `1..=q`.
///
/// `a ≡ 0 (mod q)` maps to `q`, so `c_q(0)` reads as `c_q(q) = φ(q)`.
pub fn reduce_into_period(a: i64, q: u64) -> u64 {
    let r = a.rem_euclid(q as i64) as u64;
    if r == 0 {
        q
    } else {
        r
    }
}

/// Cosine sum over the reduced residues, rounded to the nearest integer.
pub fn cq_direct(q: u64, a: u64) -> Result<i64> {
    check_args(q, a)?;
    let ar = a % q;
    let mut sum = 0.0f64;
    for j in 1..=q {
        if j.gcd(&q) != 1 {
            continue;
        }
        let k = ((j as u128 * ar as u128) % q as u128) as f64;
        sum += (TAU * k / q as f64).cos();
    }
    let rounded = sum.round();
    let residual = (sum - rounded).abs();
    if residual >= DIRECT_RESIDUAL_LIMIT {
        return Err(Error::NumericalConsistency(format!(
            "cosine sum for c_{q}({a}) is {sum}, {residual:e} away from an integer"
        )));
    }
    Ok(rounded as i64)
}

/// `μ(q/g)·φ(q)/φ(q/g)` with `g = gcd(a, q)`.
pub fn cq_holder(q: u64, a: u64, t: &FactorTable) -> Result<i64> {
    check_args(q, a)?;
    t.check("q", q)?;
    let g = a.gcd(&q);
    let m = q / g;
    let mu = t.mobius(m)?;
    if mu == 0 {
        return Ok(0);
    }
    let phi_q = t.totient(q)?;
    let phi_m = t.totient(m)?;
    if phi_q % phi_m != 0 {
        return Err(Error::Invariant(format!(
            "φ({m}) = {phi_m} does not divide φ({q}) = {phi_q}"
        )));
    }
    Ok(mu * (phi_q / phi_m))
}

/// `Σ_{d | gcd(a, q)} d·μ(q/d)`.
pub fn cq_kluyver(q: u64, a: u64, t: &FactorTable) -> Result<i64> {
    check_args(q, a)?;
    t.check("q", q)?;
    let g = a.gcd(&q);
    if g == 1 {
        return t.mobius(q);
    }
    let mut sum: i64 = 0;
    for d in t.divisors(g)? {
        let mu = t.mobius(q / d)?;
        if mu == 0 {
            continue;
        }
        sum = sum
            .checked_add(mu * d as i64)
            .ok_or(Error::Overflow("cq_kluyver"))?;
    }
    Ok(sum)
}

/// One full period `[c_q(1), …, c_q(q)]`.
pub fn cq_period(q: u64, t: &FactorTable) -> Result<Vec<i64>> {
    (1..=q).map(|a| cq_kluyver(q, a, t)).collect()
}

/// Dense table of `c_q(a)` for `1 ≤ q ≤ q_max`, `1 ≤ a ≤ a_max`, row-major by `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanSumTable {
    q_max: u64,
    a_max: u64,
    values: Vec<i64>,
}

impl RamanujanSumTable {
    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn get(&self, q: u64, a: u64) -> Result<i64> {
        if q == 0 || q > self.q_max {
            return Err(Error::OutOfRange {
                what: "q",
                value: q,
                limit: self.q_max,
            });
        }
        if a == 0 || a > self.a_max {
            return Err(Error::OutOfRange {
                what: "a",
                value: a,
                limit: self.a_max,
            });
        }
        Ok(self.values[self.index(q, a)])
    }

    pub fn row(&self, q: u64) -> Result<&[i64]> {
        if q == 0 || q > self.q_max {
            return Err(Error::OutOfRange {
                what: "q",
                value: q,
                limit: self.q_max,
            });
        }
        let start = self.index(q, 1);
        Ok(&self.values[start..start + self.a_max as usize])
    }

    fn index(&self, q: u64, a: u64) -> usize {
        ((q - 1) * self.a_max + (a - 1)) as usize
    }

    /// Writes the table as CSV with header `q,a,c`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "q,a,c")?;
        for q in 1..=self.q_max {
            for a in 1..=self.a_max {
                writeln!(w, "{q},{a},{}", self.values[self.index(q, a)])?;
            }
        }
        Ok(())
    }
}

/// Fills the table from [`cq_kluyver`], then checks a seeded 1% sample
/// against [`cq_direct`].
pub fn build_cq_table(q_max: u64, a_max: u64, t: &FactorTable) -> Result<RamanujanSumTable> {
    if q_max == 0 || a_max == 0 {
        return Err(Error::invalid("table dimensions must be positive"));
    }
    t.check("q_max", q_max)?;
    let len = q_max
        .checked_mul(a_max)
        .filter(|&n| n <= usize::MAX as u64)
        .ok_or_else(|| Error::Resource(format!("{q_max}×{a_max} table is too large")))?
        as usize;
    let mut values: Vec<i64> = Vec::new();
    values
        .try_reserve_exact(len)
        .map_err(|e| Error::Resource(format!("allocating {q_max}×{a_max} table: {e}")))?;

    for q in 1..=q_max {
        let period: Vec<i64> = (1..=q.min(a_max))
            .map(|a| cq_kluyver(q, a, t))
            .collect::<Result<_>>()?;
        for a in 0..a_max {
            values.push(period[(a % q) as usize]);
        }
    }
    let table = RamanujanSumTable {
        q_max,
        a_max,
        values,
    };

    let samples = len.div_ceil(100).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    for _ in 0..samples {
        let q = rng.gen_range(1..=q_max.min(DIRECT_VALIDATED_MAX_Q));
        let a = rng.gen_range(1..=a_max);
        let direct = cq_direct(q, a)?;
        let stored = table.get(q, a)?;
        if direct != stored {
            return Err(Error::Invariant(format!(
                "table entry c_{q}({a}) = {stored} disagrees with cosine sum {direct}"
            )));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> FactorTable {
        FactorTable::new(1000).unwrap()
    }

    #[test]
    fn direct_examples() {
        assert_eq!(cq_direct(1, 7).unwrap(), 1);
        assert_eq!(cq_direct(5, 1).unwrap(), -1);
        assert_eq!(cq_direct(5, 5).unwrap(), 4);
    }

    #[test]
    fn holder_examples_match_direct() {
        let t = table();
        for &(q, a, want) in &[(4, 2, -2), (6, 3, -2), (9, 3, -3)] {
            assert_eq!(cq_direct(q, a).unwrap(), want);
            assert_eq!(cq_holder(q, a, &t).unwrap(), want);
        }
    }

    #[test]
    fn kluyver_examples() {
        let t = table();
        assert_eq!(cq_direct(4, 2).unwrap(), -2);
        assert_eq!(cq_kluyver(4, 2, &t).unwrap(), -2);
        for p in [2u64, 3, 5, 7, 97] {
            assert_eq!(cq_kluyver(p, p + 1, &t).unwrap(), -1);
        }
        assert_eq!(cq_kluyver(6, 6, &t).unwrap(), 2);
        assert_eq!(t.totient(6).unwrap(), 2);
    }

    #[test]
    fn zero_arguments_are_rejected() {
        let t = table();
        assert!(matches!(cq_direct(0, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(cq_direct(3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(cq_kluyver(3, 0, &t), Err(Error::InvalidArgument(_))));
        assert!(matches!(cq_holder(0, 2, &t), Err(Error::InvalidArgument(_))));
        assert!(matches!(cq_holder(1001, 2, &t), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn reduction_convention() {
        assert_eq!(reduce_into_period(0, 5), 5);
        assert_eq!(reduce_into_period(5, 5), 5);
        assert_eq!(reduce_into_period(6, 5), 1);
        assert_eq!(reduce_into_period(-1, 5), 4);
    }

    #[test]
    fn small_table_rows() {
        let t = table();
        let tab = build_cq_table(6, 12, &t).unwrap();
        assert!(tab.row(1).unwrap().iter().all(|&c| c == 1));
        let row2: Vec<i64> = (1..=12).map(|a| if a % 2 == 0 { 1 } else { -1 }).collect();
        assert_eq!(tab.row(2).unwrap(), row2.as_slice());
        assert_eq!(cq_direct(5, 4).unwrap(), -1);
        assert_eq!(tab.get(5, 4).unwrap(), -1);
        assert!(tab.get(7, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = table();
        let tab = build_cq_table(2, 2, &t).unwrap();
        let mut buf = Vec::new();
        tab.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "q,a,c\n1,1,1\n1,2,1\n2,1,-1\n2,2,1\n");
    }

    #[test]
    fn prime_modulus_dichotomy() {
        let t = table();
        for &p in t.primes().iter().take(40) {
            let p = p as u64;
            for a in 1..=3 * p {
                let want = if a % p == 0 { p as i64 - 1 } else { -1 };
                assert_eq!(cq_kluyver(p, a, &t).unwrap(), want);
            }
        }
    }

    #[test]
    fn orthogonality_over_full_period() {
        let t = table();
        for q in 1..=30u64 {
            for r in 1..=30u64 {
                let l = q.lcm(&r);
                let s: i64 = (1..=l)
                    .map(|a| cq_kluyver(q, a, &t).unwrap() * cq_kluyver(r, a, &t).unwrap())
                    .sum();
                let want = if q == r { l as i64 * t.totient(q).unwrap() } else { 0 };
                assert_eq!(s, want, "q = {q}, r = {r}");
            }
        }
    }

    #[test]
    fn square_free_lower_bound() {
        let t = table();
        for q in 1..=200u64 {
            if t.mobius(q).unwrap() == 0 {
                continue;
            }
            for a in 1..=200 {
                assert!(cq_kluyver(q, a, &t).unwrap().abs() >= 1);
            }
        }
    }
}
