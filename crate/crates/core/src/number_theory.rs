//! Integer kernels: a smallest-prime-factor sieve and the multiplicative
//! functions read off it.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest sieve bound accepted by [`FactorTable::new`].
///
/// The table stores one `u32` per entry, so the bound costs about 400 MiB
/// plus the prime list.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Smallest-prime-factor table over `1..=limit`, built by a linear sieve.
///
/// Immutable after construction; share it behind an `Arc` across threads.
#[derive(Debug, Clone)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }
}

pub fn build_factor_table(limit: u64) -> Result<FactorTable> {
    FactorTable::new(limit)
}

impl FactorTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the supported bound {MAX_SIEVE_LIMIT}"
            )));
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(n + 1)
            .map_err(|e| Error::Resource(format!("allocating sieve of {limit} entries: {e}")))?;
        spf.resize(n + 1, 0);
        spf[1] = 1;

        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                spf[m] = p;
            }
        }

        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    #[inline]
    pub fn check(&self, what: &'static str, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::OutOfRange {
                what,
                value: n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check("n", n)?;
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check("n", n)?;
        Ok(n >= 2 && self.spf[n as usize] as u64 == n)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check("n", n)?;
        let mut factors = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization { n, factors })
    }

    pub fn mobius(&self, n: u64) -> Result<i64> {
        self.check("n", n)?;
        let mut m = n as usize;
        let mut sign = 1;
        while m > 1 {
            let p = self.spf[m] as usize;
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        Ok(sign)
    }

    /// Euler's totient, computed as the product of `p^(e-1)·(p-1)`.
    pub fn totient(&self, n: u64) -> Result<i64> {
        let f = self.factorize(n)?;
        let mut phi: i64 = 1;
        for (p, e) in f.factors {
            let p = p as i64;
            let mut term = p - 1;
            for _ in 1..e {
                term = term.checked_mul(p).ok_or(Error::Overflow("totient"))?;
            }
            phi = phi.checked_mul(term).ok_or(Error::Overflow("totient"))?;
        }
        Ok(phi)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self, n: u64) -> Result<u32> {
        Ok(self.factorize(n)?.omega())
    }

    pub fn num_divisors(&self, n: u64) -> Result<u64> {
        let f = self.factorize(n)?;
        f.factors.iter().try_fold(1u64, |acc, &(_, e)| {
            acc.checked_mul(e as u64 + 1).ok_or(Error::Overflow("num_divisors"))
        })
    }

    /// Divisors of `n` in increasing order.
    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        let f = self.factorize(n)?;
        Ok(divisors_from(&f))
    }

    /// Divisors of `n` with `μ(d) ≠ 0`, ascending.
    pub fn square_free_divisors(&self, n: u64) -> Result<Vec<u64>> {
        let f = self.factorize(n)?;
        let mut out = vec![1u64];
        for &(p, _) in &f.factors {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] * p);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        let f = self.factorize(n)?;
        Ok(match f.factors.as_slice() {
            [(p, _)] => (*p as f64).ln(),
            _ => 0.0,
        })
    }

    /// Primes `p ≡ r (mod q)` up to `search_bound`, read from this table.
    pub fn primes_in_ap(
        &self,
        q: u64,
        r: u64,
        how_many: usize,
        search_bound: u64,
    ) -> Result<PrimesInProgression> {
        if search_bound > self.limit {
            return Err(Error::OutOfRange {
                what: "search_bound",
                value: search_bound,
                limit: self.limit,
            });
        }
        scan_progression(q, r, how_many, search_bound, |p| {
            self.spf[p as usize] as u64 == p
        })
    }
}

pub(crate) fn divisors_from(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in &f.factors {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Result of a bounded search for primes in a residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimesInProgression {
    pub primes: Vec<u64>,
    /// Set when the search bound ran out before `how_many` primes were found.
    pub exhausted: bool,
}

/// First `how_many` primes `p ≡ r (mod q)` with `p ≤ search_bound`.
///
/// Sieves `1..=search_bound` on its own; use [`FactorTable::primes_in_ap`]
/// when a table covering the bound already exists.
pub fn primes_in_ap(
    q: u64,
    r: u64,
    how_many: usize,
    search_bound: u64,
) -> Result<PrimesInProgression> {
    validate_progression(q, r)?;
    if search_bound > MAX_SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "search bound {search_bound} exceeds {MAX_SIEVE_LIMIT}"
        )));
    }
    let n = search_bound as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    scan_progression(q, r, how_many, search_bound, |p| p >= 2 && !composite[p as usize])
}

fn validate_progression(q: u64, r: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if r == 0 || r > q {
        return Err(Error::invalid(format!("residue {r} must lie in 1..={q}")));
    }
    if r.gcd(&q) != 1 {
        return Err(Error::invalid(format!(
            "gcd({r}, {q}) = {} != 1: the class holds no primes beyond possibly {r}",
            r.gcd(&q)
        )));
    }
    Ok(())
}

fn scan_progression(
    q: u64,
    r: u64,
    how_many: usize,
    search_bound: u64,
    is_prime: impl Fn(u64) -> bool,
) -> Result<PrimesInProgression> {
    validate_progression(q, r)?;
    let mut primes = Vec::with_capacity(how_many);
    let mut p = r;
    while primes.len() < how_many && p <= search_bound {
        if p >= 2 && is_prime(p) {
            primes.push(p);
        }
        p = match p.checked_add(q) {
            Some(next) => next,
            None => break,
        };
    }
    let exhausted = primes.len() < how_many;
    Ok(PrimesInProgression { primes, exhausted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(n: u64) -> FactorTable {
        FactorTable::new(n).unwrap()
    }

    fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn spf_examples() {
        let t = table(10);
        assert_eq!(t.smallest_prime_factor(9).unwrap(), 3);
        assert_eq!(t.smallest_prime_factor(7).unwrap(), 7);
        assert_eq!(t.smallest_prime_factor(10).unwrap(), 2);
        assert_eq!(t.smallest_prime_factor(1).unwrap(), 1);
    }

    #[test]
    fn spf_invariants() {
        let t = table(5000);
        for n in 2..=5000u64 {
            let p = t.smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert_eq!(trial_factor(p), vec![(p, 1)]);
            assert_eq!(p == n, trial_factor(n).len() == 1 && trial_factor(n)[0].1 == 1);
        }
    }

    #[test]
    fn rejects_degenerate_limits() {
        assert!(matches!(FactorTable::new(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(FactorTable::new(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            FactorTable::new(MAX_SIEVE_LIMIT + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn out_of_range_arguments() {
        let t = table(100);
        assert!(matches!(t.mobius(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.totient(101), Err(Error::OutOfRange { .. })));
        assert!(t.divisors(100).is_ok());
    }

    #[test]
    fn mobius_totient_examples() {
        let t = table(100);
        assert_eq!(t.mobius(1).unwrap(), 1);
        assert_eq!(t.mobius(12).unwrap(), 0);
        assert_eq!(t.mobius(30).unwrap(), -1);
        assert_eq!(t.totient(1).unwrap(), 1);
        assert_eq!(t.totient(5).unwrap(), 4);
        let brute = (1..=12u64).filter(|j| j.gcd(&12) == 1).count() as i64;
        assert_eq!(brute, 4);
        assert_eq!(t.totient(12).unwrap(), brute);
    }

    #[test]
    fn divisor_examples() {
        let t = table(100);
        assert_eq!(t.omega(1).unwrap(), 0);
        assert_eq!(t.num_divisors(1).unwrap(), 1);
        assert_eq!(t.divisors(1).unwrap(), vec![1]);
        assert_eq!(t.num_divisors(12).unwrap(), 6);
        assert_eq!(t.divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(1u64 << t.omega(12).unwrap() <= t.num_divisors(12).unwrap());
        assert_eq!(t.square_free_divisors(12).unwrap(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn von_mangoldt_examples() {
        let t = table(100);
        assert_eq!(t.von_mangoldt(1).unwrap(), 0.0);
        assert_eq!(t.von_mangoldt(8).unwrap(), 2f64.ln());
        assert_eq!(t.von_mangoldt(6).unwrap(), 0.0);
    }

    #[test]
    fn mobius_and_totient_divisor_sums() {
        let t = table(10_000);
        for n in 1..=10_000u64 {
            let divs = t.divisors(n).unwrap();
            assert_eq!(divs.len() as u64, t.num_divisors(n).unwrap());
            let mu_sum: i64 = divs.iter().map(|&d| t.mobius(d).unwrap()).sum();
            assert_eq!(mu_sum, (n == 1) as i64, "n = {n}");
            let phi_sum: i64 = divs.iter().map(|&d| t.totient(d).unwrap()).sum();
            assert_eq!(phi_sum, n as i64);
        }
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = table(1_000_000);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=1_000_000u64);
            let f = trial_factor(n);
            assert_eq!(t.factorize(n).unwrap().factors, f);
            let mu = if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len().is_multiple_of(2) {
                1
            } else {
                -1
            };
            assert_eq!(t.mobius(n).unwrap(), mu);
            let phi = f
                .iter()
                .fold(n, |acc, &(p, _)| acc / p * (p - 1)) as i64;
            assert_eq!(t.totient(n).unwrap(), phi);
            assert_eq!(t.omega(n).unwrap() as usize, f.len());
        }
    }

    #[test]
    fn primes_in_progressions() {
        // primes ≤ 100 that are 4 mod 5, filtered by hand from the sieve
        let expected: Vec<u64> = table(100)
            .primes()
            .iter()
            .map(|&p| p as u64)
            .filter(|p| p % 5 == 4)
            .take(3)
            .collect();
        assert_eq!(expected, vec![19, 29, 59]);
        let found = primes_in_ap(5, 4, 3, 100).unwrap();
        assert_eq!(found.primes, expected);
        assert!(!found.exhausted);

        assert_eq!(primes_in_ap(2, 1, 2, 20).unwrap().primes, vec![3, 5]);
        assert!(matches!(primes_in_ap(4, 2, 1, 100), Err(Error::InvalidArgument(_))));

        let t = table(200);
        assert_eq!(t.primes_in_ap(5, 4, 3, 100).unwrap().primes, vec![19, 29, 59]);
        let short = t.primes_in_ap(7, 6, 50, 200).unwrap();
        assert!(short.exhausted);
        assert!(short.primes.iter().all(|p| p % 7 == 6));
    }
}
