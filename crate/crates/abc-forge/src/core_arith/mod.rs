//! Exact integer arithmetic primitives: factorization, radicals, squarefree
//! tests, totients, primorials and sieves.
//!
//! All large values are [`BigNat`] (arbitrary precision, decimal-string
//! serialization). Factoring effort is bounded by a [`FactoringBudget`];
//! exhausting the budget yields a [`FactorOutcome::Partial`] value rather
//! than an error, so downstream verification can answer "unknown" instead
//! of guessing.

mod primality;
mod rho;
mod sieve;

pub use primality::is_prime;
pub use rho::factorize_u64;
pub use sieve::{SpfSieve, radical_table, squarefree_upto};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Arbitrary-precision non-negative integer.
pub type BigNat = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// Factoring budget exhausted before the answer could be decided.
    #[error("unknown: factoring budget exhausted")]
    Unknown,
}

/// Effort caps for [`factorize`]. All caps must be positive.
#[derive(Debug, Clone)]
pub struct FactoringBudget {
    /// Trial-divide by primes up to this bound before switching to rho.
    pub trial_division_bound: u64,
    /// Max Brent-rho iterations per composite cofactor.
    pub rho_iteration_cap: u64,
    /// Wall-clock cap for a single factorization.
    pub total_time_cap: Duration,
    /// Seed for the randomized rho polynomial; fixed seed gives
    /// reproducible runs.
    pub seed: u64,
}

impl Default for FactoringBudget {
    fn default() -> Self {
        FactoringBudget {
            trial_division_bound: 100_000,
            rho_iteration_cap: 4_000_000,
            total_time_cap: Duration::from_secs(10),
            seed: 1,
        }
    }
}

impl FactoringBudget {
    pub fn validate(&self) -> Result<(), ArithError> {
        if self.trial_division_bound < 2
            || self.rho_iteration_cap == 0
            || self.total_time_cap.is_zero()
        {
            return Err(ArithError::Domain("all budget caps must be positive"));
        }
        Ok(())
    }
}

/// Prime-power form of a positive integer: sorted `(prime, exponent)` pairs.
/// The empty list represents 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigNat, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { factors: Vec::new() }
    }

    /// Builds from `(prime, exponent)` pairs; sorts and merges duplicates.
    /// Primality of the entries is the caller's responsibility.
    pub fn from_pairs(mut pairs: Vec<(BigNat, u32)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigNat, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { factors: merged }
    }

    pub fn factors(&self) -> &[(BigNat, u32)] {
        &self.factors
    }

    pub fn value(&self) -> BigNat {
        let mut n = BigNat::one();
        for (p, e) in &self.factors {
            n *= p.pow(*e);
        }
        n
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigNat {
        let mut r = BigNat::one();
        for (p, _) in &self.factors {
            r *= p;
        }
        r
    }

    pub fn omega(&self) -> u64 {
        self.factors.len() as u64
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// `n / radical(n)`.
    pub fn q_part(&self) -> BigNat {
        let mut q = BigNat::one();
        for (p, e) in &self.factors {
            if *e > 1 {
                q *= p.pow(e - 1);
            }
        }
        q
    }

    pub fn phi(&self) -> BigNat {
        let mut phi = BigNat::one();
        for (p, e) in &self.factors {
            phi *= p.pow(e - 1) * (p - 1u32);
        }
        phi
    }

    pub fn exponent_of(&self, p: &BigNat) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Distinct primes as u64, erroring when any prime does not fit.
    pub fn primes_u64(&self) -> Result<Vec<u64>, ArithError> {
        self.factors
            .iter()
            .map(|(p, _)| p.to_u64().ok_or(ArithError::Domain("prime exceeds u64")))
            .collect()
    }
}

// JSON form: [["2", 3], ["3", 2]] with primes as decimal strings.
impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.factors.len()))?;
        for (p, e) in &self.factors {
            seq.serialize_element(&(p.to_string(), *e))?;
        }
        seq.end()
    }
}

/// Result of a budgeted factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorOutcome {
    Complete(Factorization),
    /// Budget ran out with a composite cofactor left over. The found factors
    /// are genuine primes and `found.value() * cofactor == n`.
    Partial { found: Factorization, cofactor: BigNat },
}

impl FactorOutcome {
    pub fn complete(self) -> Result<Factorization, ArithError> {
        match self {
            FactorOutcome::Complete(f) => Ok(f),
            FactorOutcome::Partial { .. } => Err(ArithError::Unknown),
        }
    }
}

/// Factors `n >= 1` within the budget. `n = 0` is a domain error.
pub fn factorize(n: &BigNat, budget: &FactoringBudget) -> Result<FactorOutcome, ArithError> {
    budget.validate()?;
    if n.is_zero() {
        return Err(ArithError::Domain("cannot factor 0"));
    }
    if let Some(v) = n.to_u64() {
        let pairs = rho::factorize_u64(v, budget.seed)
            .into_iter()
            .map(|(p, e)| (BigNat::from(p), e))
            .collect();
        return Ok(FactorOutcome::Complete(Factorization::from_pairs(pairs)));
    }
    let deadline = Instant::now() + budget.total_time_cap;
    let mut found: Vec<(BigNat, u32)> = Vec::new();
    let mut rest = n.clone();

    // Trial division by 2 then odd numbers up to the bound.
    let mut d: u64 = 2;
    while d <= budget.trial_division_bound {
        let dd = BigNat::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&dd);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            found.push((dd, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    // Remaining cofactors handled by primality test + Brent rho.
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            found.push((m, 1));
            continue;
        }
        // Perfect powers fall out of rho slowly; peel them directly.
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        if Instant::now() >= deadline {
            return Ok(partial(n, found));
        }
        match rho::brent(&m, budget.rho_iteration_cap, budget.seed, deadline) {
            Some(f) => {
                let q = &m / &f;
                stack.push(f);
                stack.push(q);
            }
            None => return Ok(partial(n, found)),
        }
    }

    Ok(FactorOutcome::Complete(Factorization::from_pairs(found)))
}

fn partial(n: &BigNat, found: Vec<(BigNat, u32)>) -> FactorOutcome {
    let f = Factorization::from_pairs(found);
    let cofactor = n / f.value();
    FactorOutcome::Partial { found: f, cofactor }
}

/// Perfect-power decomposition `m = root^k` for the smallest prime `k >= 2`,
/// if any. Skipped for very large inputs where root extraction dominates.
fn perfect_power(m: &BigNat) -> Option<(BigNat, u32)> {
    let bits = m.bits();
    if bits > 4096 {
        return None;
    }
    for k in sieve::primes_below(bits.max(3)) {
        let k = k as u32;
        let root = m.nth_root(k);
        if root.pow(k) == *m && root > BigNat::one() {
            return Some((root, k));
        }
    }
    None
}

/// Product of the distinct primes dividing `n`; `radical(1) = 1`.
pub fn radical(n: &BigNat, budget: &FactoringBudget) -> Result<BigNat, ArithError> {
    Ok(factorize(n, budget)?.complete()?.radical())
}

/// True iff no prime divides `n` twice. Decides early on a small square
/// factor without factoring the rest.
pub fn is_squarefree(n: &BigNat, budget: &FactoringBudget) -> Result<bool, ArithError> {
    budget.validate()?;
    if n.is_zero() {
        return Err(ArithError::Domain("0 is outside the domain"));
    }
    if let Some(v) = n.to_u64() {
        return Ok(rho::factorize_u64(v, budget.seed).iter().all(|&(_, e)| e == 1));
    }
    let mut rest = n.clone();
    let mut d: u64 = 2;
    while d <= budget.trial_division_bound {
        let dd = BigNat::from(d);
        if &dd * &dd > rest {
            break;
        }
        let (q, r) = rest.div_rem(&dd);
        if r.is_zero() {
            if (&q % &dd).is_zero() {
                return Ok(false);
            }
            rest = q;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if rest.is_one() || is_prime(&rest) {
        return Ok(true);
    }
    if perfect_power(&rest).is_some() {
        return Ok(false);
    }
    match factorize(&rest, budget)? {
        FactorOutcome::Complete(f) => Ok(f.is_squarefree()),
        FactorOutcome::Partial { found, .. } => {
            if !found.is_squarefree() {
                Ok(false)
            } else {
                Err(ArithError::Unknown)
            }
        }
    }
}

/// Number of distinct prime factors; `omega(1) = 0`.
pub fn omega(n: &BigNat, budget: &FactoringBudget) -> Result<u64, ArithError> {
    Ok(factorize(n, budget)?.complete()?.omega())
}

/// Largest `e` with `p^e | n`; 0 when `p` does not divide `n`.
/// `p` must be prime.
pub fn p_adic_order(p: &BigNat, n: &BigNat) -> Result<u32, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::Domain("p must be prime"));
    }
    if n.is_zero() {
        return Err(ArithError::Domain("n must be positive"));
    }
    let mut e = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if r.is_zero() {
            e += 1;
            m = q;
        } else {
            return Ok(e);
        }
    }
}

/// `Q(c) = c / radical(c)`; 1 exactly when `c` is squarefree.
pub fn q_part(c: &BigNat, budget: &FactoringBudget) -> Result<BigNat, ArithError> {
    Ok(factorize(c, budget)?.complete()?.q_part())
}

/// Euler totient.
pub fn euler_phi(c: &BigNat, budget: &FactoringBudget) -> Result<BigNat, ArithError> {
    Ok(factorize(c, budget)?.complete()?.phi())
}

/// `N(c) = phi(c) / 2`, the number of primitive triples for `c >= 3`.
/// The totient is even there, so the division is exact.
pub fn count_primitive(c: &BigNat, budget: &FactoringBudget) -> Result<BigNat, ArithError> {
    if *c < BigNat::from(3u32) {
        return Err(ArithError::Domain("count_primitive needs c >= 3"));
    }
    Ok(euler_phi(c, budget)? / 2u32)
}

/// Product of all primes strictly below `q`; 1 when there are none.
pub fn primorial_below(q: u64) -> Result<BigNat, ArithError> {
    if q < 2 {
        return Err(ArithError::Domain("primorial_below needs q >= 2"));
    }
    let mut out = BigNat::one();
    for p in sieve::primes_below(q) {
        out *= BigNat::from(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::str::FromStr;

    fn budget() -> FactoringBudget {
        FactoringBudget::default()
    }

    fn nat(s: &str) -> BigNat {
        BigNat::from_str(s).unwrap()
    }

    #[test]
    fn factorize_examples() {
        let one = factorize(&BigNat::one(), &budget()).unwrap().complete().unwrap();
        assert!(one.factors().is_empty());
        assert_eq!(one.value(), BigNat::one());

        // 2^33 + 1
        let n = nat("8589934593");
        let f = factorize(&n, &budget()).unwrap().complete().unwrap();
        let expect: Vec<(BigNat, u32)> = vec![
            (nat("3"), 2),
            (nat("67"), 1),
            (nat("683"), 1),
            (nat("20857"), 1),
        ];
        assert_eq!(f.factors(), expect.as_slice());

        let f = factorize(&nat("72"), &budget()).unwrap().complete().unwrap();
        assert_eq!(f.factors(), &[(nat("2"), 3), (nat("3"), 2)]);
    }

    #[test]
    fn factorize_zero_is_domain_error() {
        assert!(matches!(
            factorize(&BigNat::zero(), &budget()),
            Err(ArithError::Domain(_))
        ));
    }

    #[test]
    fn factorize_partial_on_tiny_budget() {
        // product of two ~40-digit primes; nothing falls within this budget
        let p = nat("1000000000000000000000000000000000000253");
        let q = nat("1000000000000000000000000000000000000609");
        let n = &p * &q;
        let tiny = FactoringBudget {
            trial_division_bound: 100,
            rho_iteration_cap: 1000,
            total_time_cap: Duration::from_millis(200),
            seed: 1,
        };
        match factorize(&n, &tiny).unwrap() {
            FactorOutcome::Partial { found, cofactor } => {
                assert_eq!(found.value() * cofactor, n);
            }
            FactorOutcome::Complete(_) => panic!("expected partial"),
        }
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&BigNat::one(), &budget()).unwrap(), BigNat::one());
        assert_eq!(radical(&nat("72"), &budget()).unwrap(), nat("6"));
        assert_eq!(radical(&nat("104729"), &budget()).unwrap(), nat("104729"));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&nat("1"), &budget()).unwrap());
        assert!(is_squarefree(&nat("10"), &budget()).unwrap());
        assert!(!is_squarefree(&nat("12"), &budget()).unwrap());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&nat("1"), &budget()).unwrap(), 0);
        assert_eq!(omega(&nat("30"), &budget()).unwrap(), 3);
        assert_eq!(omega(&nat("49"), &budget()).unwrap(), 1);
    }

    #[test]
    fn p_adic_order_examples() {
        assert_eq!(p_adic_order(&nat("3"), &nat("72")).unwrap(), 2);
        assert_eq!(p_adic_order(&nat("5"), &nat("72")).unwrap(), 0);
        let big = BigNat::from(2u32).pow(33);
        assert_eq!(p_adic_order(&nat("2"), &big).unwrap(), 33);
        assert!(matches!(
            p_adic_order(&nat("4"), &nat("72")),
            Err(ArithError::Domain(_))
        ));
    }

    #[test]
    fn q_part_examples() {
        assert_eq!(q_part(&nat("9"), &budget()).unwrap(), nat("3"));
        assert_eq!(q_part(&nat("10"), &budget()).unwrap(), nat("1"));
        assert_eq!(q_part(&nat("72"), &budget()).unwrap(), nat("12"));
    }

    #[test]
    fn primitive_counts() {
        assert_eq!(count_primitive(&nat("7"), &budget()).unwrap(), nat("3"));
        assert_eq!(count_primitive(&nat("3"), &budget()).unwrap(), nat("1"));
        assert_eq!(count_primitive(&nat("9"), &budget()).unwrap(), nat("3"));
        assert!(count_primitive(&nat("2"), &budget()).is_err());
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial_below(7).unwrap(), nat("30"));
        assert_eq!(primorial_below(3).unwrap(), nat("2"));
        assert_eq!(primorial_below(2).unwrap(), nat("1"));
    }

    #[test]
    fn sieve_agrees_with_factorization_up_to_1e6() {
        let squarefree = squarefree_upto(1_000_000);
        let mut iter = squarefree.iter().copied();
        let mut next = iter.next();
        for n in 1..=1_000_000u64 {
            let by_factor = factorize_u64(n, 1).iter().all(|&(_, e)| e == 1);
            let by_sieve = next == Some(n);
            if by_sieve {
                next = iter.next();
            }
            assert_eq!(by_factor, by_sieve, "disagree at {n}");
        }
    }

    proptest! {
        #[test]
        fn radical_divides_and_is_squarefree(n in 1u64..1_000_000_000_000) {
            let f = Factorization::from_pairs(
                factorize_u64(n, 1).into_iter().map(|(p, e)| (BigNat::from(p), e)).collect(),
            );
            let r = f.radical();
            prop_assert!((BigNat::from(n) % &r).is_zero());
            prop_assert!(is_squarefree(&r, &budget()).unwrap());
            // Q(n) * R(n) = n exactly
            prop_assert_eq!(f.q_part() * &r, BigNat::from(n));
            // squarefree iff q_part is 1
            prop_assert_eq!(f.is_squarefree(), f.q_part().is_one());
        }

        #[test]
        fn radical_is_multiplicative_on_coprimes(m in 1u64..1_000_000, n in 1u64..1_000_000) {
            let g = num_integer::gcd(m, n);
            let (m, n) = (m / g, n);
            if num_integer::gcd(m, n) == 1 {
                let rm = radical(&BigNat::from(m), &budget()).unwrap();
                let rn = radical(&BigNat::from(n), &budget()).unwrap();
                let rmn = radical(&BigNat::from(m * n), &budget()).unwrap();
                prop_assert_eq!(rm * rn, rmn);
            }
        }

        #[test]
        fn factorize_roundtrips(n in 1u64..u64::MAX) {
            let f = factorize(&BigNat::from(n), &budget()).unwrap().complete().unwrap();
            prop_assert_eq!(f.value(), BigNat::from(n));
            for (p, _) in f.factors() {
                prop_assert!(is_prime(p));
            }
        }
    }
}
