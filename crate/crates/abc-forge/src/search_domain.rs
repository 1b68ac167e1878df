//! Admissible product-kernel domains: for a given c, the squarefree D
//! values that an equation `f(d1) + f(d2) = c` may use, after removing
//! everything sharing a prime with the sum kernel.

use crate::core_arith::{self, ArithError, BigNat, FactoringBudget};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

/// The domain of a single c, with the bookkeeping that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct DomainReport {
    #[serde(with = "crate::triples::serde_nat")]
    pub c: BigNat,
    #[serde(with = "crate::triples::serde_nat")]
    pub q_part: BigNat,
    #[serde(with = "crate::triples::serde_nat")]
    pub g: BigNat,
    #[serde(with = "crate::triples::serde_nat")]
    pub d_max: BigNat,
    #[serde(serialize_with = "ser_u64_strings")]
    pub domain: Vec<u64>,
    #[serde(serialize_with = "ser_u64_strings")]
    pub excluded: Vec<u64>,
}

fn ser_u64_strings<S: serde::Serializer>(v: &[u64], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(u64::to_string))
}

/// Squarefree s with 1 < s < q, ascending.
pub fn strict_squarefree_below(q: u64) -> Vec<u64> {
    if q <= 2 {
        return Vec::new();
    }
    core_arith::squarefree_upto(q - 1)
        .into_iter()
        .filter(|&s| s > 1)
        .collect()
}

/// `G(c) = gcd(P(Q(c)), R(c))`, evaluated as the product of c's primes
/// below Q(c) (the primorial is squarefree, so the gcd collapses to this).
pub fn g_of(c: &BigNat, budget: &FactoringBudget) -> Result<BigNat, ArithError> {
    let f = core_arith::factorize(c, budget)?.complete()?;
    let q = f.q_part();
    if q.is_one() {
        return Err(ArithError::Domain("no domain exists for squarefree c"));
    }
    let mut g = BigNat::one();
    for (p, _) in f.factors() {
        if *p < q {
            g *= p;
        }
    }
    Ok(g)
}

/// Builds the full report for c. An empty domain is a valid result; it
/// occurs whenever Q(c) <= 2 or every admissible s is excluded.
pub fn search_domain(c: &BigNat, budget: &FactoringBudget) -> Result<DomainReport, ArithError> {
    let f = core_arith::factorize(c, budget)?.complete()?;
    let q = f.q_part();
    let q_small = q
        .to_u64()
        .ok_or(ArithError::Domain("kernel too large to enumerate"))?;
    let mut g = BigNat::one();
    let mut g_primes: Vec<u64> = Vec::new();
    if q_small > 1 {
        for (p, _) in f.factors() {
            if *p < q {
                g *= p;
                g_primes.push(p.to_u64().expect("prime below a u64 kernel"));
            }
        }
    }
    let candidates = strict_squarefree_below(q_small);
    let d_max = BigNat::from(candidates.last().copied().unwrap_or(1));
    let (excluded, domain): (Vec<u64>, Vec<u64>) = candidates
        .into_iter()
        .partition(|&s| g_primes.iter().any(|&p| s % p == 0));
    Ok(DomainReport {
        c: c.clone(),
        q_part: q,
        g,
        d_max,
        domain,
        excluded,
    })
}

/// Per-omega equation counts: each domain element with ω distinct primes
/// admits 2^ω − 1 ordered (d1, d2) splits.
#[derive(Debug, Clone, Serialize)]
pub struct EquationCount {
    /// (ω, number of domain elements with that ω), ascending by ω.
    pub per_omega: Vec<(u32, u64)>,
    pub total: u64,
}

pub fn m_omega(omega: u32) -> u64 {
    (1u64 << omega) - 1
}

pub fn equation_count(report: &DomainReport) -> EquationCount {
    let sieve_limit = report.domain.last().copied().unwrap_or(1) as usize;
    let sieve = core_arith::SpfSieve::new(sieve_limit);
    let mut per: Vec<(u32, u64)> = Vec::new();
    let mut total = 0u64;
    for &d in &report.domain {
        let omega = sieve.omega(d);
        match per.iter_mut().find(|(w, _)| *w == omega) {
            Some(entry) => entry.1 += 1,
            None => per.push((omega, 1)),
        }
        total += m_omega(omega);
    }
    per.sort_by_key(|&(w, _)| w);
    EquationCount { per_omega: per, total }
}
