//! Equivalence classes of constant squareful kernel, the families they
//! form under a fixed radical, and machine-checked no-hit certificates.

use crate::core_arith::{self, ArithError, BigNat, FactoringBudget};
use crate::cycles::{solve_f, SolveBounds};
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::collections::{BinaryHeap, HashSet};

fn radical_u64(n: u64) -> u64 {
    core_arith::factorize_u64(n, 1).iter().map(|&(p, _)| p).product()
}

fn is_squarefree_u64(n: u64) -> bool {
    core_arith::factorize_u64(n, 1).iter().all(|&(_, e)| e == 1)
}

/// Members c <= limit of the class with q_part(c) = q_value, ascending.
/// Generated as q_value * d3 over squarefree d3 divisible by the radical
/// of q_value, rather than scanning every integer.
pub fn class_members(q_value: u64, limit: u64) -> Vec<u64> {
    assert!(q_value >= 1);
    let rad = radical_u64(q_value);
    let mut out = Vec::new();
    let mut m = 1u64;
    loop {
        let d3 = rad * m;
        let c = match q_value.checked_mul(d3) {
            Some(c) if c <= limit => c,
            _ if m == 1 => return out,
            _ => break,
        };
        if c > 2 && is_squarefree_u64(d3) {
            out.push(c);
        }
        m += 1;
    }
    out
}

/// First `count` values v with radical(v) = q, ascending: the classes of
/// the family F_q.
pub fn family_classes(q: u64, count: usize) -> Result<Vec<u64>, ArithError> {
    if q < 2 || !is_squarefree_u64(q) {
        return Err(ArithError::Domain("family radical must be squarefree and > 1"));
    }
    let primes: Vec<u64> = core_arith::factorize_u64(q, 1)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let mut heap: BinaryHeap<std::cmp::Reverse<u64>> = BinaryHeap::new();
    let mut seen: HashSet<u64> = HashSet::new();
    heap.push(std::cmp::Reverse(q));
    seen.insert(q);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let std::cmp::Reverse(v) = match heap.pop() {
            Some(v) => v,
            None => break,
        };
        out.push(v);
        for &p in &primes {
            if let Some(next) = v.checked_mul(p) {
                if seen.insert(next) {
                    heap.push(std::cmp::Reverse(next));
                }
            }
        }
    }
    Ok(out)
}

/// Where multiplying a class member by squarefree s lands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// q_part of the scaled member: its new class value.
    pub new_class: u64,
    /// Radical of the new class value: which family it belongs to.
    pub family: u64,
    /// True when the member stays inside the original family F_q.
    pub same_family: bool,
}

/// Scales a member c of some class by squarefree s and reports the class
/// and family of the product.
pub fn scale_class(s: u64, c: u64) -> Result<Placement, ArithError> {
    if !is_squarefree_u64(s) {
        return Err(ArithError::Domain("scale factor must be squarefree"));
    }
    let budget = FactoringBudget::default();
    let q_old = core_arith::q_part(&BigNat::from(c), &budget)?;
    let family_old = core_arith::radical(&q_old, &budget)?;
    let scaled = BigNat::from(s) * BigNat::from(c);
    let q_new = core_arith::q_part(&scaled, &budget)?;
    let family_new = core_arith::radical(&q_new, &budget)?;
    Ok(Placement {
        new_class: q_new.to_u64().ok_or(ArithError::Unknown)?,
        family: family_new.to_u64().ok_or(ArithError::Unknown)?,
        same_family: family_new == family_old || q_old.is_one(),
    })
}

/// The classes with certified absence of hits for every member.
pub const ABSOLUTE_NO_HIT_CLASSES: [u64; 7] = [1, 2, 4, 6, 8, 10, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertReason {
    Squarefree,
    PrimorialMatch,
    FiniteCheck,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoHitCertificate {
    #[serde(with = "crate::triples::serde_nat")]
    pub c: BigNat,
    pub reason: CertReason,
}

impl NoHitCertificate {
    pub fn certified(&self) -> bool {
        self.reason != CertReason::None
    }
}

/// Certifies H(c) = 0 where possible. The finite check re-derives the
/// congruence exclusions over complete residue cycles instead of trusting
/// any stated list: an exhaustive empty solution set for every split of
/// every admissible D rules out all exponents at once.
pub fn certify_no_hit(c: &BigNat, budget: &FactoringBudget) -> NoHitCertificate {
    let none = NoHitCertificate {
        c: c.clone(),
        reason: CertReason::None,
    };
    let f = match core_arith::factorize(c, budget) {
        Ok(outcome) => match outcome.complete() {
            Ok(f) => f,
            Err(_) => return none,
        },
        Err(_) => return none,
    };
    let q = f.q_part();
    if q.is_one() {
        return NoHitCertificate {
            c: c.clone(),
            reason: CertReason::Squarefree,
        };
    }
    let mut g = BigNat::one();
    for (p, _) in f.factors() {
        if *p < q {
            g *= p;
        }
    }
    if let Some(q_small) = q.to_u64() {
        if let Ok(primorial) = core_arith::primorial_below(q_small) {
            if primorial == g {
                return NoHitCertificate {
                    c: c.clone(),
                    reason: CertReason::PrimorialMatch,
                };
            }
        }
        if ABSOLUTE_NO_HIT_CLASSES.contains(&q_small) && finite_check(c, q_small, budget) {
            return NoHitCertificate {
                c: c.clone(),
                reason: CertReason::FiniteCheck,
            };
        }
    }
    none
}

/// Full-cycle verification that no split of any admissible D can solve
/// the class congruence mod z = radical(Q) * Q.
fn finite_check(c: &BigNat, q: u64, budget: &FactoringBudget) -> bool {
    let z = radical_u64(q) * q;
    let report = match crate::search_domain::search_domain(c, budget) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let bounds = SolveBounds::default();
    for &d in &report.domain {
        for d1 in 1..=d {
            if d % d1 != 0 || d1 * d1 > d {
                continue;
            }
            let d2 = d / d1;
            match solve_f(d1, d2, z, &bounds) {
                Ok(set) if set.exhaustive && set.is_empty() => {}
                _ => return false,
            }
        }
    }
    true
}
