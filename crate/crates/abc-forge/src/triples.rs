//! The abc-triple data model: validation, the hit predicate, quality and
//! epsilon measures, and standard-form decompositions.

use crate::core_arith::{
    self, ArithError, BigNat, FactorOutcome, FactoringBudget, Factorization,
};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// A validated triple: `a + b = c`, `1 <= a < b < c`, pairwise coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcTriple {
    a: BigNat,
    b: BigNat,
    c: BigNat,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("a + b does not equal c")]
    SumMismatch,
    #[error("ordering violated: need 1 <= a < b")]
    Ordering,
    #[error("a and b share a common factor")]
    CommonFactor,
}

impl AbcTriple {
    /// Constructs only when every condition holds. Pairwise coprimality
    /// follows from gcd(a, b) = 1 since c = a + b, and so does the parity
    /// law for even c (two even parts would share the factor 2).
    pub fn validate(a: BigNat, b: BigNat, c: BigNat) -> Result<AbcTriple, TripleError> {
        if a.is_zero() || a >= b {
            return Err(TripleError::Ordering);
        }
        if &a + &b != c {
            return Err(TripleError::SumMismatch);
        }
        if !a.gcd(&b).is_one() {
            return Err(TripleError::CommonFactor);
        }
        Ok(AbcTriple { a, b, c })
    }

    pub fn a(&self) -> &BigNat {
        &self.a
    }
    pub fn b(&self) -> &BigNat {
        &self.b
    }
    pub fn c(&self) -> &BigNat {
        &self.c
    }
}

/// Outcome of a budget-limited yes/no question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HitStatus {
    Yes,
    No,
    Unknown,
}

/// `yes` iff `R(abc) < c`. Unknown when a radical cannot be resolved
/// within the budget.
pub fn is_hit(t: &AbcTriple, budget: &FactoringBudget) -> HitStatus {
    let radicals = [&t.a, &t.b, &t.c].map(|n| core_arith::radical(n, budget));
    match radicals {
        [Ok(ra), Ok(rb), Ok(rc)] => {
            if ra * rb * rc < t.c {
                HitStatus::Yes
            } else {
                HitStatus::No
            }
        }
        _ => HitStatus::Unknown,
    }
}

/// Equivalent hit test `R(ab) < Q(c)`.
pub fn is_hit_kernel_form(t: &AbcTriple, budget: &FactoringBudget) -> HitStatus {
    let rab = match (core_arith::radical(&t.a, budget), core_arith::radical(&t.b, budget)) {
        (Ok(ra), Ok(rb)) => ra * rb,
        _ => return HitStatus::Unknown,
    };
    match core_arith::q_part(&t.c, budget) {
        Ok(q) => {
            if rab < q {
                HitStatus::Yes
            } else {
                HitStatus::No
            }
        }
        Err(_) => HitStatus::Unknown,
    }
}

/// Natural log of a positive BigNat, accurate to well below 1e-12 relative
/// error: top bits give the mantissa, the rest scales by ln 2.
pub fn ln_big(n: &BigNat) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 53 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Quality `log c / log R(abc)`.
pub fn quality(t: &AbcTriple, budget: &FactoringBudget) -> Result<f64, ArithError> {
    let ra = core_arith::radical(&t.a, budget)?;
    let rb = core_arith::radical(&t.b, budget)?;
    let rc = core_arith::radical(&t.c, budget)?;
    let r = ra * rb * rc;
    Ok(ln_big(&t.c) / ln_big(&r))
}

/// Epsilon per the theta form: `log(Q(c)/D) / (log D + log d3)`.
pub fn epsilon(t: &AbcTriple, budget: &FactoringBudget) -> Result<f64, ArithError> {
    let d1 = core_arith::radical(&t.a, budget)?;
    let d2 = core_arith::radical(&t.b, budget)?;
    let d3 = core_arith::radical(&t.c, budget)?;
    let q = core_arith::q_part(&t.c, budget)?;
    let d = d1 * d2;
    // theta = Q(c)/D as a ratio of logs; theta itself may be < 1 for non-hits
    let log_theta = ln_big(&q) - ln_big(&d);
    Ok(log_theta / (ln_big(&d) + ln_big(&d3)))
}

/// Exact comparison of `c` against `R(abc)^(num/den)`: true iff
/// `quality >= num/den`, decided in integer arithmetic (no rounding).
pub fn quality_at_least(
    t: &AbcTriple,
    num: u32,
    den: u32,
    budget: &FactoringBudget,
) -> Result<bool, ArithError> {
    if den == 0 {
        return Err(ArithError::Domain("denominator must be positive"));
    }
    let ra = core_arith::radical(&t.a, budget)?;
    let rb = core_arith::radical(&t.b, budget)?;
    let rc = core_arith::radical(&t.c, budget)?;
    let r = ra * rb * rc;
    Ok(t.c.pow(den) >= r.pow(num))
}

/// The standard form `d1·Q(a) + d2·Q(b) = d3·Q(c)` together with the
/// squarefree/squareful split of each part: `n = h · f(x)` with `h`
/// squarefree, `f(x)` squareful, `x = R(f(x))` and `d = h·x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardForm {
    #[serde(with = "serde_nat")]
    pub d1: BigNat,
    #[serde(with = "serde_nat")]
    pub d2: BigNat,
    #[serde(with = "serde_nat")]
    pub d3: BigNat,
    #[serde(with = "serde_nat")]
    pub qa: BigNat,
    #[serde(with = "serde_nat")]
    pub qb: BigNat,
    #[serde(with = "serde_nat")]
    pub qc: BigNat,
    /// Squarefree parts h1, h2, h3 (primes with exponent 1).
    #[serde(with = "serde_nat_array")]
    pub h: [BigNat; 3],
    /// Radicals x1, x2, x3 of the squareful parts.
    #[serde(with = "serde_nat_array")]
    pub x: [BigNat; 3],
}

fn split(f: &Factorization) -> (BigNat, BigNat, BigNat) {
    // returns (h, x, f(x)) with h squarefree, f(x) = prod p^e over e >= 2
    let mut h = BigNat::one();
    let mut x = BigNat::one();
    let mut fx = BigNat::one();
    for (p, e) in f.factors() {
        if *e == 1 {
            h *= p;
        } else {
            x *= p;
            fx *= p.pow(*e);
        }
    }
    (h, x, fx)
}

/// Decomposes a validated triple; needs full factorizations of all parts.
pub fn standard_form(t: &AbcTriple, budget: &FactoringBudget) -> Result<StandardForm, ArithError> {
    let fa = core_arith::factorize(&t.a, budget)?.complete()?;
    let fb = core_arith::factorize(&t.b, budget)?.complete()?;
    let fc = core_arith::factorize(&t.c, budget)?.complete()?;
    let (h1, x1, _) = split(&fa);
    let (h2, x2, _) = split(&fb);
    let (h3, x3, _) = split(&fc);
    Ok(StandardForm {
        d1: fa.radical(),
        d2: fb.radical(),
        d3: fc.radical(),
        qa: fa.q_part(),
        qb: fb.q_part(),
        qc: fc.q_part(),
        h: [h1, h2, h3],
        x: [x1, x2, x3],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Oracle,
    PhiGenerator,
    PsiGenerator,
    External,
}

/// A triple with its cached kernels and measures. `verified == Yes` means
/// `d1·d2·d3 < c` was established bit-exactly; `Unknown` means the budget
/// ran out, never that the record was dropped.
#[derive(Debug, Clone, Serialize)]
pub struct HitRecord {
    #[serde(with = "serde_nat")]
    pub a: BigNat,
    #[serde(with = "serde_nat")]
    pub b: BigNat,
    #[serde(with = "serde_nat")]
    pub c: BigNat,
    pub factors_a: Option<Factorization>,
    pub factors_b: Option<Factorization>,
    pub factors_c: Option<Factorization>,
    #[serde(with = "serde_nat_opt")]
    pub d1: Option<BigNat>,
    #[serde(with = "serde_nat_opt")]
    pub d2: Option<BigNat>,
    #[serde(with = "serde_nat_opt")]
    pub d3: Option<BigNat>,
    pub quality: Option<f64>,
    pub epsilon: Option<f64>,
    pub provenance: Provenance,
    pub verified: HitStatus,
}

impl HitRecord {
    /// Factors all three parts within the budget and fills in what resolves.
    pub fn build(t: &AbcTriple, budget: &FactoringBudget, provenance: Provenance) -> HitRecord {
        let fac = |n: &BigNat| match core_arith::factorize(n, budget) {
            Ok(FactorOutcome::Complete(f)) => Some(f),
            _ => None,
        };
        let factors_a = fac(&t.a);
        let factors_b = fac(&t.b);
        let factors_c = fac(&t.c);
        let d1 = factors_a.as_ref().map(Factorization::radical);
        let d2 = factors_b.as_ref().map(Factorization::radical);
        let d3 = factors_c.as_ref().map(Factorization::radical);
        let (quality, epsilon, verified) = match (&d1, &d2, &d3) {
            (Some(d1), Some(d2), Some(d3)) => {
                let r = d1 * d2 * d3;
                let q = ln_big(&t.c) / ln_big(&r);
                let verified = if r < t.c { HitStatus::Yes } else { HitStatus::No };
                (Some(q), Some(q - 1.0), verified)
            }
            _ => (None, None, HitStatus::Unknown),
        };
        HitRecord {
            a: t.a.clone(),
            b: t.b.clone(),
            c: t.c.clone(),
            factors_a,
            factors_b,
            factors_c,
            d1,
            d2,
            d3,
            quality,
            epsilon,
            provenance,
            verified,
        }
    }

    pub fn triple(&self) -> AbcTriple {
        AbcTriple {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

pub(crate) mod serde_nat {
    use super::BigNat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(n: &BigNat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&n.to_string())
    }
}

pub(crate) mod serde_nat_opt {
    use super::BigNat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(n: &Option<BigNat>, ser: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => ser.serialize_some(&n.to_string()),
            None => ser.serialize_none(),
        }
    }
}

pub(crate) mod serde_nat_array {
    use super::BigNat;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(ns: &[BigNat; 3], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(3))?;
        for n in ns {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::str::FromStr;

    fn nat(s: &str) -> BigNat {
        BigNat::from_str(s).unwrap()
    }

    fn triple(a: u64, b: u64, c: u64) -> AbcTriple {
        AbcTriple::validate(BigNat::from(a), BigNat::from(b), BigNat::from(c)).unwrap()
    }

    fn budget() -> FactoringBudget {
        FactoringBudget::default()
    }

    #[test]
    fn validate_examples() {
        assert!(AbcTriple::validate(nat("1"), nat("8"), nat("9")).is_ok());
        assert_eq!(
            AbcTriple::validate(nat("2"), nat("4"), nat("6")),
            Err(TripleError::CommonFactor)
        );
        assert_eq!(
            AbcTriple::validate(nat("5"), nat("3"), nat("8")),
            Err(TripleError::Ordering)
        );
        assert_eq!(
            AbcTriple::validate(nat("1"), nat("8"), nat("10")),
            Err(TripleError::SumMismatch)
        );
    }

    #[test]
    fn hit_examples() {
        assert_eq!(is_hit(&triple(1, 8, 9), &budget()), HitStatus::Yes);
        assert_eq!(is_hit(&triple(1, 2, 3), &budget()), HitStatus::No);
        assert_eq!(is_hit(&triple(5, 27, 32), &budget()), HitStatus::Yes);
        // kernel form agrees
        assert_eq!(is_hit_kernel_form(&triple(1, 8, 9), &budget()), HitStatus::Yes);
        assert_eq!(is_hit_kernel_form(&triple(1, 2, 3), &budget()), HitStatus::No);
    }

    #[test]
    fn quality_examples() {
        let q = quality(&triple(1, 8, 9), &budget()).unwrap();
        assert!((q - 9f64.ln() / 6f64.ln()).abs() < 1e-12);
        let q = quality(&triple(1, 2, 3), &budget()).unwrap();
        assert!((q - 3f64.ln() / 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn reyssat_quality() {
        let b = nat("3").pow(10) * nat("109");
        let c = nat("23").pow(5);
        let t = AbcTriple::validate(nat("2"), b, c).unwrap();
        let q = quality(&t, &budget()).unwrap();
        assert!((q - 1.62991).abs() < 1e-5, "quality {q}");
        let e = epsilon(&t, &budget()).unwrap();
        assert!((e - 0.62991).abs() < 1e-5, "epsilon {e}");
    }

    #[test]
    fn epsilon_examples() {
        let e = epsilon(&triple(1, 8, 9), &budget()).unwrap();
        assert!((e - 0.22629).abs() < 1e-4, "epsilon {e}");
    }

    #[test]
    fn exact_threshold_comparison() {
        // lambda(1, 8, 9) ≈ 1.226: at least 1/1, below 2/1
        let t = triple(1, 8, 9);
        assert!(quality_at_least(&t, 1, 1, &budget()).unwrap());
        assert!(!quality_at_least(&t, 2, 1, &budget()).unwrap());
        // exact boundary: c = R^1 for squarefree triples is impossible
        // (R includes c itself), so >= 1 here means a genuine hit
        assert!(!quality_at_least(&triple(1, 2, 3), 1, 1, &budget()).unwrap());
    }

    #[test]
    fn standard_form_examples() {
        // (1, 2^5·7, 3^2·5^2) -> 1 + 14·2^4 = 15·15
        let t = AbcTriple::validate(nat("1"), nat("224"), nat("225")).unwrap();
        let sf = standard_form(&t, &budget()).unwrap();
        assert_eq!(sf.d2, nat("14"));
        assert_eq!(sf.qb, nat("16"));
        assert_eq!(sf.d3, nat("15"));
        assert_eq!(sf.qc, nat("15"));
        assert_eq!(&sf.d1 * &sf.qa + &sf.d2 * &sf.qb, &sf.d3 * &sf.qc);

        // (3^3·17, 5^5, 2^9·7) -> 51·3^2 + 5·5^4 = 14·2^8
        let t = AbcTriple::validate(nat("459"), nat("3125"), nat("3584")).unwrap();
        let sf = standard_form(&t, &budget()).unwrap();
        assert_eq!((sf.h[0].clone(), sf.x[0].clone()), (nat("17"), nat("3")));
        assert_eq!(sf.d1, nat("51"));
        assert_eq!(sf.qa, nat("9"));
        assert_eq!(sf.d2, nat("5"));
        assert_eq!(sf.qb, nat("625"));
        assert_eq!(sf.d3, nat("14"));
        assert_eq!(sf.qc, nat("256"));

        // all-squarefree triple
        let sf = standard_form(&triple(1, 2, 3), &budget()).unwrap();
        assert_eq!((sf.qa, sf.qb, sf.qc), (nat("1"), nat("1"), nat("1")));
    }

    #[test]
    fn hit_record_schema() {
        let rec = HitRecord::build(&triple(1, 8, 9), &budget(), Provenance::External);
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["a"], "1");
        assert_eq!(json["c"], "9");
        assert_eq!(json["d3"], "3");
        assert_eq!(json["verified"], "yes");
        assert_eq!(json["provenance"], "external");
        assert_eq!(json["factors_b"][0][0], "2");
        assert_eq!(json["factors_b"][0][1], 3);
    }

    fn coprime_pair(x: u64, y: u64) -> Option<(u64, u64)> {
        let g = num_integer::gcd(x, y);
        let (x, y) = (x / g, y / g);
        if x == 0 || y == 0 || x == y {
            return None;
        }
        Some((x.min(y), x.max(y)))
    }

    proptest! {
        // epsilon = quality - 1 is an exact identity; 1e-12 covers the
        // float evaluation of both routes
        #[test]
        fn epsilon_is_quality_minus_one(x in 1u64..2_000_000, y in 1u64..2_000_000) {
            if let Some((a, b)) = coprime_pair(x, y) {
                let t = triple(a, b, a + b);
                let q = quality(&t, &budget()).unwrap();
                let e = epsilon(&t, &budget()).unwrap();
                prop_assert!((e - (q - 1.0)).abs() < 1e-12, "q {q} e {e}");
            }
        }

        #[test]
        fn standard_form_recomposes(x in 1u64..2_000_000, y in 1u64..2_000_000) {
            if let Some((a, b)) = coprime_pair(x, y) {
                let t = triple(a, b, a + b);
                let sf = standard_form(&t, &budget()).unwrap();
                prop_assert_eq!(&sf.d1 * &sf.qa + &sf.d2 * &sf.qb, &sf.d3 * &sf.qc);
                prop_assert_eq!(&sf.d1 * &sf.qa, BigNat::from(a));
                // h·x rebuilds each kernel
                prop_assert_eq!(&sf.h[0] * &sf.x[0], sf.d1.clone());
                prop_assert_eq!(&sf.h[2] * &sf.x[2], sf.d3.clone());
            }
        }

        // R(abc) is even for every valid triple
        #[test]
        fn radical_is_even(x in 1u64..500_000, y in 1u64..500_000) {
            if let Some((a, b)) = coprime_pair(x, y) {
                let t = triple(a, b, a + b);
                let ra = core_arith::radical(t.a(), &budget()).unwrap();
                let rb = core_arith::radical(t.b(), &budget()).unwrap();
                let rc = core_arith::radical(t.c(), &budget()).unwrap();
                prop_assert!(((ra * rb * rc) % 2u32).is_zero());
            }
        }
    }
}
