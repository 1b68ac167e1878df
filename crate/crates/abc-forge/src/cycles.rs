//! Residue-cycle machinery: periodic power sequences mod m, congruence
//! solvers for the F and E equation forms, exponent lifting, and the
//! recursive hit generators built on top of them.

use crate::core_arith::{self, ArithError, BigNat, FactoringBudget};
use crate::triples::{AbcTriple, HitRecord, HitStatus, Provenance, TripleError};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeMap;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least t >= 1 with p^t = 1 mod m. Starts from phi(m) and strips prime
/// factors that keep the power at 1.
pub fn multiplicative_order(p: u64, m: u64) -> Result<u64, ArithError> {
    if m < 2 {
        return Err(ArithError::Domain("modulus must be at least 2"));
    }
    if gcd(p % m, m) != 1 {
        return Err(ArithError::Domain("base must be coprime to the modulus"));
    }
    let mut phi = 1u64;
    for (q, e) in core_arith::factorize_u64(m, 1) {
        phi *= q.pow(e - 1) * (q - 1);
    }
    let mut t = phi;
    for (f, _) in core_arith::factorize_u64(phi, 1) {
        while t % f == 0 && powmod(p, t / f, m) == 1 {
            t /= f;
        }
    }
    Ok(t)
}

/// One full cycle of p^e mod m: residues r_1 .. r_t with r_t = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSequence {
    pub base: u64,
    pub modulus: u64,
    pub period: u64,
    residues: Vec<u64>,
}

impl CycleSequence {
    pub fn new(base: u64, modulus: u64) -> Result<CycleSequence, ArithError> {
        let period = multiplicative_order(base, modulus)?;
        let mut residues = Vec::with_capacity(period as usize);
        let mut r = 1u64;
        for _ in 0..period {
            r = mulmod(r, base % modulus, modulus);
            residues.push(r);
        }
        Ok(CycleSequence {
            base,
            modulus,
            period,
            residues,
        })
    }

    /// The trivial cycle of the empty side: base 1, period 1.
    fn unit(modulus: u64) -> CycleSequence {
        CycleSequence {
            base: 1,
            modulus,
            period: 1,
            residues: vec![1],
        }
    }

    /// Residue at exponent e >= 1, using periodicity for e beyond t.
    pub fn residue(&self, e: u64) -> u64 {
        debug_assert!(e >= 1);
        self.residues[((e - 1) % self.period) as usize]
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// One lifting step: from a residue mod q^nu to the matching exponent and
/// residue mod q^(nu+1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub exponent: u64,
    pub residue: u64,
    pub period: u64,
    /// Whether the closed form r' = r + q*t agrees with the directly
    /// computed residue; the direct value is authoritative.
    pub formula_matches: bool,
}

/// Lifts p^e = r_e mod q^nu one power of q up, taking the smallest step
/// e' = e + t that preserves the residue mod q^nu.
pub fn lift(p: u64, q: u64, nu: u32, e: u64, r_e: u64) -> Result<LiftStep, ArithError> {
    let m = q
        .checked_pow(nu)
        .ok_or(ArithError::Domain("modulus overflows machine range"))?;
    let m_up = m
        .checked_mul(q)
        .ok_or(ArithError::Domain("lifted modulus overflows machine range"))?;
    if powmod(p, e, m) != r_e % m {
        return Err(ArithError::Domain("residue does not match p^e"));
    }
    let t = multiplicative_order(p, m)?;
    let exponent = e + t;
    let residue = powmod(p, exponent, m_up);
    let claimed = (r_e as u128 + q as u128 * t as u128) % m_up as u128;
    Ok(LiftStep {
        exponent,
        residue,
        period: t,
        formula_matches: claimed == residue as u128,
    })
}

/// Caps on solver effort. Scans larger than `max_scan` fundamental-domain
/// points are skipped and the set comes back marked non-exhaustive.
#[derive(Debug, Clone, Copy)]
pub struct SolveBounds {
    pub max_scan: u64,
}

impl Default for SolveBounds {
    fn default() -> Self {
        SolveBounds { max_scan: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceKind {
    F,
    E,
}

/// Fundamental-domain solutions of a two-sided congruence. `primes` lists
/// side one then side two; `split` is where side two begins. Each offset
/// vector gives one exponent per prime, each in 1..=period.
#[derive(Debug, Clone, Serialize)]
pub struct CongruenceSolutionSet {
    pub modulus: u64,
    pub kind: CongruenceKind,
    pub primes: Vec<u64>,
    pub split: usize,
    pub periods: Vec<u64>,
    pub offsets: Vec<Vec<u64>>,
    pub exhaustive: bool,
    #[serde(skip)]
    cycles: Vec<CycleSequence>,
}

impl CongruenceSolutionSet {
    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    fn side_product(&self, exps: &[u64], range: std::ops::Range<usize>) -> u64 {
        let mut acc = 1 % self.modulus;
        for i in range {
            acc = mulmod(acc, self.cycles[i].residue(exps[i]), self.modulus);
        }
        acc
    }

    fn satisfies(&self, exps: &[u64]) -> bool {
        let lhs = self.side_product(exps, 0..self.split);
        let rhs = self.side_product(exps, self.split..self.primes.len());
        match self.kind {
            CongruenceKind::F => (lhs + rhs) % self.modulus == 0,
            CongruenceKind::E => lhs == rhs,
        }
    }
}

fn distinct_primes(d: u64) -> Vec<u64> {
    if d <= 1 {
        return Vec::new();
    }
    core_arith::factorize_u64(d, 1).into_iter().map(|(p, _)| p).collect()
}

fn build_set(
    side1: Vec<u64>,
    side2: Vec<u64>,
    modulus: u64,
    kind: CongruenceKind,
    dummy_side1: bool,
    bounds: &SolveBounds,
) -> Result<CongruenceSolutionSet, ArithError> {
    if modulus < 2 {
        return Err(ArithError::Domain("modulus must be at least 2"));
    }
    let split = if dummy_side1 && side1.is_empty() { 1 } else { side1.len() };
    let mut primes: Vec<u64> = Vec::new();
    let mut cycles: Vec<CycleSequence> = Vec::new();
    if dummy_side1 && side1.is_empty() {
        primes.push(1);
        cycles.push(CycleSequence::unit(modulus));
    }
    for p in side1.into_iter().chain(side2) {
        if gcd(p % modulus, modulus) != 1 {
            return Err(ArithError::Domain("side primes must be coprime to the modulus"));
        }
        cycles.push(CycleSequence::new(p, modulus)?);
        primes.push(p);
    }
    let periods: Vec<u64> = cycles.iter().map(|c| c.period).collect();
    let mut set = CongruenceSolutionSet {
        modulus,
        kind,
        primes,
        split,
        periods: periods.clone(),
        offsets: Vec::new(),
        exhaustive: false,
        cycles,
    };
    let scan: u128 = periods.iter().map(|&t| t as u128).product();
    if scan > bounds.max_scan as u128 {
        return Ok(set);
    }
    // odometer over the fundamental domain, lexicographic
    let k = periods.len();
    let mut exps = vec![1u64; k];
    loop {
        if set.satisfies(&exps) {
            set.offsets.push(exps.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                set.exhaustive = true;
                return Ok(set);
            }
            i -= 1;
            if exps[i] < periods[i] {
                exps[i] += 1;
                break;
            }
            exps[i] = 1;
        }
    }
}

/// Solutions to `f(d1) + f(d2) = 0 mod z` over the residue cycles of the
/// primes of d1 and d2. An exhaustive empty set certifies nonexistence
/// for all exponents.
pub fn solve_f(
    d1: u64,
    d2: u64,
    z: u64,
    bounds: &SolveBounds,
) -> Result<CongruenceSolutionSet, ArithError> {
    build_set(
        distinct_primes(d1),
        distinct_primes(d2),
        z,
        CongruenceKind::F,
        false,
        bounds,
    )
}

/// Solutions to `f(d3) - f(d1) = 0 mod y`. The d3 side comes first; a
/// fixed side of 1 appears as the unit cycle with period 1.
pub fn solve_e(
    d3: u64,
    d1: u64,
    y: u64,
    bounds: &SolveBounds,
) -> Result<CongruenceSolutionSet, ArithError> {
    let side3 = distinct_primes(d3);
    if side3.is_empty() {
        return Err(ArithError::Domain("sum kernel side must exceed 1"));
    }
    let mut set = build_set(
        side3,
        distinct_primes(d1),
        y,
        CongruenceKind::E,
        false,
        bounds,
    )?;
    if d1 <= 1 {
        // re-run with the unit side so the report carries t_1 = 1
        set = build_set(
            Vec::new(),
            distinct_primes(d3),
            y,
            CongruenceKind::E,
            true,
            bounds,
        )?;
        // unit side first means side one is the fixed 1; flip so d3 leads
        for off in &mut set.offsets {
            off.rotate_left(1);
        }
        set.primes.rotate_left(1);
        set.periods.rotate_left(1);
        set.cycles.rotate_left(1);
        set.split = set.primes.len() - 1;
    }
    Ok(set)
}

/// Picks the recursion modulus for a base hit: among the repeated primes
/// of b, the smallest power p^e with e > 1, p^e | b and p^e > d1*d3.
pub fn derive_modulus(rec: &HitRecord, d1: u64) -> Result<u64, ArithError> {
    let fb = rec
        .factors_b
        .as_ref()
        .ok_or(ArithError::Domain("base hit must be fully factored"))?;
    let d3 = rec
        .d3
        .as_ref()
        .and_then(BigNat::to_u64)
        .ok_or(ArithError::Domain("sum kernel must be available"))?;
    let floor = d1
        .checked_mul(d3)
        .ok_or(ArithError::Domain("kernel product overflows machine range"))?;
    for (p, e) in fb.factors() {
        if *e < 2 {
            continue;
        }
        let p = match p.to_u64() {
            Some(p) => p,
            None => continue,
        };
        for k in 2..=*e {
            match p.checked_pow(k) {
                Some(y) if y > floor => return Ok(y),
                Some(_) => continue,
                None => break,
            }
        }
    }
    Err(ArithError::Domain("no prime power of b exceeds the kernel product"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Ordering,
    Coprimality,
    RadicalBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenStatus {
    Verified,
    Unverified,
    Rejected(RejectReason),
}

/// Position of one prime inside its cycle: exponent = offset + period*(cycles-1).
#[derive(Debug, Clone, Serialize)]
pub struct Coordinate {
    pub prime: u64,
    pub offset: u64,
    pub period: u64,
    pub cycles: u64,
}

impl Coordinate {
    pub fn exponent(&self) -> u64 {
        self.offset + self.period * (self.cycles - 1)
    }
}

/// One generator emission: a candidate from the cycle lattice, with the
/// materialized record when it fit under the size guard.
#[derive(Debug, Clone)]
pub struct GeneratedHit {
    pub coordinates: Vec<Coordinate>,
    pub approx_bits: f64,
    pub modulus: u64,
    pub kind: CongruenceKind,
    pub status: GenStatus,
    pub record: Option<HitRecord>,
}

impl GeneratedHit {
    pub fn is_hit(&self) -> bool {
        matches!(self.status, GenStatus::Verified | GenStatus::Unverified)
    }
}

impl Serialize for GeneratedHit {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(None)?;
        let (status, reason) = match &self.status {
            GenStatus::Verified => ("verified", None),
            GenStatus::Unverified => ("unverified", Some("unverified")),
            GenStatus::Rejected(r) => (
                "rejected",
                Some(match r {
                    RejectReason::Ordering => "ordering",
                    RejectReason::Coprimality => "coprimality",
                    RejectReason::RadicalBound => "radical-bound",
                }),
            ),
        };
        map.serialize_entry("status", status)?;
        if let Some(reason) = reason {
            map.serialize_entry("reason", reason)?;
        }
        map.serialize_entry("modulus", &self.modulus)?;
        map.serialize_entry("kind", &self.kind)?;
        map.serialize_entry("approx_bits", &self.approx_bits)?;
        map.serialize_entry("coordinates", &self.coordinates)?;
        map.serialize_entry("record", &self.record)?;
        map.end()
    }
}

/// Knobs shared by both generators.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    /// Override for the default modulus choice.
    pub modulus: Option<u64>,
    /// Candidates above this bit size are emitted as coordinates only.
    pub max_bits: f64,
    pub bounds: SolveBounds,
    /// Safety cap on lattice points visited per run.
    pub pop_cap: u64,
    pub budget: FactoringBudget,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            modulus: None,
            max_bits: 1_000_000.0,
            bounds: SolveBounds::default(),
            pop_cap: 200_000,
            budget: FactoringBudget::default(),
        }
    }
}

/// Default F-form modulus: q times the squareful kernel of the base c.
fn default_modulus_f(base: &HitRecord) -> Result<u64, ArithError> {
    let fc = base
        .factors_c
        .as_ref()
        .ok_or(ArithError::Domain("base hit must be fully factored"))?;
    let q_part = fc.q_part();
    let mut q = BigNat::one();
    for (p, e) in fc.factors() {
        if *e >= 2 {
            q *= p;
        }
    }
    if q.is_one() {
        return Err(ArithError::Domain("base c is squarefree"));
    }
    (q * q_part)
        .to_u64()
        .ok_or(ArithError::Domain("modulus exceeds machine range"))
}

struct Candidate {
    key: f64,
    off: usize,
    ks: Vec<u64>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    // min-heap by key via reversed comparison
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.off.cmp(&self.off))
            .then_with(|| other.ks.cmp(&self.ks))
    }
}

struct Lattice<'a> {
    sol: &'a CongruenceSolutionSet,
    heap: BinaryHeap<Candidate>,
    seen: HashSet<(usize, Vec<u64>)>,
    log2p: Vec<f64>,
}

impl<'a> Lattice<'a> {
    fn new(sol: &'a CongruenceSolutionSet, key: impl Fn(&[u64]) -> f64) -> Lattice<'a> {
        let log2p = sol.primes.iter().map(|&p| (p.max(1) as f64).log2()).collect();
        let mut lat = Lattice {
            sol,
            heap: BinaryHeap::new(),
            seen: HashSet::new(),
            log2p,
        };
        for off in 0..sol.offsets.len() {
            let ks = vec![1u64; sol.primes.len()];
            let exps = lat.exponents(off, &ks);
            lat.seen.insert((off, ks.clone()));
            lat.heap.push(Candidate {
                key: key(&exps),
                off,
                ks,
            });
        }
        lat
    }

    fn exponents(&self, off: usize, ks: &[u64]) -> Vec<u64> {
        self.sol.offsets[off]
            .iter()
            .zip(ks)
            .zip(&self.sol.periods)
            .map(|((&mu, &k), &t)| mu + t * (k - 1))
            .collect()
    }

    fn side_log2(&self, exps: &[u64], range: std::ops::Range<usize>) -> f64 {
        range.map(|i| exps[i] as f64 * self.log2p[i]).sum()
    }

    fn push_successors(
        &mut self,
        off: usize,
        ks: &[u64],
        allowed: impl Fn(usize) -> bool,
        key: impl Fn(&[u64]) -> f64,
    ) {
        for i in 0..ks.len() {
            if self.sol.primes[i] <= 1 || !allowed(i) {
                continue;
            }
            let mut next = ks.to_vec();
            next[i] += 1;
            if self.seen.insert((off, next.clone())) {
                let exps = self.exponents(off, &next);
                self.heap.push(Candidate {
                    key: key(&exps),
                    off,
                    ks: next,
                });
            }
        }
    }
}

fn materialize(primes: &[u64], exps: &[u64], range: std::ops::Range<usize>) -> BigNat {
    let mut acc = BigNat::one();
    for i in range {
        if primes[i] > 1 {
            acc *= BigNat::from(primes[i]).pow(exps[i] as u32);
        }
    }
    acc
}

/// Log2 of a + b given the two side logs.
fn sum_log2(la: f64, lb: f64) -> f64 {
    let (hi, lo) = if la > lb { (la, lb) } else { (lb, la) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// The F-form generator: fixes (d1, d2) and walks the solution lattice in
/// ascending c, emitting hits, rejects and over-budget candidates until
/// `count` hits have been produced.
pub fn phi_sequence(
    base: &HitRecord,
    d1: u64,
    d2: u64,
    count: usize,
    cfg: &GeneratorConfig,
) -> Result<Vec<GeneratedHit>, ArithError> {
    let z = match cfg.modulus {
        Some(z) => z,
        None => default_modulus_f(base)?,
    };
    let mut sol = solve_f(d1, d2, z, &cfg.bounds)?;
    if !sol.exhaustive && sol.offsets.is_empty() {
        // seed from the base hit's own exponents, reduced into the domain
        if let Some(seed) = seed_offsets(base, &sol) {
            sol.offsets.push(seed);
        }
    }
    let split = sol.split;
    let n = sol.primes.len();
    let key = |lat: &Lattice, exps: &[u64]| {
        sum_log2(lat.side_log2(exps, 0..split), lat.side_log2(exps, split..n))
    };
    let mut lat = Lattice::new(&sol, |exps| {
        let l1: f64 = exps
            .iter()
            .zip(&sol.primes)
            .take(split)
            .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
            .sum();
        let l2: f64 = exps
            .iter()
            .zip(&sol.primes)
            .skip(split)
            .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
            .sum();
        sum_log2(l1, l2)
    });
    let mut out = Vec::new();
    let mut hits = 0usize;
    let mut pops = 0u64;
    while hits < count && pops < cfg.pop_cap {
        let cand = match lat.heap.pop() {
            Some(c) => c,
            None => break,
        };
        pops += 1;
        let exps = lat.exponents(cand.off, &cand.ks);
        let coordinates: Vec<Coordinate> = (0..n)
            .map(|i| Coordinate {
                prime: sol.primes[i],
                offset: sol.offsets[cand.off][i],
                period: sol.periods[i],
                cycles: cand.ks[i],
            })
            .collect();
        let approx = key(&lat, &exps);
        let emission = if approx > cfg.max_bits {
            hits += 1;
            GeneratedHit {
                coordinates,
                approx_bits: approx,
                modulus: z,
                kind: CongruenceKind::F,
                status: GenStatus::Unverified,
                record: None,
            }
        } else {
            let a = materialize(&sol.primes, &exps, 0..split);
            let b = materialize(&sol.primes, &exps, split..n);
            let c = &a + &b;
            let (status, record) = match AbcTriple::validate(a, b, c) {
                Ok(t) => {
                    let rec = HitRecord::build(&t, &cfg.budget, Provenance::PhiGenerator);
                    let status = match rec.verified {
                        HitStatus::Yes => {
                            hits += 1;
                            GenStatus::Verified
                        }
                        HitStatus::No => GenStatus::Rejected(RejectReason::RadicalBound),
                        HitStatus::Unknown => {
                            hits += 1;
                            GenStatus::Unverified
                        }
                    };
                    (status, Some(rec))
                }
                Err(TripleError::Ordering) => (GenStatus::Rejected(RejectReason::Ordering), None),
                Err(_) => (GenStatus::Rejected(RejectReason::Coprimality), None),
            };
            GeneratedHit {
                coordinates,
                approx_bits: approx,
                modulus: z,
                kind: CongruenceKind::F,
                status,
                record,
            }
        };
        out.push(emission);
        let k2 = |exps: &[u64]| {
            let l1: f64 = exps
                .iter()
                .zip(&sol.primes)
                .take(split)
                .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
                .sum();
            let l2: f64 = exps
                .iter()
                .zip(&sol.primes)
                .skip(split)
                .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
                .sum();
            sum_log2(l1, l2)
        };
        lat.push_successors(cand.off, &cand.ks, |_| true, k2);
    }
    Ok(out)
}

/// Reduces the base hit's exponent vector into the fundamental domain;
/// used when the domain is too large to scan.
fn seed_offsets(base: &HitRecord, sol: &CongruenceSolutionSet) -> Option<Vec<u64>> {
    let fa = base.factors_a.as_ref()?;
    let fb = base.factors_b.as_ref()?;
    let mut seed = Vec::with_capacity(sol.primes.len());
    for (i, &p) in sol.primes.iter().enumerate() {
        if p <= 1 {
            seed.push(1);
            continue;
        }
        let side = if i < sol.split { fa } else { fb };
        let e = side.exponent_of(&BigNat::from(p)) as u64;
        if e == 0 {
            return None;
        }
        seed.push((e - 1) % sol.periods[i] + 1);
    }
    sol.satisfies(&seed).then_some(seed)
}

/// The E-form generator: c runs over powers of the sum-kernel primes,
/// a over powers of the fixed side, b = c - a factored per candidate.
pub fn psi_sequence(
    base: &HitRecord,
    d1: u64,
    d3: u64,
    count: usize,
    cfg: &GeneratorConfig,
) -> Result<Vec<GeneratedHit>, ArithError> {
    let y = match cfg.modulus {
        Some(y) => y,
        None => derive_modulus(base, d1)?,
    };
    let sol = solve_e(d3, d1, y, &cfg.bounds)?;
    let split = sol.split;
    let n = sol.primes.len();
    let mut lat = Lattice::new(&sol, |exps| {
        exps.iter()
            .zip(&sol.primes)
            .take(split)
            .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
            .sum()
    });
    let c_key = |exps: &[u64]| -> f64 {
        exps.iter()
            .zip(&sol.primes)
            .take(split)
            .map(|(&e, &p)| e as f64 * (p.max(1) as f64).log2())
            .sum()
    };
    let mut out = Vec::new();
    let mut hits = 0usize;
    let mut pops = 0u64;
    while hits < count && pops < cfg.pop_cap {
        let cand = match lat.heap.pop() {
            Some(c) => c,
            None => break,
        };
        pops += 1;
        let exps = lat.exponents(cand.off, &cand.ks);
        let coordinates: Vec<Coordinate> = (0..n)
            .map(|i| Coordinate {
                prime: sol.primes[i],
                offset: sol.offsets[cand.off][i],
                period: sol.periods[i],
                cycles: cand.ks[i],
            })
            .collect();
        let approx = c_key(&exps);
        if approx > cfg.max_bits {
            hits += 1;
            out.push(GeneratedHit {
                coordinates,
                approx_bits: approx,
                modulus: y,
                kind: CongruenceKind::E,
                status: GenStatus::Unverified,
                record: None,
            });
            lat.push_successors(cand.off, &cand.ks, |_| true, c_key);
            continue;
        }
        let c = materialize(&sol.primes, &exps, 0..split);
        let a = materialize(&sol.primes, &exps, split..n);
        // ordering needs a < b, i.e. 2a < c; a growing side can never
        // recover on its own, so its successors are pruned here
        let ordered = &a + &a < c;
        if !ordered {
            out.push(GeneratedHit {
                coordinates,
                approx_bits: approx,
                modulus: y,
                kind: CongruenceKind::E,
                status: GenStatus::Rejected(RejectReason::Ordering),
                record: None,
            });
            lat.push_successors(cand.off, &cand.ks, |i| i < split, c_key);
            continue;
        }
        let b = &c - &a;
        if a == base.a && c == base.c {
            // the base hit re-emerges at its own coordinates; skip it
            lat.push_successors(cand.off, &cand.ks, |_| true, c_key);
            continue;
        }
        let (status, record) = match AbcTriple::validate(a, b, c) {
            Ok(t) => {
                let rec = HitRecord::build(&t, &cfg.budget, Provenance::PsiGenerator);
                let status = match rec.verified {
                    HitStatus::Yes => {
                        hits += 1;
                        GenStatus::Verified
                    }
                    HitStatus::No => GenStatus::Rejected(RejectReason::RadicalBound),
                    HitStatus::Unknown => {
                        hits += 1;
                        GenStatus::Unverified
                    }
                };
                (status, Some(rec))
            }
            Err(TripleError::Ordering) => (GenStatus::Rejected(RejectReason::Ordering), None),
            Err(_) => (GenStatus::Rejected(RejectReason::Coprimality), None),
        };
        out.push(GeneratedHit {
            coordinates,
            approx_bits: approx,
            modulus: y,
            kind: CongruenceKind::E,
            status,
            record,
        });
        lat.push_successors(cand.off, &cand.ks, |_| true, c_key);
    }
    Ok(out)
}

/// All exceptional c reachable from one base hit: every ordered split of
/// every admissible D through the F generator, plus the E recursions,
/// truncated at `limit` and deduplicated.
pub fn gamma_set(
    base: &HitRecord,
    limit: u64,
    cfg: &GeneratorConfig,
) -> Result<Vec<u64>, ArithError> {
    let mut cfg = cfg.clone();
    cfg.max_bits = (limit as f64).log2() + 1.0;
    let mut found: HashSet<u64> = HashSet::new();
    let report = crate::search_domain::search_domain(&base.c, &cfg.budget)?;
    let mut collect = |seq: &[GeneratedHit]| {
        for g in seq {
            if let (GenStatus::Verified, Some(rec)) = (&g.status, &g.record) {
                if let Some(c) = rec.c.to_u64() {
                    if c <= limit {
                        found.insert(c);
                    }
                }
            }
        }
    };
    for &d in &report.domain {
        for s1 in 1..=d {
            if d % s1 != 0 {
                continue;
            }
            let s2 = d / s1;
            if s2 < 2 {
                continue;
            }
            if let Ok(seq) = phi_sequence(base, s1, s2, 6, &cfg) {
                collect(&seq);
            }
            if s1 > 1 {
                if let Ok(seq) = phi_sequence(base, s2, s1, 6, &cfg) {
                    collect(&seq);
                }
            }
        }
    }
    if let Some(d3) = base.d3.as_ref().and_then(BigNat::to_u64) {
        let mut fixed: Vec<u64> = vec![1];
        fixed.extend(&report.domain);
        for d1 in fixed {
            if gcd(d1, d3) != 1 {
                continue;
            }
            if let Ok(seq) = psi_sequence(base, d1, d3, 6, &cfg) {
                collect(&seq);
            }
        }
    }
    let mut out: Vec<u64> = found.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Summary statistics over one generated sequence; descriptive only.
#[derive(Debug, Clone, Default, Serialize)]
pub struct GrowthReport {
    pub members: usize,
    /// Steps where the cofactor (c/z for F, b/y for E) grew.
    pub cofactor_increases: usize,
    pub cofactor_violations: usize,
    pub epsilons: Vec<f64>,
    pub epsilon_strictly_decreasing: bool,
    /// (N, members per N) at decade marks up to the largest member.
    pub density_samples: Vec<(u64, f64)>,
}

pub fn growth_report(seq: &[GeneratedHit]) -> GrowthReport {
    let recs: Vec<&HitRecord> = seq
        .iter()
        .filter(|g| matches!(g.status, GenStatus::Verified))
        .filter_map(|g| g.record.as_ref())
        .collect();
    if recs.len() < 2 {
        return GrowthReport::default();
    }
    let mut report = GrowthReport {
        members: recs.len(),
        ..GrowthReport::default()
    };
    let cofactor = |g: &GeneratedHit, rec: &HitRecord| -> BigNat {
        let m = BigNat::from(g.modulus);
        match g.kind {
            CongruenceKind::F => &rec.c / m,
            CongruenceKind::E => &rec.b / m,
        }
    };
    let pairs: Vec<(BigNat, f64)> = seq
        .iter()
        .filter(|g| matches!(g.status, GenStatus::Verified))
        .filter_map(|g| {
            let rec = g.record.as_ref()?;
            Some((cofactor(g, rec), rec.epsilon?))
        })
        .collect();
    for w in pairs.windows(2) {
        if w[1].0 > w[0].0 {
            report.cofactor_increases += 1;
        } else {
            report.cofactor_violations += 1;
        }
    }
    report.epsilons = pairs.iter().map(|(_, e)| *e).collect();
    report.epsilon_strictly_decreasing =
        report.epsilons.windows(2).all(|w| w[1] < w[0]);
    let members_u64: Vec<u64> = recs.iter().filter_map(|r| r.c.to_u64()).collect();
    if let Some(&max) = members_u64.iter().max() {
        let mut n = 10u64;
        while n <= max.saturating_mul(10) && n <= 1_000_000_000_000 {
            let count = members_u64.iter().filter(|&&c| c <= n).count();
            if count > 0 {
                report.density_samples.push((n, count as f64 / n as f64));
            }
            n = n.saturating_mul(10);
        }
    }
    report
}
