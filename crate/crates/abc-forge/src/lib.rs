//! Exact integer machinery for finding, certifying and generating abc hits.
//!
//! The crate is organized around a brute-force oracle ([`oracle`]) that serves
//! as ground truth for everything the constructive side produces:
//!
//! * [`core_arith`] — factorization, radicals, squarefree tests, totients and
//!   sieves on arbitrary-precision integers.
//! * [`search_domain`] — the admissible product-kernel domain for a given `c`
//!   and the equation-count bookkeeping.
//! * [`triples`] — the abc-triple data model, hit predicate, quality measures
//!   and standard-form decompositions.
//! * [`classes`] — equivalence classes with constant squareful part, families,
//!   and no-hit certification.
//! * [`cycles`] — residue-cycle solvers and the infinite hit-sequence
//!   generators.

pub mod classes;
pub mod core_arith;
pub mod cycles;
pub mod oracle;
pub mod search_domain;
pub mod triples;

pub use core_arith::{BigNat, FactoringBudget, Factorization};
