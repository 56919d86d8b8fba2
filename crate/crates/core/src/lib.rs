//! Successive primes from Gandhi's formula
//!
//! ```text
//! p_{n+1} = ⌊1 − log₂(−1/2 + Σ_{d | p_n#} μ(d)/(2^d − 1))⌋
//! ```
//!
//! evaluated without floating point: exactly over big rationals, or inside
//! rigorous dyadic intervals whose precision is raised until the floor is
//! pinned down. Alongside the evaluators sit executable checks of every
//! identity and inequality the formula's correctness rests on.
//!
//! ```
//! use gandhi_core::{next_prime_gandhi, EvalConfig, PrimeTable, Strategy};
//!
//! let table = PrimeTable::first(4);
//! let next = next_prime_gandhi(4, &table, Strategy::Interval, &EvalConfig::default()).unwrap();
//! assert_eq!(next.prime, 11);
//! ```

pub mod dyadic;
pub mod error;
pub mod gandhi;
pub mod identitylab;
pub mod numtheory;

pub use dyadic::{DyadicFixed, DyadicInterval, Extraction};
pub use error::{GandhiError, Result};
pub use gandhi::{
    bounds_report, gandhi_sequence, gandhi_sequence_with, next_prime_gandhi, next_prime_refined,
    residual, theta_bits, theta_exact_coprime, theta_exact_divisor, theta_interval, BigRational,
    BoundCheck, BoundReport, EvalConfig, NextPrime, SequenceError, SequenceStep, Strategy,
    ThetaEvaluation,
};
pub use identitylab::IdentityCheckResult;
pub use numtheory::{DivisorTerm, PrimeTable, Primorial};

pub use rug::{Integer, Rational};
