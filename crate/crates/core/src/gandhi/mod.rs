//! θ(n) evaluation and the floor formulas that turn it into `p_{n+1}`.
//!
//! θ(n) = −1/2 + Σ_{d | p_n#} μ(d)/(2^d − 1) is evaluated three ways:
//!
//! * [`Strategy::ExactDivisor`] sums the divisor terms over the single common
//!   denominator `2^P − 1`, `P = p_n#`.
//! * [`Strategy::ExactCoprime`] sums `2^(-t)` over `t` coprime to `P` in closed
//!   form, one period of the bit pattern over `2^P − 1`.
//! * [`Strategy::Interval`] encloses every divisor term in a [`DyadicInterval`]
//!   and reads the prime off the enclosure, doubling precision when needed.
//!
//! The two exact routes agreeing is the divisor/coprime identity; the interval
//! enclosure containing them is interval soundness.

mod bits;
mod bounds;
pub(crate) mod exact;
mod interval;
mod sequence;

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::dyadic::DyadicInterval;
use crate::error::{GandhiError, Result};
use crate::numtheory::PrimeTable;

pub use bits::{theta_bits, CoprimeBits};
pub use bounds::{bounds_report, residual, BoundCheck, BoundReport, Relation};
pub use exact::{floor_log2_ratio, theta_exact_coprime, theta_exact_divisor};
pub use interval::theta_interval;
pub use sequence::{gandhi_sequence, gandhi_sequence_with, SequenceError, SequenceStep};

/// Exact rationals, always stored reduced with a positive denominator.
pub type BigRational = Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    ExactDivisor,
    ExactCoprime,
    Interval,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::ExactDivisor,
        Strategy::ExactCoprime,
        Strategy::Interval,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::ExactDivisor => "exact-divisor",
            Strategy::ExactCoprime => "exact-coprime",
            Strategy::Interval => "interval",
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Strategy::Interval)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = GandhiError;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| GandhiError::domain(format!("unknown strategy {s:?}")))
    }
}

/// Knobs shared by every evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    /// Starting fractional precision for the interval strategy.
    pub initial_precision_bits: u64,
    /// Precision ceiling; doubling past it is a resource error.
    pub max_precision_bits: u64,
    /// Largest primorial `P` (= bit size of `2^P − 1`) the exact strategies accept.
    pub exact_bit_budget: u64,
    /// Compare every computed prime against the sieve.
    pub cross_check: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            initial_precision_bits: 64,
            max_precision_bits: 65_536,
            exact_bit_budget: 1 << 24,
            cross_check: true,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_precision_bits == 0 {
            return Err(GandhiError::domain("initial precision must be positive"));
        }
        if self.initial_precision_bits > self.max_precision_bits {
            return Err(GandhiError::domain(format!(
                "initial precision {} exceeds maximum {}",
                self.initial_precision_bits, self.max_precision_bits
            )));
        }
        Ok(())
    }
}

/// One evaluation of θ(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEvaluation {
    pub n: usize,
    pub strategy: Strategy,
    /// Set by the exact strategies.
    pub exact: Option<BigRational>,
    /// Set by the interval strategy.
    pub enclosure: Option<DyadicInterval>,
    /// Fractional bits of the enclosure (interval only).
    pub frac_bits_used: Option<u64>,
    /// Bit size of the common denominator worked over: `P` for the exact
    /// strategies (`2^P − 1`), the precision for intervals.
    pub denominator_bits: u64,
    /// Number of divisor terms summed (`2^n`), or residues scanned for the coprime route.
    pub term_count: u64,
}

/// A computed `p_{n+1}` together with the evaluation it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NextPrime {
    pub n: usize,
    pub prime: u64,
    pub strategy: Strategy,
    pub theta: ThetaEvaluation,
    /// Interval precision rounds that came back inconclusive before the final one.
    pub inconclusive_rounds: u32,
}

impl NextPrime {
    pub fn precision_bits(&self) -> Option<u64> {
        self.theta.frac_bits_used
    }
}

#[derive(Clone, Copy)]
enum Formula {
    /// `⌊log₂(2/θ)⌋`
    Gandhi,
    /// `⌊log₂(3/(2θ))⌋`
    Refined,
}

/// `p_{n+1} = ⌊log₂(2/θ(n))⌋`, with no logarithm or float involved.
pub fn next_prime_gandhi(
    n: usize,
    table: &PrimeTable,
    strategy: Strategy,
    config: &EvalConfig,
) -> Result<NextPrime> {
    next_prime_with(n, table, strategy, config, Formula::Gandhi)
}

/// `p_{n+1} = ⌊log₂(3/(2θ(n)))⌋`, the tightened form.
pub fn next_prime_refined(
    n: usize,
    table: &PrimeTable,
    strategy: Strategy,
    config: &EvalConfig,
) -> Result<NextPrime> {
    next_prime_with(n, table, strategy, config, Formula::Refined)
}

fn next_prime_with(
    n: usize,
    table: &PrimeTable,
    strategy: Strategy,
    config: &EvalConfig,
    formula: Formula,
) -> Result<NextPrime> {
    if n == 0 {
        return Err(GandhiError::domain("the formula needs n ≥ 1"));
    }
    config.validate()?;
    let found = match strategy {
        Strategy::ExactDivisor | Strategy::ExactCoprime => {
            let theta = if strategy == Strategy::ExactDivisor {
                theta_exact_divisor(n, table, config)?
            } else {
                theta_exact_coprime(n, table, config)?
            };
            let prime = {
                let value = theta.exact.as_ref().expect("exact strategies set exact");
                exact_floor(value, formula)
            };
            NextPrime {
                n,
                prime,
                strategy,
                theta,
                inconclusive_rounds: 0,
            }
        }
        Strategy::Interval => interval::next_prime_escalating(n, table, config, formula)?,
    };
    if config.cross_check {
        let oracle = sieve_oracle(n + 1);
        if oracle != found.prime {
            return Err(GandhiError::OracleMismatch {
                n,
                formula: found.prime,
                oracle,
            });
        }
    }
    Ok(found)
}

fn exact_floor(theta: &Rational, formula: Formula) -> u64 {
    let (num, den) = (theta.numer(), theta.denom());
    let p = match formula {
        Formula::Gandhi => floor_log2_ratio(&(den.clone() << 1u32), num),
        Formula::Refined => floor_log2_ratio(&(den.clone() * 3u32), &(num.clone() << 1u32)),
    };
    u64::try_from(p).expect("θ < 1 keeps the floor positive")
}

/// The `k`-th prime from a fresh Eratosthenes sieve.
pub fn sieve_oracle(k: usize) -> u64 {
    PrimeTable::first(k)
        .nth(k)
        .expect("sieve table holds k primes")
}

pub(crate) fn pow2_neg(exp: u64) -> Rational {
    Rational::from((
        Integer::from(1),
        Integer::from(1) << u32::try_from(exp).expect("exponent fits u32"),
    ))
}
