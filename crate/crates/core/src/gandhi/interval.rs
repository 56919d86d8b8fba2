use rug::Integer;

use super::{EvalConfig, Formula, NextPrime, Strategy, ThetaEvaluation};
use crate::dyadic::{
    extract_next_prime, extract_next_prime_refined, mersenne_enclosure, DyadicFixed,
    DyadicInterval, Extraction,
};
use crate::error::{GandhiError, Result};
use crate::numtheory::{squarefree_divisors, PrimeTable};

/// Encloses θ(n) at `frac_bits` fractional bits.
///
/// Each divisor term contributes the enclosure of `1/(2^d − 1)`, signed by
/// μ(d), so the width is exactly `2^n · 2^(-frac_bits)`. Divisors larger than
/// the precision keep no bits and contribute `[0, 2^(-frac_bits)]`; those are
/// tallied rather than materialised.
pub fn theta_interval(n: usize, table: &PrimeTable, frac_bits: u64) -> Result<ThetaEvaluation> {
    if n == 0 {
        return Err(GandhiError::domain("θ(n) needs n ≥ 1"));
    }
    let largest_prime = table.require(n)?[n - 1];
    if frac_bits < largest_prime {
        return Err(GandhiError::Precision {
            bits: frac_bits,
            needed: largest_prime,
        });
    }
    let mut acc = DyadicInterval::point(DyadicFixed::pow2_neg(1, frac_bits)?).negate();
    let (mut tiny_pos, mut tiny_neg) = (0u64, 0u64);
    let terms = squarefree_divisors(n, table)?;
    for term in &terms {
        if term.d > u128::from(frac_bits) {
            if term.mu > 0 {
                tiny_pos += 1;
            } else {
                tiny_neg += 1;
            }
            continue;
        }
        acc.accumulate(&mersenne_enclosure(term.d, frac_bits), term.mu < 0);
    }
    let enclosure = DyadicInterval::new(
        DyadicFixed::new(acc.lo().mantissa().clone() - Integer::from(tiny_neg), frac_bits),
        DyadicFixed::new(acc.hi().mantissa().clone() + Integer::from(tiny_pos), frac_bits),
    )?;
    Ok(ThetaEvaluation {
        n,
        strategy: Strategy::Interval,
        exact: None,
        enclosure: Some(enclosure),
        frac_bits_used: Some(frac_bits),
        denominator_bits: frac_bits,
        term_count: terms.len() as u64,
    })
}

/// Doubles the precision from the configured start until the enclosure
/// brackets a single prime.
pub(super) fn next_prime_escalating(
    n: usize,
    table: &PrimeTable,
    config: &EvalConfig,
    formula: Formula,
) -> Result<NextPrime> {
    let mut bits = config.initial_precision_bits;
    let mut inconclusive_rounds = 0;
    while bits <= config.max_precision_bits {
        match theta_interval(n, table, bits) {
            Ok(theta) => {
                let enclosure = theta.enclosure.as_ref().expect("interval sets enclosure");
                let extraction = match formula {
                    Formula::Gandhi => extract_next_prime(enclosure)?,
                    Formula::Refined => extract_next_prime_refined(enclosure)?,
                };
                match extraction {
                    Extraction::Prime(prime) => {
                        return Ok(NextPrime {
                            n,
                            prime,
                            strategy: Strategy::Interval,
                            theta,
                            inconclusive_rounds,
                        })
                    }
                    Extraction::Inconclusive => inconclusive_rounds += 1,
                }
            }
            // too few bits to hold 2^-p_n; fall through and double
            Err(GandhiError::Precision { .. }) => {}
            Err(e) => return Err(e),
        }
        bits = bits.saturating_mul(2);
    }
    Err(GandhiError::PrecisionExhausted {
        n,
        max_bits: config.max_precision_bits,
    })
}
