use std::fmt;

use super::{next_prime_gandhi, EvalConfig, NextPrime, Strategy};
use crate::error::{GandhiError, Result};
use crate::numtheory::PrimeTable;

/// One row of a generated sequence. `computed` is `None` for the seed `p_1 = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceStep {
    pub index: usize,
    pub prime: u64,
    pub computed: Option<NextPrime>,
}

/// A sequence run that stopped early, with the primes produced so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceError {
    pub reached: PrimeTable,
    pub source: GandhiError,
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stopped after {} primes (last {}): {}",
            self.reached.len(),
            self.reached.last(),
            self.source
        )
    }
}

impl std::error::Error for SequenceError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// The first `count` primes, bootstrapped from `p_1 = 2` by feeding each
/// formula output back in as the next input.
pub fn gandhi_sequence(
    count: usize,
    strategy: Strategy,
    config: &EvalConfig,
) -> std::result::Result<PrimeTable, SequenceError> {
    gandhi_sequence_with(count, strategy, config, |_| {})
}

/// Like [`gandhi_sequence`], reporting each row as soon as it is known.
pub fn gandhi_sequence_with(
    count: usize,
    strategy: Strategy,
    config: &EvalConfig,
    mut on_step: impl FnMut(&SequenceStep),
) -> std::result::Result<PrimeTable, SequenceError> {
    let seed = PrimeTable::first(1);
    if count == 0 {
        return Err(SequenceError {
            reached: seed,
            source: GandhiError::domain("sequence length must be ≥ 1"),
        });
    }
    let mut primes = vec![2u64];
    on_step(&SequenceStep {
        index: 1,
        prime: 2,
        computed: None,
    });
    for n in 1..count {
        let table = PrimeTable::from_generated(primes.clone());
        let step = next_prime_gandhi(n, &table, strategy, config).and_then(|next| {
            check_increasing(&primes, &next)?;
            Ok(next)
        });
        match step {
            Ok(next) => {
                primes.push(next.prime);
                on_step(&SequenceStep {
                    index: n + 1,
                    prime: next.prime,
                    computed: Some(next),
                });
            }
            Err(source) => {
                return Err(SequenceError {
                    reached: PrimeTable::from_generated(primes),
                    source,
                })
            }
        }
    }
    Ok(PrimeTable::from_generated(primes))
}

fn check_increasing(primes: &[u64], next: &NextPrime) -> Result<()> {
    let last = *primes.last().expect("seeded");
    if next.prime <= last {
        return Err(GandhiError::OracleMismatch {
            n: next.n,
            formula: next.prime,
            oracle: super::sieve_oracle(next.n + 1),
        });
    }
    Ok(())
}
