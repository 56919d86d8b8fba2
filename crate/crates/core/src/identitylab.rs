//! Executable checks of the identities behind the formula, all in exact
//! rational arithmetic. Truncated series are compared against their
//! closed-form tails, never against a tolerance.

use rug::{Integer, Rational};

use crate::error::{GandhiError, Result};
use crate::gandhi::exact::{coprime_sum_numerator, divisor_sum_numerator};
use crate::gandhi::{pow2_neg, BigRational, EvalConfig};
use crate::numtheory::{mobius_divisor_sum, primorial, PrimeTable};

/// Outcome of checking one instance of an identity or strict inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheckResult {
    pub identity: &'static str,
    /// Parameter tuple, e.g. `a=2,K=4`.
    pub instance: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// `rhs − lhs`.
    pub residual: BigRational,
    /// The residual the identity predicts; `None` for strict inequalities,
    /// which instead require a positive residual.
    pub expected_residual: Option<BigRational>,
    pub pass: bool,
}

impl IdentityCheckResult {
    fn equality(
        identity: &'static str,
        instance: String,
        lhs: Rational,
        rhs: Rational,
        expected_residual: Rational,
    ) -> Self {
        let residual = Rational::from(&rhs - &lhs);
        let pass = residual == expected_residual;
        IdentityCheckResult {
            identity,
            instance,
            lhs,
            rhs,
            residual,
            expected_residual: Some(expected_residual),
            pass,
        }
    }
}

fn mersenne(bits: u32) -> Integer {
    (Integer::from(1) << bits) - 1u32
}

/// `Σ_{k=1}^{K} 2^(-ka)` against `1/(2^a − 1)`; the gap must be exactly
/// `2^(-Ka)/(2^a − 1)`.
pub fn verify_geometric_identity(a: u32, terms: u32) -> Result<IdentityCheckResult> {
    if a == 0 || terms == 0 {
        return Err(GandhiError::domain("geometric identity needs a ≥ 1 and K ≥ 1"));
    }
    let mut lhs = Rational::new();
    for k in 1..=terms {
        lhs += pow2_neg(u64::from(k) * u64::from(a));
    }
    let rhs = Rational::from((1, mersenne(a)));
    let expected = pow2_neg(u64::from(terms) * u64::from(a)) / Rational::from(mersenne(a));
    Ok(IdentityCheckResult::equality(
        "geometric",
        format!("a={a},K={terms}"),
        lhs,
        rhs,
        expected,
    ))
}

/// Divisor form `Σ_{d|p_n#} μ(d)/(2^d − 1)` against the coprime form
/// `Σ_{gcd(t,p_n#)=1} 2^(-t)`; the residual must be exactly zero.
pub fn verify_theorem_53(n: usize, config: &EvalConfig) -> Result<IdentityCheckResult> {
    if n == 0 {
        return Err(GandhiError::domain("divisor/coprime identity needs n ≥ 1"));
    }
    let table = PrimeTable::first(n);
    let (div_sum, bits) = divisor_sum_numerator(n, &table, config)?;
    let (cop_sum, _) = coprime_sum_numerator(n, &table, config)?;
    let den = mersenne(u32::try_from(bits).expect("budget keeps P within u32"));
    Ok(IdentityCheckResult::equality(
        "theorem53",
        format!("n={n}"),
        Rational::from((div_sum, den.clone())),
        Rational::from((cop_sum, den)),
        Rational::new(),
    ))
}

/// `Σ_{t>n} 2^(-t) = 2^(-n)`, with the tail taken as `2` minus the directly
/// summed partial `Σ_{k=0}^{n} 2^(-k)`, which must itself equal `2 − 2^(-n)`.
pub fn verify_theorem_54(n: u32) -> IdentityCheckResult {
    let mut partial = Rational::new();
    for k in 0..=n {
        partial += pow2_neg(u64::from(k));
    }
    let closed = Rational::from(2) - pow2_neg(u64::from(n));
    let lhs = Rational::from(2) - &partial;
    let mut result = IdentityCheckResult::equality(
        "theorem54",
        format!("n={n}"),
        lhs,
        pow2_neg(u64::from(n)),
        Rational::new(),
    );
    result.pass &= partial == closed;
    result
}

/// `Σ_{d|m} μ(d) = [m = 1]` for every `m ≤ m_max`.
pub fn verify_mobius_sum(m_max: u64) -> Result<Vec<IdentityCheckResult>> {
    if m_max == 0 {
        return Err(GandhiError::domain("Möbius sum check needs m_max ≥ 1"));
    }
    (1..=m_max)
        .map(|m| {
            let lhs = mobius_divisor_sum(m)?;
            Ok(IdentityCheckResult::equality(
                "mobius",
                format!("m={m}"),
                Rational::from(lhs),
                Rational::from(i64::from(m == 1)),
                Rational::new(),
            ))
        })
        .collect()
}

/// `Σ_{t>n, gcd(t,p#)=1} 2^(-t) < 2^(-n)` with `p = p_k`, the left side
/// computed exactly as the full coprime sum minus its head `t ≤ n`.
///
/// Passes when the gap is positive and some `t > n` shares a factor with
/// `p#`, which is what makes the inequality strict.
pub fn verify_coprime_tail_bound(
    n: u64,
    prime_index: usize,
    config: &EvalConfig,
) -> Result<IdentityCheckResult> {
    if n == 0 || prime_index == 0 {
        return Err(GandhiError::domain("tail bound needs n ≥ 1 and a prime index ≥ 1"));
    }
    let table = PrimeTable::first(prime_index);
    let primes = table.as_slice();
    let (sum, bits) = coprime_sum_numerator(prime_index, &table, config)?;
    let full = Rational::from((sum, mersenne(u32::try_from(bits).expect("budgeted"))));
    let coprime = |t: u64| primes.iter().all(|&p| t % p != 0);
    let head = (1..=n)
        .filter(|&t| coprime(t))
        .fold(Rational::new(), |acc, t| acc + pow2_neg(t));
    let lhs = full - head;
    let rhs = pow2_neg(n);
    let residual = Rational::from(&rhs - &lhs);
    let witness = (n + 1..=n + primes[0]).find(|&t| !coprime(t));
    let p_sharp = primorial(prime_index, &table)?.value;
    Ok(IdentityCheckResult {
        identity: "tailbound",
        instance: format!("n={n},p#={p_sharp}"),
        pass: residual > 0 && witness.is_some(),
        lhs,
        rhs,
        residual,
        expected_residual: None,
    })
}
