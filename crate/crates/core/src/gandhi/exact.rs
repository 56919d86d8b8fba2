use rug::integer::Order;
use rug::{Integer, Rational};

use super::{EvalConfig, Strategy, ThetaEvaluation};
use crate::error::{GandhiError, Result};
use crate::numtheory::{primorial, squarefree_divisors, PrimeTable};

/// `P = p_n#` as a bit count, refused when `2^P − 1` would exceed the budget.
pub(crate) fn budgeted_primorial(n: usize, table: &PrimeTable, config: &EvalConfig) -> Result<u64> {
    let p = primorial(n, table)?.value;
    match p.to_u64() {
        Some(bits) if bits <= config.exact_bit_budget => Ok(bits),
        _ => Err(GandhiError::Budget {
            n,
            required_bits: p.to_string(),
            budget_bits: config.exact_bit_budget,
        }),
    }
}

fn limbs_for(bits: u64) -> Vec<u64> {
    vec![0u64; bits.div_ceil(64) as usize]
}

/// The Mersenne cofactor `(2^P − 1)/(2^d − 1) = Σ_{j < P/d} 2^(jd)` for `d | P`.
fn mersenne_cofactor(total_bits: u64, d: u64, limbs: &mut Vec<u64>) -> Integer {
    debug_assert_eq!(total_bits % d, 0);
    limbs.iter_mut().for_each(|w| *w = 0);
    if d == 1 {
        limbs.iter_mut().for_each(|w| *w = u64::MAX);
        if total_bits % 64 != 0 {
            *limbs.last_mut().unwrap() = (1u64 << (total_bits % 64)) - 1;
        }
    } else {
        let mut bit = 0;
        while bit < total_bits {
            limbs[(bit / 64) as usize] |= 1 << (bit % 64);
            bit += d;
        }
    }
    Integer::from_digits(limbs.as_slice(), Order::Lsf)
}

/// `S` with `Σ_{d | p_n#} μ(d)/(2^d − 1) = S/(2^P − 1)`, returned with `P`.
pub(crate) fn divisor_sum_numerator(
    n: usize,
    table: &PrimeTable,
    config: &EvalConfig,
) -> Result<(Integer, u64)> {
    let total_bits = budgeted_primorial(n, table, config)?;
    let mut limbs = limbs_for(total_bits);
    let mut sum = Integer::new();
    for term in squarefree_divisors(n, table)? {
        let cofactor = mersenne_cofactor(total_bits, term.d as u64, &mut limbs);
        if term.mu > 0 {
            sum += cofactor;
        } else {
            sum -= cofactor;
        }
    }
    Ok((sum, total_bits))
}

/// `S` with `Σ_{t ≥ 1, gcd(t, p_n#) = 1} 2^(-t) = S/(2^P − 1)`, returned with `P`.
///
/// One period of the coprime indicator: bit `P − r` is set for every residue
/// `r ∈ [1, P]` coprime to `P`.
pub(crate) fn coprime_sum_numerator(
    n: usize,
    table: &PrimeTable,
    config: &EvalConfig,
) -> Result<(Integer, u64)> {
    let total_bits = budgeted_primorial(n, table, config)?;
    let mut limbs = limbs_for(total_bits);
    limbs.iter_mut().for_each(|w| *w = u64::MAX);
    if total_bits % 64 != 0 {
        *limbs.last_mut().unwrap() = (1u64 << (total_bits % 64)) - 1;
    }
    for &p in table.require(n)? {
        let mut r = p;
        while r <= total_bits {
            let bit = total_bits - r;
            limbs[(bit / 64) as usize] &= !(1 << (bit % 64));
            r += p;
        }
    }
    Ok((Integer::from_digits(limbs.as_slice(), Order::Lsf), total_bits))
}

/// `S/(2^P − 1) − 1/2 = (2S − (2^P − 1)) / (2·(2^P − 1))`, reduced.
pub(crate) fn shift_by_half(sum: Integer, total_bits: u64) -> Rational {
    let mersenne = (Integer::from(1) << u32::try_from(total_bits).expect("P fits u32")) - 1u32;
    let num = (sum << 1u32) - &mersenne;
    Rational::from((num, mersenne << 1u32))
}

/// θ(n) from the divisor sum over the common denominator `2^P − 1`.
pub fn theta_exact_divisor(
    n: usize,
    table: &PrimeTable,
    config: &EvalConfig,
) -> Result<ThetaEvaluation> {
    if n == 0 {
        return Err(GandhiError::domain("θ(n) needs n ≥ 1"));
    }
    let (sum, total_bits) = divisor_sum_numerator(n, table, config)?;
    Ok(ThetaEvaluation {
        n,
        strategy: Strategy::ExactDivisor,
        exact: Some(shift_by_half(sum, total_bits)),
        enclosure: None,
        frac_bits_used: None,
        denominator_bits: total_bits,
        term_count: 1 << n,
    })
}

/// θ(n) as the closed-form sum of `2^(-t)` over `t ≥ 2` coprime to `p_n#`.
pub fn theta_exact_coprime(
    n: usize,
    table: &PrimeTable,
    config: &EvalConfig,
) -> Result<ThetaEvaluation> {
    if n == 0 {
        return Err(GandhiError::domain("θ(n) needs n ≥ 1"));
    }
    let (sum, total_bits) = coprime_sum_numerator(n, table, config)?;
    Ok(ThetaEvaluation {
        n,
        strategy: Strategy::ExactCoprime,
        exact: Some(shift_by_half(sum, total_bits)),
        enclosure: None,
        frac_bits_used: None,
        denominator_bits: total_bits,
        term_count: total_bits,
    })
}

/// `⌊log₂(x/y)⌋` for positive integers.
pub fn floor_log2_ratio(x: &Integer, y: &Integer) -> i64 {
    assert!(*x > 0 && *y > 0, "floor_log2_ratio needs positive operands");
    let k = i64::from(x.significant_bits()) - i64::from(y.significant_bits());
    // 2^k ≤ x/y < 2^(k+1) or 2^(k-1) ≤ x/y < 2^k; one comparison decides.
    let fits = if k >= 0 {
        y.clone() << k as u32 <= *x
    } else {
        y <= &(x.clone() << (-k) as u32)
    };
    if fits {
        k
    } else {
        k - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::mobius;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    /// Independent oracle: add μ(d)/(2^d − 1) one reduced fraction at a time,
    /// with divisors found by scanning 1..=P.
    fn brute_force_theta(primorial: u64) -> Rational {
        let mut acc = q(-1, 2);
        for d in (1..=primorial).filter(|d| primorial % d == 0) {
            let mu = mobius(d).unwrap();
            let term = Rational::from((1, (Integer::from(1) << d as u32) - 1u32));
            acc += term * i32::from(mu);
        }
        acc
    }

    #[test]
    fn brute_force_oracle_values() {
        assert_eq!(brute_force_theta(2), q(1, 6));
        assert_eq!(brute_force_theta(6), q(5, 126));
        assert_eq!(brute_force_theta(30), q(18_108_677, 2_147_483_646));
    }

    #[test]
    fn divisor_strategy_known_values() {
        let table = PrimeTable::first(10);
        let cfg = EvalConfig::default();
        let got = |n| theta_exact_divisor(n, &table, &cfg).unwrap().exact.unwrap();
        assert_eq!(got(1), q(1, 6));
        assert_eq!(got(2), q(5, 126));
        assert_eq!(got(3), q(18_108_677, 2_147_483_646));
        assert_eq!(got(4), brute_force_theta(210));
    }

    #[test]
    fn coprime_strategy_known_values() {
        let table = PrimeTable::first(10);
        let cfg = EvalConfig::default();
        let got = |n| theta_exact_coprime(n, &table, &cfg).unwrap().exact.unwrap();
        assert_eq!(got(1), q(1, 6));
        assert_eq!(got(2), q(5, 126));
        assert_eq!(got(3), q(18_108_677, 2_147_483_646));
        let (sum, bits) = coprime_sum_numerator(3, &table, &cfg).unwrap();
        assert_eq!(bits, 30);
        assert_eq!(sum, 545_925_250);
    }

    #[test]
    fn strategies_agree_through_n6() {
        let table = PrimeTable::first(10);
        let cfg = EvalConfig::default();
        for n in 1..=6 {
            let a = theta_exact_divisor(n, &table, &cfg).unwrap();
            let b = theta_exact_coprime(n, &table, &cfg).unwrap();
            assert_eq!(a.exact, b.exact, "n = {n}");
            let theta = a.exact.unwrap();
            assert!(theta > 0 && theta < q(1, 4));
        }
    }

    #[test]
    fn cofactor_matches_division() {
        let mut limbs = limbs_for(30);
        for d in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            let cof = mersenne_cofactor(30, d, &mut limbs);
            let expected = ((Integer::from(1) << 30u32) - 1u32) / ((Integer::from(1) << d as u32) - 1u32);
            assert_eq!(cof, expected, "d = {d}");
        }
        let mut limbs = limbs_for(128);
        assert_eq!(
            mersenne_cofactor(128, 1, &mut limbs),
            (Integer::from(1) << 128u32) - 1u32
        );
    }

    #[test]
    fn budget_names_required_bits() {
        let table = PrimeTable::first(10);
        let cfg = EvalConfig {
            exact_bit_budget: 1 << 10,
            ..EvalConfig::default()
        };
        match theta_exact_coprime(5, &table, &cfg) {
            Err(GandhiError::Budget { required_bits, .. }) => assert_eq!(required_bits, "2310"),
            other => panic!("expected budget refusal, got {other:?}"),
        }
        let default = EvalConfig::default();
        match theta_exact_divisor(9, &table, &default) {
            Err(GandhiError::Budget { required_bits, budget_bits, .. }) => {
                assert_eq!(required_bits, "223092870");
                assert_eq!(budget_bits, 1 << 24);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn floor_log2_ratio_cases() {
        let f = |x: u64, y: u64| floor_log2_ratio(&Integer::from(x), &Integer::from(y));
        assert_eq!(f(12, 1), 3);
        assert_eq!(f(8, 1), 3);
        assert_eq!(f(7, 1), 2);
        assert_eq!(f(252, 5), 5);
        assert_eq!(f(1, 1), 0);
        assert_eq!(f(1, 2), -1);
        assert_eq!(f(1, 3), -2);
        assert_eq!(f(3, 4), -1);
    }
}
