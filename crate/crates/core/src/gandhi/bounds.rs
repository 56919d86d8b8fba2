use std::fmt;

use rug::Rational;

use super::{pow2_neg, theta_exact_divisor, BigRational, EvalConfig};
use crate::error::{GandhiError, Result};
use crate::numtheory::{least_coprime, PrimeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Less,
}

impl Relation {
    pub fn holds(self, left: &Rational, right: &Rational) -> bool {
        match self {
            Relation::Less => left < right,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub left: BigRational,
    pub relation: Relation,
    pub right: BigRational,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &'static str, left: Rational, relation: Relation, right: Rational) -> Self {
        let pass = relation.holds(&left, &right);
        BoundCheck {
            name,
            left,
            relation,
            right,
            pass,
        }
    }
}

/// Every inequality of the proof chain for one `n`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub p_next: u64,
    pub theta: BigRational,
    pub residual: BigRational,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn theta_and_next(n: usize, table: &PrimeTable, config: &EvalConfig) -> Result<(Rational, u64)> {
    if n == 0 {
        return Err(GandhiError::domain("θ(n) needs n ≥ 1"));
    }
    let theta = theta_exact_divisor(n, table, config)?
        .exact
        .expect("exact strategy sets exact");
    let p_next = least_coprime(n, &table.extended_to(n + 1))?;
    Ok((theta, p_next))
}

/// `r_n = θ(n) − 2^(-p_{n+1})`.
pub fn residual(n: usize, table: &PrimeTable, config: &EvalConfig) -> Result<BigRational> {
    let (theta, p_next) = theta_and_next(n, table, config)?;
    Ok(theta - pow2_neg(p_next))
}

pub fn bounds_report(n: usize, table: &PrimeTable, config: &EvalConfig) -> Result<BoundReport> {
    let (theta, p_next) = theta_and_next(n, table, config)?;
    let lead = pow2_neg(p_next);
    let residual = Rational::from(&theta - &lead);
    let checks = vec![
        BoundCheck::new("lead_below_theta", lead.clone(), Relation::Less, theta.clone()),
        BoundCheck::new(
            "theta_below_twice_lead",
            theta.clone(),
            Relation::Less,
            Rational::from(&lead * 2u32),
        ),
        BoundCheck::new("residual_below_lead", residual.clone(), Relation::Less, lead.clone()),
        BoundCheck::new(
            "residual_below_half_lead",
            residual.clone(),
            Relation::Less,
            pow2_neg(p_next + 1),
        ),
        BoundCheck::new(
            "theta_below_three_halves_lead",
            theta.clone(),
            Relation::Less,
            lead * Rational::from((3, 2)),
        ),
    ];
    Ok(BoundReport {
        n,
        p_next,
        theta,
        residual,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn residual_values() {
        let table = PrimeTable::first(4);
        let cfg = EvalConfig::default();
        assert_eq!(residual(1, &table, &cfg).unwrap(), q(1, 24));
        assert_eq!(residual(2, &table, &cfg).unwrap(), q(17, 2016));
        let r3 = residual(3, &table, &cfg).unwrap();
        assert_eq!(r3, q(18_108_677, 2_147_483_646) - q(1, 128));
        assert!(r3 > 0);
    }

    #[test]
    fn report_n1() {
        let table = PrimeTable::first(3);
        let report = bounds_report(1, &table, &EvalConfig::default()).unwrap();
        assert_eq!(report.p_next, 3);
        assert_eq!(report.theta, q(1, 6));
        assert_eq!(report.checks.len(), 5);
        assert!(report.all_pass());
        let by_name = |name| report.checks.iter().find(|c| c.name == name).unwrap();
        assert_eq!(by_name("lead_below_theta").left, q(1, 8));
        assert_eq!(by_name("theta_below_twice_lead").right, q(1, 4));
        assert_eq!(by_name("residual_below_half_lead").right, q(1, 16));
        assert_eq!(by_name("theta_below_three_halves_lead").right, q(3, 16));
    }

    #[test]
    fn report_n2_through_n6() {
        let table = PrimeTable::first(8);
        let cfg = EvalConfig::default();
        let two = bounds_report(2, &table, &cfg).unwrap();
        assert_eq!(two.checks[4].right, q(3, 64));
        for n in 1..=6 {
            let report = bounds_report(n, &table, &cfg).unwrap();
            for c in &report.checks {
                assert_eq!(c.pass, c.left < c.right);
                assert!(c.pass, "n={n} {}", c.name);
            }
        }
    }
}
