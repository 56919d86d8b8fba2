//! Integer number theory underneath the formula: the Eratosthenes oracle,
//! the Möbius function, primorials and their squarefree divisors.

use rug::Integer;

use crate::error::{GandhiError, Result};

const SEGMENT_LEN: u64 = 1 << 15;

/// Deterministic primality by trial division up to `√m`.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut f = 3u64;
    while f <= m / f {
        if m % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Marks composites in `[lo, hi)` using every base prime up to `√(hi-1)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
    let mut composite = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        let v = lo + i as u64;
        if !c && v >= 2 {
            out.push(v);
        }
    }
}

/// Plain sieve of Eratosthenes over `[0, limit]`.
fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// All primes `≤ limit`, in increasing order.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(GandhiError::domain(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    let base = simple_sieve(limit.isqrt());
    let mut primes = Vec::new();
    let mut lo = 0;
    while lo <= limit {
        let hi = (lo + SEGMENT_LEN).min(limit + 1);
        sieve_segment(lo, hi, &base, &mut primes);
        lo = hi;
    }
    Ok(PrimeTable { primes })
}

/// The primes `p_1 < p_2 < … < p_k`, with `p_1 = 2` and no prime skipped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeTable {
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Validates that `primes` is exactly the first `primes.len()` primes.
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.first() != Some(&2) {
            return Err(GandhiError::domain("a prime table must start at 2"));
        }
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(GandhiError::domain(format!(
                    "prime table is not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
            if let Some(gap) = (w[0] + 1..w[1]).find(|&m| is_prime(m)) {
                return Err(GandhiError::domain(format!(
                    "prime table skips {gap} between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(GandhiError::domain(format!("{bad} is not prime")));
        }
        Ok(PrimeTable { primes })
    }

    /// The first `count` primes.
    pub fn first(count: usize) -> Self {
        PrimeTable { primes: vec![2] }.extended_to(count)
    }

    /// A table holding at least `count` primes, sieving further segments as needed.
    pub fn extended_to(&self, count: usize) -> Self {
        if self.primes.len() >= count {
            return PrimeTable {
                primes: self.primes[..count.max(1)].to_vec(),
            };
        }
        let mut primes = self.primes.clone();
        let mut lo = primes.last().map_or(2, |&p| p + 1);
        while primes.len() < count {
            let hi = lo + SEGMENT_LEN;
            let base = simple_sieve(hi.isqrt());
            sieve_segment(lo, hi, &base, &mut primes);
            lo = hi;
        }
        primes.truncate(count);
        PrimeTable { primes }
    }

    /// Wraps primes produced by the formula itself; checked against the
    /// sieve by the caller when cross-checking is on.
    pub(crate) fn from_generated(primes: Vec<u64>) -> Self {
        debug_assert!(primes.first() == Some(&2));
        PrimeTable { primes }
    }

    /// The `i`-th prime, 1-based.
    pub fn nth(&self, i: usize) -> Option<u64> {
        i.checked_sub(1).and_then(|k| self.primes.get(k).copied())
    }

    pub(crate) fn require(&self, count: usize) -> Result<&[u64]> {
        self.primes.get(..count).ok_or_else(|| {
            GandhiError::domain(format!(
                "prime table holds {} primes, {count} needed",
                self.primes.len()
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn last(&self) -> u64 {
        *self.primes.last().expect("prime tables are never empty")
    }
}

impl AsRef<[u64]> for PrimeTable {
    fn as_ref(&self) -> &[u64] {
        &self.primes
    }
}

/// μ(m) by trial-division factoring.
pub fn mobius(m: u64) -> Result<i8> {
    if m == 0 {
        return Err(GandhiError::domain("μ(0) is undefined"));
    }
    let mut rest = m;
    let mut sign = 1i8;
    let mut f = 2u64;
    while f <= rest / f {
        if rest % f == 0 {
            rest /= f;
            if rest % f == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// `Σ_{d|m} μ(d)`, enumerating divisors in pairs up to `√m`.
pub fn mobius_divisor_sum(m: u64) -> Result<i64> {
    if m == 0 {
        return Err(GandhiError::domain("divisor sums need m ≥ 1"));
    }
    let mut total = 0i64;
    let mut d = 1u64;
    while d <= m / d {
        if m % d == 0 {
            total += i64::from(mobius(d)?);
            let e = m / d;
            if e != d {
                total += i64::from(mobius(e)?);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `p_1 · p_2 · … · p_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primorial {
    pub n: usize,
    pub value: Integer,
}

pub fn primorial(n: usize, table: &PrimeTable) -> Result<Primorial> {
    if n == 0 {
        return Err(GandhiError::domain("primorial index must be ≥ 1"));
    }
    let value = table
        .require(n)?
        .iter()
        .fold(Integer::from(1), |acc, &p| acc * p);
    Ok(Primorial { n, value })
}

/// One squarefree divisor `d` of a primorial together with `μ(d) = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivisorTerm {
    pub d: u128,
    pub mu: i8,
}

/// All `2^n` divisors of `p_n#`, built by subset doubling over the primes:
/// each prime appends a copy of the current list multiplied by it, with μ negated.
pub fn squarefree_divisors(n: usize, table: &PrimeTable) -> Result<Vec<DivisorTerm>> {
    if n == 0 {
        return Err(GandhiError::domain("divisor enumeration needs n ≥ 1"));
    }
    let primes = table.require(n)?;
    let mut terms = Vec::with_capacity(1 << n);
    terms.push(DivisorTerm { d: 1, mu: 1 });
    for &p in primes {
        for i in 0..terms.len() {
            let t = terms[i];
            let d = t.d.checked_mul(u128::from(p)).ok_or_else(|| {
                GandhiError::domain(format!("p_{n}# does not fit in 128 bits"))
            })?;
            terms.push(DivisorTerm { d, mu: -t.mu });
        }
    }
    Ok(terms)
}

/// `min { t ≥ 2 : gcd(t, p_n#) = 1 }`, scanning upward.
///
/// `gcd(t, p_n#) = 1` exactly when none of `p_1..p_n` divides `t`, so the
/// primorial itself is never formed. When the table also holds `p_{n+1}` the
/// result is checked against it.
pub fn least_coprime(n: usize, table: &PrimeTable) -> Result<u64> {
    if n == 0 {
        return Err(GandhiError::domain("least_coprime needs n ≥ 1"));
    }
    let primes = table.require(n)?;
    let t = (2u64..)
        .find(|&t| primes.iter().all(|&p| t % p != 0))
        .expect("there are infinitely many primes");
    if let Some(oracle) = table.nth(n + 1) {
        if oracle != t {
            return Err(GandhiError::OracleMismatch {
                n,
                formula: t,
                oracle,
            });
        }
    }
    Ok(t)
}

/// `(p_{n+2} < 2·p_{n+1}, p_{n+2} ≥ p_{n+1} + 2)`.
pub fn verify_gap_facts(n: usize, table: &PrimeTable) -> Result<(bool, bool)> {
    if n == 0 {
        return Err(GandhiError::domain("gap facts need n ≥ 1"));
    }
    let primes = table.require(n + 2)?;
    let (next, after) = (primes[n], primes[n + 1]);
    Ok((after < 2 * next, after >= next + 2))
}
