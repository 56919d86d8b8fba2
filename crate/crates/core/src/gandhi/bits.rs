use crate::error::{GandhiError, Result};
use crate::numtheory::PrimeTable;

/// The first `len` fractional bits of θ(n): bit `t` is set iff `t ≥ 2` and
/// `gcd(t, p_n#) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoprimeBits {
    // index 0 is fractional position 1
    bits: Vec<bool>,
}

impl CoprimeBits {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at fractional position `t` (1-based).
    pub fn get(&self, t: usize) -> Option<bool> {
        t.checked_sub(1).and_then(|i| self.bits.get(i).copied())
    }

    /// Positions of the 1-bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64 + 1)
    }

    pub fn first_one(&self) -> Option<u64> {
        self.ones().next()
    }

    /// The bits read as the integer `⌊θ · 2^len⌋`.
    pub fn to_integer(&self) -> rug::Integer {
        let mut value = rug::Integer::new();
        for t in self.ones() {
            value.set_bit((self.bits.len() as u64 - t) as u32, true);
        }
        value
    }
}

pub fn theta_bits(n: usize, table: &PrimeTable, len: u64) -> Result<CoprimeBits> {
    if n == 0 {
        return Err(GandhiError::domain("θ(n) needs n ≥ 1"));
    }
    if len < 2 {
        return Err(GandhiError::domain("bit sequence needs at least 2 positions"));
    }
    let primes = table.require(n)?;
    let bits = (1..=len)
        .map(|t| t >= 2 && primes.iter().all(|&p| t % p != 0))
        .collect();
    Ok(CoprimeBits { bits })
}
