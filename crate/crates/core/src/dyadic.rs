//! Binary fixed-point numbers `m · 2^-B` and closed intervals of them.
//!
//! Every value handled here is a finite signed sum of enclosed geometric
//! series, so addition and negation are the only arithmetic needed, and both
//! are exact on dyadic endpoints. Rounding happens in exactly one place:
//! [`reciprocal_mersenne`] drops the series tail from the lower endpoint and
//! charges one unit in the last place to the upper endpoint.
//!
//! No floating-point type is used anywhere in this module.

use std::cmp::Ordering;
use std::fmt;

use rug::integer::Order;
use rug::{Integer, Rational};

use crate::error::{GandhiError, Result};

/// The value `mantissa · 2^(-frac_bits)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicFixed {
    mantissa: Integer,
    frac_bits: u64,
}

impl DyadicFixed {
    pub fn new(mantissa: impl Into<Integer>, frac_bits: u64) -> Self {
        DyadicFixed {
            mantissa: mantissa.into(),
            frac_bits,
        }
    }

    pub fn zero(frac_bits: u64) -> Self {
        DyadicFixed::new(0, frac_bits)
    }

    /// `2^(-exp)` carried at `frac_bits` fractional bits; needs `exp ≤ frac_bits`.
    pub fn pow2_neg(exp: u64, frac_bits: u64) -> Result<Self> {
        if exp > frac_bits {
            return Err(GandhiError::Precision {
                bits: frac_bits,
                needed: exp,
            });
        }
        Ok(DyadicFixed::new(
            Integer::from(1) << shift(frac_bits - exp),
            frac_bits,
        ))
    }

    pub fn mantissa(&self) -> &Integer {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u64 {
        self.frac_bits
    }

    /// Same value at `frac_bits ≥ self.frac_bits`.
    pub fn rescaled(&self, frac_bits: u64) -> Self {
        assert!(
            frac_bits >= self.frac_bits,
            "rescaling may only add fractional bits"
        );
        DyadicFixed {
            mantissa: self.mantissa.clone() << shift(frac_bits - self.frac_bits),
            frac_bits,
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from((
            self.mantissa.clone(),
            Integer::from(1) << shift(self.frac_bits),
        ))
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > 0
    }
}

impl PartialOrd for DyadicFixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicFixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let bits = self.frac_bits.max(other.frac_bits);
        let a = self.mantissa.clone() << shift(bits - self.frac_bits);
        let b = other.mantissa.clone() << shift(bits - other.frac_bits);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^-{}", self.mantissa, self.frac_bits)
    }
}

fn shift(bits: u64) -> u32 {
    u32::try_from(bits).expect("shift amount exceeds u32")
}

/// A closed interval `[lo, hi]` whose endpoints share one fractional precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: DyadicFixed,
    hi: DyadicFixed,
}

impl DyadicInterval {
    pub fn new(lo: DyadicFixed, hi: DyadicFixed) -> Result<Self> {
        let bits = lo.frac_bits.max(hi.frac_bits);
        let (lo, hi) = (lo.rescaled(bits), hi.rescaled(bits));
        if lo.mantissa > hi.mantissa {
            return Err(GandhiError::domain(format!(
                "interval endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(DyadicInterval { lo, hi })
    }

    pub fn point(x: DyadicFixed) -> Self {
        DyadicInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &DyadicFixed {
        &self.lo
    }

    pub fn hi(&self) -> &DyadicFixed {
        &self.hi
    }

    pub fn frac_bits(&self) -> u64 {
        self.lo.frac_bits
    }

    pub fn width(&self) -> DyadicFixed {
        DyadicFixed::new(
            self.hi.mantissa.clone() - &self.lo.mantissa,
            self.lo.frac_bits,
        )
    }

    pub fn rescaled(&self, frac_bits: u64) -> Self {
        DyadicInterval {
            lo: self.lo.rescaled(frac_bits),
            hi: self.hi.rescaled(frac_bits),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn add(&self, other: &DyadicInterval) -> DyadicInterval {
        let bits = self.frac_bits().max(other.frac_bits());
        let (a, b) = (self.rescaled(bits), other.rescaled(bits));
        DyadicInterval {
            lo: DyadicFixed::new(a.lo.mantissa + b.lo.mantissa, bits),
            hi: DyadicFixed::new(a.hi.mantissa + b.hi.mantissa, bits),
        }
    }

    pub fn negate(&self) -> DyadicInterval {
        DyadicInterval {
            lo: DyadicFixed::new(-self.hi.mantissa.clone(), self.hi.frac_bits),
            hi: DyadicFixed::new(-self.lo.mantissa.clone(), self.lo.frac_bits),
        }
    }

    /// In-place `self += sign · other` for operands already at this precision.
    pub(crate) fn accumulate(&mut self, other: &DyadicInterval, negative: bool) {
        debug_assert_eq!(self.frac_bits(), other.frac_bits());
        if negative {
            self.lo.mantissa -= &other.hi.mantissa;
            self.hi.mantissa -= &other.lo.mantissa;
        } else {
            self.lo.mantissa += &other.lo.mantissa;
            self.hi.mantissa += &other.hi.mantissa;
        }
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Enclosure of `1/(2^d − 1) = Σ_{k≥1} 2^(-kd)` at `frac_bits` fractional bits.
///
/// `lo` keeps the 1-bits at fractional positions `d, 2d, 3d, … ≤ frac_bits`.
/// The dropped tail is positive and at most `2^(-frac_bits)` (equal only for
/// `d = 1`), so `hi = lo + 2^(-frac_bits)`.
pub fn reciprocal_mersenne(d: u128, frac_bits: u64) -> Result<DyadicInterval> {
    if d == 0 {
        return Err(GandhiError::domain("1/(2^d - 1) needs d ≥ 1"));
    }
    if d > u128::from(frac_bits) {
        return Err(GandhiError::Precision {
            bits: frac_bits,
            needed: u64::try_from(d).unwrap_or(u64::MAX),
        });
    }
    Ok(mersenne_enclosure(d, frac_bits))
}

/// Like [`reciprocal_mersenne`] but also accepts `d > frac_bits`, where no bit
/// survives truncation and the enclosure is `[0, 2^(-frac_bits)]`.
pub(crate) fn mersenne_enclosure(d: u128, frac_bits: u64) -> DyadicInterval {
    let lo = if d > u128::from(frac_bits) {
        Integer::new()
    } else {
        let d = d as u64;
        let mut limbs = vec![0u64; (frac_bits / 64 + 1) as usize];
        let mut pos = d;
        while pos <= frac_bits {
            let bit = frac_bits - pos;
            limbs[(bit / 64) as usize] |= 1 << (bit % 64);
            pos += d;
        }
        Integer::from_digits(&limbs, Order::Lsf)
    };
    let hi = lo.clone() + 1u32;
    DyadicInterval {
        lo: DyadicFixed::new(lo, frac_bits),
        hi: DyadicFixed::new(hi, frac_bits),
    }
}

/// Result of trying to read a prime off an enclosure of θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extraction {
    Prime(u64),
    /// The enclosure straddles a bracketing boundary; retry with more bits.
    Inconclusive,
}

impl Extraction {
    pub fn prime(self) -> Option<u64> {
        match self {
            Extraction::Prime(p) => Some(p),
            Extraction::Inconclusive => None,
        }
    }
}

fn check_positive_hi(theta: &DyadicInterval) -> Result<()> {
    if theta.hi.mantissa <= 0 {
        return Err(GandhiError::domain(format!(
            "θ enclosure {theta} has a non-positive upper endpoint"
        )));
    }
    Ok(())
}

fn prime_from_exponent(frac_bits: u64, e: u64) -> Extraction {
    match frac_bits.checked_sub(e) {
        Some(p) if p >= 1 => Extraction::Prime(p),
        _ => Extraction::Inconclusive,
    }
}

/// The integer `p` with `2^(-p) < lo ≤ hi < 2^(-p+1)`, found from the
/// most significant bits of the two mantissas.
///
/// With `lo = m · 2^(-B)` the condition reads `2^(B-p) < m_lo` and
/// `m_hi < 2^(B-p+1)`, so the only candidate exponent `e = B - p` is the
/// largest with `2^e < m_lo`.
pub fn extract_next_prime(theta: &DyadicInterval) -> Result<Extraction> {
    check_positive_hi(theta)?;
    let (m_lo, m_hi) = (&theta.lo.mantissa, &theta.hi.mantissa);
    if *m_lo <= 0 {
        return Ok(Extraction::Inconclusive);
    }
    if *m_lo == 1 {
        return Ok(Extraction::Inconclusive);
    }
    let lo_bits = u64::from(m_lo.significant_bits());
    let e = if m_lo.is_power_of_two() {
        lo_bits - 2
    } else {
        lo_bits - 1
    };
    if u64::from(m_hi.significant_bits()) <= e + 1 {
        Ok(prime_from_exponent(theta.frac_bits(), e))
    } else {
        Ok(Extraction::Inconclusive)
    }
}

/// The integer `p` with `(3/4)·2^(-p) < lo ≤ hi < (3/2)·2^(-p)`, which makes
/// `⌊log₂(3/(2θ))⌋ = p` for every θ in the enclosure.
///
/// In mantissa terms, with `e = B - p`: `3·2^e < 4·m_lo` and `2·m_hi < 3·2^e`.
pub fn extract_next_prime_refined(theta: &DyadicInterval) -> Result<Extraction> {
    check_positive_hi(theta)?;
    let (m_lo, m_hi) = (&theta.lo.mantissa, &theta.hi.mantissa);
    if *m_lo <= 0 {
        return Ok(Extraction::Inconclusive);
    }
    let four_lo = m_lo.clone() << 2u32;
    let two_hi = m_hi.clone() << 1u32;
    // 3·2^e < 4·m_lo bounds e from above; scan the two exponents next to m_lo's top bit.
    let top = u64::from(m_lo.significant_bits());
    for e in [top, top.saturating_sub(1)] {
        let three_pow = Integer::from(3) << shift(e);
        if three_pow < four_lo {
            if two_hi < three_pow {
                return Ok(prime_from_exponent(theta.frac_bits(), e));
            }
            return Ok(Extraction::Inconclusive);
        }
    }
    Ok(Extraction::Inconclusive)
}
