//! The coefficient-ring interface shared by the series engine.
//!
//! Scalars carry their own context (prime, modulus, working precision), so the
//! ring constants are produced from an existing element rather than from a
//! static constructor.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

pub trait Scalar: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, k: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    /// For inexact rings this means "zero at the precision carried".
    fn is_zero(&self) -> bool;

    /// True when arithmetic in this ring never loses information.
    fn is_exact(&self) -> bool;

    fn mul_int(&self, k: i64) -> Self {
        self.mul(&self.int_like(k))
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn int_like(&self, k: i64) -> Self {
        Rational::from_integer(BigInt::from(k))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_exact(&self) -> bool {
        true
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact p-adic valuation of a nonzero rational; `None` for zero.
pub fn rational_valuation(x: &Rational, p: u64) -> Option<i64> {
    if Zero::is_zero(x) {
        return None;
    }
    Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

pub fn int_valuation(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = x.abs();
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// Reduce a p-integral rational into `Z/p^k`; fails when the denominator is
/// divisible by p.
pub fn rational_mod(x: &Rational, p: u64, k: u32) -> Result<BigInt> {
    let modulus = BigInt::from(p).pow(k);
    let den = x.denom();
    if (den % BigInt::from(p)).is_zero() {
        return Err(Error::Domain(format!("{x} is not {p}-integral")));
    }
    let inv = crate::padic::zpoly::inv_mod(den, &modulus)?;
    Ok(crate::padic::zpoly::modp(&(x.numer() * inv), &modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational_valuation(&rat(9, 2), 3), Some(2));
        assert_eq!(rational_valuation(&rat(2, 27), 3), Some(-3));
        assert_eq!(rational_valuation(&int(0), 3), None);
    }

    #[test]
    fn reduction_mod_prime_power() {
        assert_eq!(rational_mod(&rat(1, 2), 3, 2).unwrap(), BigInt::from(5));
        assert!(rational_mod(&rat(1, 3), 3, 2).is_err());
    }
}
