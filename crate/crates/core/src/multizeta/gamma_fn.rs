//! The Gamma function at positive rationals by upward shift and Stirling's
//! series. Independent of the ζ machinery; used to check the Taylor series of
//! `1/Γ`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::real::{bits_for_digits, exp, ln, ln_rational, pi, RealApprox};
use super::bernoulli;
use crate::{Error, Rational, Result};

fn ln_gamma_bits(z: &Rational, bits: u32) -> Result<RealApprox> {
    if !z.is_positive() {
        return Err(Error::Domain("ln Γ needs a positive argument".into()));
    }
    // shift so that w = z + K is large, then ln Γ(z) = ln Γ(w) − ln Π (z + i)
    let shift = (bits as i64 / 4).max(20);
    let w = z + Rational::from_integer(shift.into());
    let mut prod = Rational::one();
    for i in 0..shift {
        prod *= z + Rational::from_integer(i.into());
    }
    let half = Rational::new(1.into(), 2.into());
    let two_pi = pi(bits).mul_int(2);
    let mut acc = ln_rational(&w, bits)?
        .mul_rational(&(&w - &half))
        .sub(&RealApprox::from_rational(&w, bits))
        .add(&ln(&two_pi)?.mul_rational(&half));
    let target = Rational::new(BigInt::one(), BigInt::one() << (bits + 2));
    let mut exact = Rational::zero();
    let mut j = 1usize;
    let remainder = loop {
        let k = Rational::from_integer(BigInt::from(2 * j * (2 * j - 1)));
        let t = bernoulli(2 * j) / k / w.pow(2 * j as i32 - 1);
        // for real w > 0 the error is bounded by the first omitted term
        if t.abs() < target {
            break t.abs();
        }
        exact += t;
        j += 1;
    };
    acc = acc.add(&RealApprox::from_rational(&exact, bits)).widen(&remainder);
    Ok(acc.sub(&ln_rational(&prod, bits)?))
}

/// `ln Γ(z)` for rational `z > 0`.
pub fn ln_gamma(z: &Rational, digits: u32) -> Result<RealApprox> {
    ln_gamma_bits(z, bits_for_digits(digits))
}

/// `1/Γ(z)` for rational `z > 0`.
pub fn reciprocal_gamma(z: &Rational, digits: u32) -> Result<RealApprox> {
    Ok(exp(&ln_gamma_bits(z, bits_for_digits(digits))?.neg()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn factorials_and_half() {
        let g5 = ln_gamma(&q(5, 1), 25).unwrap();
        assert!(g5.agrees(&ln_rational(&q(24, 1), g5.bits()).unwrap(), 1e-25));
        // Γ(1/2)² = π
        let r = reciprocal_gamma(&q(1, 2), 25).unwrap();
        let p = pi(r.bits());
        assert!(r.mul(&r).recip().unwrap().agrees(&p, 1e-24));
    }

    #[test]
    fn reflection_formula() {
        // Γ(z)Γ(1−z) = π / sin(πz); at z = 1/6 this is 2π
        let a = reciprocal_gamma(&q(1, 6), 25).unwrap();
        let b = reciprocal_gamma(&q(5, 6), 25).unwrap();
        let p = pi(a.bits()).mul_int(2);
        assert!(a.mul(&b).recip().unwrap().agrees(&p, 1e-23));
    }
}
