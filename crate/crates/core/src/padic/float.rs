use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::zpoly::{self, modp};
use crate::scalar::{int_valuation, Scalar};
use crate::{Error, Rational, Result};

/// Sentinel valuation of the exact zero.
pub const INFINITE_VAL: i64 = i64::MAX;

/// Normalized digits of a floating-valuation p-adic quantity.
///
/// `coeffs` represents `p^v0 · coeffs` known modulo `p^abs`. The result is
/// `(val, rel, unit)`; `rel == 0` means zero to absolute precision `val`.
pub(crate) fn normalize(p: u64, v0: i64, coeffs: Vec<BigInt>, abs: i64) -> (i64, u32, Vec<BigInt>) {
    if abs == INFINITE_VAL {
        // only the exact zero has unbounded precision
        return (INFINITE_VAL, 0, vec![BigInt::zero(); coeffs.len()]);
    }
    let width = coeffs.len();
    if abs <= v0 {
        return (abs, 0, vec![BigInt::zero(); width]);
    }
    let r = (abs - v0) as u32;
    let pb = BigInt::from(p);
    let modulus = pb.pow(r);
    let coeffs: Vec<BigInt> = coeffs.iter().map(|c| modp(c, &modulus)).collect();
    let k = coeffs
        .iter()
        .map(|c| zpoly::valuation_capped(c, &pb, r))
        .min()
        .unwrap_or(r);
    if k == r {
        return (abs, 0, vec![BigInt::zero(); width]);
    }
    let shift = pb.pow(k);
    let rel = r - k;
    let m = pb.pow(rel);
    let unit = coeffs.iter().map(|c| modp(&(c / &shift), &m)).collect();
    (v0 + k as i64, rel, unit)
}

/// Inverse of a p-adic unit modulo `p^prec` by Newton iteration.
pub(crate) fn newton_inverse(u: &BigInt, p: u64, prec: u32) -> Result<BigInt> {
    let pb = BigInt::from(p);
    let residue = modp(u, &pb);
    if residue.is_zero() {
        return Err(Error::NotUnit);
    }
    let mut y = residue.modpow(&BigInt::from(p - 2), &pb);
    if p == 2 {
        y = BigInt::one();
    }
    let mut k = 1u32;
    while k < prec {
        k = (2 * k).min(prec);
        let m = pb.pow(k);
        let uy = modp(&(u * &y), &m);
        y = modp(&(&y * (BigInt::from(2) - uy)), &m);
    }
    Ok(y)
}

/// An element `p^val · unit` of `Q_p` known to absolute precision
/// `p^(val + rel)`.
///
/// `cap` is the working precision N used for new constants; `rel <= cap` is the
/// number of significant digits this particular value still carries. `rel == 0`
/// encodes a zero known only to absolute precision `p^val`, and
/// `val == INFINITE_VAL` the exact zero.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicFloat {
    p: u64,
    cap: u32,
    val: i64,
    rel: u32,
    unit: BigInt,
}

impl PadicFloat {
    pub fn new(p: u64, cap: u32) -> Result<Self> {
        if !zpoly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if cap < 1 {
            return Err(Error::InvalidPrecision(cap));
        }
        Ok(Self::exact_zero(p, cap))
    }

    pub fn exact_zero(p: u64, cap: u32) -> Self {
        PadicFloat { p, cap, val: INFINITE_VAL, rel: 0, unit: BigInt::zero() }
    }

    /// Zero known modulo `p^abs`.
    pub fn zero_mod(p: u64, cap: u32, abs: i64) -> Self {
        PadicFloat { p, cap, val: abs, rel: 0, unit: BigInt::zero() }
    }

    pub fn from_int(p: u64, cap: u32, x: &BigInt) -> Self {
        if x.is_zero() {
            return Self::exact_zero(p, cap);
        }
        let v = int_valuation(x, p) as i64;
        Self::from_parts(p, cap, 0, x.clone(), v + cap as i64)
    }

    pub fn from_i64(p: u64, cap: u32, x: i64) -> Self {
        Self::from_int(p, cap, &BigInt::from(x))
    }

    pub fn from_rational(p: u64, cap: u32, x: &Rational) -> Self {
        if num_traits::Zero::is_zero(x) {
            return Self::exact_zero(p, cap);
        }
        let num = Self::from_int(p, cap, x.numer());
        let den = Self::from_int(p, cap, x.denom());
        num.mul(&den.inv().expect("nonzero denominator"))
    }

    fn from_parts(p: u64, cap: u32, v0: i64, value: BigInt, abs: i64) -> Self {
        let (val, rel, mut unit) = normalize(p, v0, vec![value], abs);
        PadicFloat { p, cap, val, rel, unit: unit.pop().unwrap_or_default() }
    }

    pub fn random_integer<R: Rng + ?Sized>(p: u64, cap: u32, rng: &mut R) -> Self {
        let m = BigInt::from(p).pow(cap);
        let x = random_below(&m, rng);
        Self::from_parts(p, cap, 0, x, cap as i64)
    }

    pub fn random_unit<R: Rng + ?Sized>(p: u64, cap: u32, rng: &mut R) -> Self {
        loop {
            let x = Self::random_integer(p, cap, rng);
            if x.valuation() == Some(0) {
                return x;
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Valuation of a nonzero element; `None` when no significant digit is
    /// known.
    pub fn valuation(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.val)
    }

    /// Lower bound for the valuation, valid for zeros too.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.val
    }

    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    pub fn absolute_precision(&self) -> i64 {
        if self.val == INFINITE_VAL {
            INFINITE_VAL
        } else {
            self.val + self.rel as i64
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val == INFINITE_VAL
    }

    /// Representative in `Z/p^k` of an integral element.
    pub fn residue(&self, k: u32) -> Result<BigInt> {
        let m = BigInt::from(self.p).pow(k);
        if self.absolute_precision() < k as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "need {k} digits, have {}",
                self.absolute_precision()
            )));
        }
        if self.rel == 0 {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return Err(Error::Domain("element is not integral".into()));
        }
        Ok(modp(&(&self.unit * BigInt::from(self.p).pow(self.val as u32)), &m))
    }

    /// Multiply by `p^k` (exact).
    pub fn shift(&self, k: i64) -> Self {
        if self.val == INFINITE_VAL {
            return self.clone();
        }
        PadicFloat { val: self.val + k, ..self.clone() }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
    }
}

pub(crate) fn random_below<R: Rng + ?Sized>(m: &BigInt, rng: &mut R) -> BigInt {
    // rejection-free: draw 64 extra bits and reduce
    let bits = m.bits() + 64;
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill(bytes.as_mut_slice());
    modp(&BigInt::from_bytes_le(num_bigint::Sign::Plus, &bytes), m)
}

impl Scalar for PadicFloat {
    fn zero_like(&self) -> Self {
        Self::exact_zero(self.p, self.cap)
    }

    fn one_like(&self) -> Self {
        Self::from_i64(self.p, self.cap, 1)
    }

    fn int_like(&self, k: i64) -> Self {
        Self::from_i64(self.p, self.cap, k)
    }

    fn add(&self, other: &Self) -> Self {
        self.check(other);
        let cap = self.cap.max(other.cap);
        let abs = self.absolute_precision().min(other.absolute_precision());
        let terms: Vec<&PadicFloat> = [self, other].into_iter().filter(|x| x.rel > 0).collect();
        if terms.is_empty() {
            return PadicFloat { p: self.p, cap, val: abs, rel: 0, unit: BigInt::zero() };
        }
        let v0 = terms.iter().map(|t| t.val).min().unwrap();
        let pb = BigInt::from(self.p);
        let value: BigInt = terms.iter().map(|t| &t.unit * pb.pow((t.val - v0) as u32)).sum();
        Self::from_parts(self.p, cap, v0, value, abs)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let cap = self.cap.max(other.cap);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(self.p, cap);
        }
        let val = self.val + other.val;
        if self.rel == 0 || other.rel == 0 {
            return Self::zero_mod(self.p, cap, val);
        }
        let rel = self.rel.min(other.rel);
        let m = BigInt::from(self.p).pow(rel);
        PadicFloat { p: self.p, cap, val, rel, unit: modp(&(&self.unit * &other.unit), &m) }
    }

    fn neg(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let m = BigInt::from(self.p).pow(self.rel);
        PadicFloat { unit: modp(&-&self.unit, &m), ..self.clone() }
    }

    fn inv(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let unit = newton_inverse(&self.unit, self.p, self.rel)?;
        Ok(PadicFloat { val: -self.val, unit, ..self.clone() })
    }

    fn is_zero(&self) -> bool {
        self.rel == 0
    }

    fn is_exact(&self) -> bool {
        false
    }
}

impl fmt::Debug for PadicFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.rel == 0 {
            return write!(f, "O({p}^{})", self.val);
        }
        write!(f, "{}*{p}^{} + O({p}^{})", self.unit, self.val, self.absolute_precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(PadicFloat::new(4, 8).unwrap_err(), Error::NotPrime(4));
        assert_eq!(PadicFloat::new(5, 0).unwrap_err(), Error::InvalidPrecision(0));
    }

    #[test]
    fn geometric_series_inverts_one_plus_p() {
        // (1 + p) * sum_{k<N} (-p)^k = 1 - (-p)^N == 1 to precision N
        let (p, n) = (5u64, 8u32);
        let one_plus_p = PadicFloat::from_i64(p, n, 1 + p as i64);
        let mut geo = BigInt::zero();
        for k in 0..n {
            geo += BigInt::from(-(p as i64)).pow(k);
        }
        let geo = PadicFloat::from_int(p, n, &geo);
        let prod = one_plus_p.mul(&geo);
        assert!(prod.sub(&prod.one_like()).is_zero());
        assert_eq!(prod.absolute_precision(), n as i64);
        assert!(geo.sub(&one_plus_p.inv().unwrap()).is_zero());
    }

    #[test]
    fn rational_embedding_tracks_valuation() {
        let x = PadicFloat::from_rational(3, 10, &rat(5, 27));
        assert_eq!(x.valuation(), Some(-3));
        let back = x.mul(&PadicFloat::from_i64(3, 10, 27));
        assert!(back.sub(&PadicFloat::from_i64(3, 10, 5)).is_zero());
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let a = PadicFloat::from_i64(3, 6, 1 + 81);
        let b = PadicFloat::from_i64(3, 6, 1);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(4));
        assert_eq!(d.absolute_precision(), 6);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.valuation_lower_bound(), 6);
    }

    #[test]
    fn field_axioms_on_random_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = PadicFloat::random_unit(7, 12, &mut rng).shift(rng.gen_range(-3..4));
            let y = PadicFloat::random_unit(7, 12, &mut rng).shift(rng.gen_range(-3..4));
            assert!(x.mul(&x.inv().unwrap()).is_one());
            assert_eq!(
                x.mul(&y).valuation().unwrap(),
                x.valuation().unwrap() + y.valuation().unwrap()
            );
            let s = x.add(&y);
            let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
            assert!(s.valuation_lower_bound() >= vx.min(vy));
            if vx != vy {
                assert_eq!(s.valuation(), Some(vx.min(vy)));
            }
        }
    }

    #[test]
    fn zero_handling() {
        let z = PadicFloat::zero_mod(5, 8, 3);
        let x = PadicFloat::from_i64(5, 8, 10);
        assert_eq!(z.mul(&x).valuation_lower_bound(), 4);
        assert_eq!(z.add(&x).absolute_precision(), 3);
        assert!(z.inv().is_err());
    }
}
