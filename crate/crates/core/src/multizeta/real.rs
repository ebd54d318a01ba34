//! Fixed-point reals with a rigorous absolute error bound.
//!
//! A `RealApprox` stands for some real `v` with `|v − mant/2^bits| ≤ err/2^bits`.
//! Every operation returns a bound that covers the exact result of applying
//! the operation to any values inside the inputs' bounds.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;
use crate::{Error, Rational, Result};

pub const DEFAULT_DIGITS: u32 = 30;
const GUARD_BITS: u32 = 64;

/// Working precision in bits for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealApprox {
    mant: BigInt,
    err: BigInt,
    bits: u32,
}

fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    // round half away from zero; error ≤ 1/2 ulp
    let (q, r) = n.div_mod_floor(d);
    if (&r * 2u32).abs() >= d.abs() {
        q + 1
    } else {
        q
    }
}

fn div_ceil_pos(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl RealApprox {
    pub fn zero(bits: u32) -> Self {
        RealApprox { mant: BigInt::zero(), err: BigInt::zero(), bits }
    }

    pub fn from_int(x: i64, bits: u32) -> Self {
        RealApprox { mant: BigInt::from(x) << bits, err: BigInt::zero(), bits }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let n = r.numer() << bits;
        let d = r.denom();
        let (q, rem) = n.div_mod_floor(d);
        let err = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        RealApprox { mant: q, err, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Center as an exact dyadic rational.
    pub fn center(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    /// Error bound as an exact dyadic rational.
    pub fn err_bound(&self) -> Rational {
        Rational::new(self.err.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.mant, self.bits)
    }

    pub fn err_f64(&self) -> f64 {
        ratio_to_f64(&self.err, self.bits)
    }

    /// Widen the error by a nonnegative rational bound.
    pub fn widen(mut self, bound: &Rational) -> Self {
        let scaled = bound.abs() * Rational::from_integer(BigInt::one() << self.bits);
        self.err += div_ceil_pos(scaled.numer(), scaled.denom());
        self
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.bits, other.bits, "RealApprox precision mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        RealApprox { mant: &self.mant + &other.mant, err: &self.err + &other.err, bits: self.bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        RealApprox { mant: &self.mant - &other.mant, err: &self.err + &other.err, bits: self.bits }
    }

    pub fn neg(&self) -> Self {
        RealApprox { mant: -&self.mant, err: self.err.clone(), bits: self.bits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let prod = &self.mant * &other.mant;
        let mant = div_round(&prod, &(BigInt::one() << self.bits));
        // |ab − ãb̃| ≤ |ã|e_b + |b̃|e_a + e_a e_b, plus half an ulp of rounding
        let spread = self.mant.abs() * &other.err + other.mant.abs() * &self.err + &self.err * &other.err;
        let err = div_ceil_pos(&spread, &(BigInt::one() << self.bits)) + 1;
        RealApprox { mant, err, bits: self.bits }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        RealApprox { mant: &self.mant * k, err: &self.err * k.unsigned_abs(), bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        let kb = BigInt::from(k);
        let mant = div_round(&self.mant, &kb);
        let err = div_ceil_pos(&self.err, &kb.abs()) + 1;
        RealApprox { mant, err, bits: self.bits }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        let n = self.mul_big(r.numer());
        let d = r.denom();
        RealApprox { mant: div_round(&n.mant, d), err: div_ceil_pos(&n.err, d) + 1, bits: self.bits }
    }

    fn mul_big(&self, k: &BigInt) -> Self {
        RealApprox { mant: &self.mant * k, err: &self.err * k.abs(), bits: self.bits }
    }

    /// Divide by `2^s` exactly up to rounding.
    pub fn shr(&self, s: u32) -> Self {
        let d = BigInt::one() << s;
        RealApprox { mant: div_round(&self.mant, &d), err: div_ceil_pos(&self.err, &d) + 1, bits: self.bits }
    }

    pub fn shl(&self, s: u32) -> Self {
        RealApprox { mant: &self.mant << s, err: &self.err << s, bits: self.bits }
    }

    /// True when the interval contains zero.
    pub fn may_be_zero(&self) -> bool {
        self.mant.abs() <= self.err
    }

    pub fn recip(&self) -> Result<Self> {
        if self.may_be_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mant.abs();
        let one2 = BigInt::one() << (2 * self.bits);
        let mant = div_round(&one2, &self.mant);
        // |1/b − 1/b̃| ≤ e/(|b̃|(|b̃| − e))
        let err = div_ceil_pos(&(&self.err * &one2), &(&m * (&m - &self.err))) + 1;
        Ok(RealApprox { mant, err, bits: self.bits })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Upper bound on `|v|` as a rational.
    pub fn abs_upper(&self) -> Rational {
        Rational::new(self.mant.abs() + &self.err, BigInt::one() << self.bits)
    }

    /// `|a − b| ≤ err_a + err_b + tol`.
    pub fn agrees(&self, other: &Self, tol: f64) -> bool {
        self.check(other);
        let gap = Rational::new((&self.mant - &other.mant).abs(), BigInt::one() << self.bits);
        let slack = self.err_bound() + other.err_bound() + Rational::from_float(tol).unwrap_or_default();
        gap <= slack
    }

    /// Signed difference of centers as f64.
    pub fn diff_f64(&self, other: &Self) -> f64 {
        self.check(other);
        ratio_to_f64(&(&self.mant - &other.mant), self.bits)
    }

    /// Decimal rendering of the center with `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = div_round(&(&self.mant * BigInt::from(10u32).pow(digits)), &(BigInt::one() << self.bits));
        let neg = scaled.sign() == Sign::Minus;
        let s = scaled.abs().to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (int, frac) = s.split_at(s.len() - digits as usize);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Decimal digits that the error bound still allows to be trusted.
    pub fn correct_digits(&self) -> u32 {
        let e = self.err_f64();
        if e <= 0.0 {
            return u32::MAX;
        }
        (-e.log10()).floor().max(0.0) as u32
    }
}

fn ratio_to_f64(n: &BigInt, bits: u32) -> f64 {
    let shift = n.bits().saturating_sub(60) as u32;
    let top = (n >> shift).to_f64().unwrap_or(0.0);
    top * 2f64.powi(shift as i32 - bits as i32)
}

impl fmt::Display for RealApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.correct_digits().min(self.bits / 3);
        write!(f, "{} ± {:.1e}", self.to_decimal(digits), self.err_f64())
    }
}

impl Scalar for RealApprox {
    fn zero_like(&self) -> Self {
        RealApprox::zero(self.bits)
    }
    fn one_like(&self) -> Self {
        RealApprox::from_int(1, self.bits)
    }
    fn int_like(&self, n: i64) -> Self {
        RealApprox::from_int(n, self.bits)
    }
    fn add(&self, other: &Self) -> Self {
        RealApprox::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RealApprox::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RealApprox::mul(self, other)
    }
    fn neg(&self) -> Self {
        RealApprox::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        self.recip()
    }
    fn is_zero(&self) -> bool {
        self.may_be_zero()
    }
    fn is_exact(&self) -> bool {
        false
    }
}

/// `Σ_{k≥0} t^{2k+1}/(2k+1)` for a rational `0 ≤ t ≤ 1/3`, alternating when `alt`.
///
/// Terms are built by truncating division; each costs at most three ulps and
/// the tail after the first vanishing term is below three ulps.
fn odd_series_rational(t: &Rational, bits: u32, alt: bool) -> RealApprox {
    let (a, b) = (t.numer().clone(), t.denom().clone());
    let (a2, b2) = (&a * &a, &b * &b);
    let mut term = (BigInt::one() << bits) * &a / &b;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let piece = &term / BigInt::from(2 * k + 1);
        if alt && k % 2 == 1 {
            sum -= piece;
        } else {
            sum += piece;
        }
        term = term * &a2 / &b2;
        k += 1;
    }
    RealApprox { mant: sum, err: BigInt::from(3 * k + 3), bits }
}

fn atan_inv(x: i64, bits: u32) -> RealApprox {
    odd_series_rational(&Rational::new(1.into(), x.into()), bits, true)
}

/// π by Machin's formula.
pub fn pi(bits: u32) -> RealApprox {
    atan_inv(5, bits).mul_int(16).sub(&atan_inv(239, bits).mul_int(4))
}

pub fn ln2(bits: u32) -> RealApprox {
    odd_series_rational(&Rational::new(1.into(), 3.into()), bits, false).mul_int(2)
}

/// `2·atanh(t)` for `|t| ≤ 1/3` given as an approximation.
fn two_atanh(t: &RealApprox) -> RealApprox {
    let bits = t.bits;
    let t2 = t.mul(t);
    let mut power = t.clone();
    let mut sum = RealApprox::zero(bits);
    let tiny = Rational::new(BigInt::one(), BigInt::one() << (bits + 2));
    let tb = t.abs_upper();
    let mut bound = tb.clone();
    let mut k = 0i64;
    loop {
        sum = sum.add(&power.div_int(2 * k + 1));
        power = power.mul(&t2);
        bound = &bound * &tb * &tb;
        k += 1;
        if bound < tiny {
            break;
        }
    }
    // geometric tail with ratio ≤ 1/9 + slack
    let tail = bound * Rational::new(9.into(), 7.into());
    sum.widen(&tail).mul_int(2)
}

/// Natural logarithm of a positive approximation.
pub fn ln(x: &RealApprox) -> Result<RealApprox> {
    if x.may_be_zero() || x.mant.is_negative() {
        return Err(Error::Domain("logarithm of a non-positive number".into()));
    }
    let bits = x.bits;
    // x = 2^k · m with m ∈ [1, 2)
    let k = x.mant.bits() as i64 - 1 - bits as i64;
    let m = if k >= 0 { x.shr(k as u32) } else { x.shl((-k) as u32) };
    let one = RealApprox::from_int(1, bits);
    let t = m.sub(&one).div(&m.add(&one))?;
    Ok(two_atanh(&t).add(&ln2(bits).mul_int(k)))
}

pub fn ln_rational(r: &Rational, bits: u32) -> Result<RealApprox> {
    ln(&RealApprox::from_rational(r, bits))
}

/// Exponential by argument halving and a Taylor polynomial.
pub fn exp(y: &RealApprox) -> RealApprox {
    let bits = y.bits;
    let mag = y.abs_upper();
    let mut s = 8u32;
    while mag > Rational::from_integer(BigInt::one() << (s - 8)) {
        s += 1;
    }
    let r = y.shr(s);
    let rb = r.abs_upper();
    let tiny = Rational::new(BigInt::one(), BigInt::one() << (bits + 2));
    let mut term = RealApprox::from_int(1, bits);
    let mut sum = term.clone();
    let mut bound = Rational::one();
    let mut k = 1i64;
    loop {
        term = term.mul(&r).div_int(k);
        sum = sum.add(&term);
        bound = bound * &rb / Rational::from_integer(k.into());
        k += 1;
        if bound < tiny {
            break;
        }
    }
    // |r| ≤ 1/2, so the tail is at most twice the last bound
    let mut out = sum.widen(&(bound * Rational::from_integer(2.into())));
    for _ in 0..s {
        out = out.mul(&out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &RealApprox, v: f64, tol: f64) -> bool {
        (a.to_f64() - v).abs() <= tol
    }

    #[test]
    fn constants() {
        let b = bits_for_digits(30);
        let p = pi(b);
        assert!(p.to_decimal(34).starts_with("3.14159265358979323846264338327"));
        assert!(p.err_f64() < 1e-35);
        assert!(ln2(b).to_decimal(30).starts_with("0.6931471805599453094172321"));
    }

    #[test]
    fn ln_and_exp_invert() {
        let b = bits_for_digits(30);
        let x = RealApprox::from_rational(&Rational::new(37.into(), 7.into()), b);
        let y = exp(&ln(&x).unwrap());
        assert!(y.agrees(&x, 1e-30));
        let e = exp(&RealApprox::from_int(1, b));
        assert!(e.to_decimal(30).starts_with("2.7182818284590452353602874"));
        assert!(close(&exp(&RealApprox::from_int(-50, b)), (-50f64).exp(), 1e-30));
        assert!(close(&ln_rational(&Rational::from_integer(1000.into()), b).unwrap(), 1000f64.ln(), 1e-12));
    }

    #[test]
    fn error_propagation_is_conservative() {
        let b = 80;
        let third = RealApprox::from_rational(&Rational::new(1.into(), 3.into()), b);
        let mut acc = RealApprox::zero(b);
        for _ in 0..3000 {
            acc = acc.add(&third.mul(&third));
        }
        let exact = RealApprox::from_rational(&Rational::new(3000.into(), 9.into()), b);
        assert!(acc.agrees(&exact, 0.0));
        assert!(third.recip().unwrap().agrees(&RealApprox::from_int(3, b), 0.0));
    }

    #[test]
    fn decimal_rendering() {
        let x = RealApprox::from_rational(&Rational::new((-1).into(), 8.into()), 40);
        assert_eq!(x.to_decimal(3), "-0.125");
        assert_eq!(RealApprox::from_int(2, 40).to_decimal(2), "2.00");
    }
}
