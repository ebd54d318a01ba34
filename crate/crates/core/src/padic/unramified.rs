use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::float::{normalize, random_below, PadicFloat, INFINITE_VAL};
use super::modulus::UnramifiedModulus;
use super::residue::Fq;
use super::zpoly::{self, modp};
use crate::scalar::{int_valuation, Scalar};
use crate::{Error, Rational, Result};

/// Element `p^val · unit(x)` of `Q_q = W(F_q)[1/p]`, with `unit` a polynomial
/// of degree < n that is nonzero mod p, known to absolute precision
/// `p^(val + rel)`.
///
/// Zero conventions match [`PadicFloat`]: `rel == 0` is a zero known modulo
/// `p^val`, and `val == INFINITE_VAL` the exact zero.
#[derive(Clone)]
pub struct UnramifiedElem {
    modulus: Arc<UnramifiedModulus>,
    val: i64,
    rel: u32,
    unit: Vec<BigInt>,
}

impl UnramifiedElem {
    pub fn zero(modulus: &Arc<UnramifiedModulus>) -> Self {
        UnramifiedElem {
            modulus: Arc::clone(modulus),
            val: INFINITE_VAL,
            rel: 0,
            unit: vec![BigInt::zero(); modulus.degree()],
        }
    }

    pub fn zero_mod(modulus: &Arc<UnramifiedModulus>, abs: i64) -> Self {
        UnramifiedElem { val: abs, ..Self::zero(modulus) }
    }

    pub fn one(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::from_i64(modulus, 1)
    }

    /// Integral element with coefficients in the basis 1, x, …, x^(n-1),
    /// carrying the full working precision.
    pub fn from_coeffs(modulus: &Arc<UnramifiedModulus>, coeffs: &[BigInt]) -> Result<Self> {
        let cap = modulus.precision();
        let red = modulus.reduce(coeffs, cap)?;
        if red.iter().all(Zero::is_zero) {
            if coeffs.iter().all(Zero::is_zero) {
                return Ok(Self::zero(modulus));
            }
            return Ok(Self::zero_mod(modulus, cap as i64));
        }
        Ok(Self::from_parts(modulus, 0, red, cap as i64))
    }

    pub fn from_int(modulus: &Arc<UnramifiedModulus>, x: &BigInt) -> Self {
        if x.is_zero() {
            return Self::zero(modulus);
        }
        let v = int_valuation(x, modulus.prime()) as i64;
        let mut c = vec![BigInt::zero(); modulus.degree()];
        c[0] = x.clone();
        Self::from_parts(modulus, 0, c, v + modulus.precision() as i64)
    }

    pub fn from_i64(modulus: &Arc<UnramifiedModulus>, x: i64) -> Self {
        Self::from_int(modulus, &BigInt::from(x))
    }

    pub fn from_rational(modulus: &Arc<UnramifiedModulus>, x: &Rational) -> Self {
        if num_traits::Zero::is_zero(x) {
            return Self::zero(modulus);
        }
        let num = Self::from_int(modulus, x.numer());
        let den = Self::from_int(modulus, x.denom());
        num.mul(&den.inv().expect("nonzero denominator"))
    }

    /// Embed `Q_p` into `Q_q`.
    pub fn from_padic(modulus: &Arc<UnramifiedModulus>, x: &PadicFloat) -> Self {
        assert_eq!(x.prime(), modulus.prime());
        if x.is_exact_zero() {
            return Self::zero(modulus);
        }
        if x.relative_precision() == 0 {
            return Self::zero_mod(modulus, x.valuation_lower_bound());
        }
        let mut c = vec![BigInt::zero(); modulus.degree()];
        c[0] = x.unit().clone();
        Self::from_parts(modulus, x.valuation_lower_bound(), c, x.absolute_precision())
    }

    /// The Teichmüller generator ω (class of x).
    pub fn generator(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::from_coeffs(modulus, &[BigInt::zero(), BigInt::one()]).expect("monic modulus")
    }

    fn from_parts(modulus: &Arc<UnramifiedModulus>, v0: i64, coeffs: Vec<BigInt>, abs: i64) -> Self {
        let (val, rel, unit) = normalize(modulus.prime(), v0, coeffs, abs);
        let mut out = UnramifiedElem { modulus: Arc::clone(modulus), val, rel, unit };
        out.unit.resize(modulus.degree(), BigInt::zero());
        out
    }

    pub fn random_integral<R: Rng + ?Sized>(modulus: &Arc<UnramifiedModulus>, rng: &mut R) -> Self {
        let m = modulus.p_pow(modulus.precision());
        let c: Vec<BigInt> = (0..modulus.degree()).map(|_| random_below(&m, rng)).collect();
        if c.iter().all(Zero::is_zero) {
            return Self::zero_mod(modulus, modulus.precision() as i64);
        }
        Self::from_parts(modulus, 0, c, modulus.precision() as i64)
    }

    pub fn random_unit<R: Rng + ?Sized>(modulus: &Arc<UnramifiedModulus>, rng: &mut R) -> Self {
        loop {
            let x = Self::random_integral(modulus, rng);
            if x.valuation() == Some(0) {
                return x;
            }
        }
    }

    pub fn modulus(&self) -> &Arc<UnramifiedModulus> {
        &self.modulus
    }

    pub fn valuation(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.val)
    }

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

    pub fn is_exact_zero(&self) -> bool {
        self.val == INFINITE_VAL
    }

    pub fn unit_coeffs(&self) -> &[BigInt] {
        &self.unit
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.val == INFINITE_VAL {
            return self.clone();
        }
        UnramifiedElem { val: self.val + k, ..self.clone() }
    }

    /// Coefficients of an integral element modulo `p^k` in the basis x^i.
    pub fn integral_coeffs(&self, k: u32) -> Result<Vec<BigInt>> {
        if self.absolute_precision() < k as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "need {k} digits, have {}",
                self.absolute_precision()
            )));
        }
        let n = self.modulus.degree();
        if self.rel == 0 {
            return Ok(vec![BigInt::zero(); n]);
        }
        if self.val < 0 {
            return Err(Error::Domain("element is not integral".into()));
        }
        let m = self.modulus.p_pow(k);
        let s = self.modulus.p_pow(self.val as u32);
        Ok(self.unit.iter().map(|c| modp(&(c * &s), &m)).collect())
    }

    /// Reduction to the residue field; requires an integral element known
    /// mod p.
    pub fn residue(&self) -> Result<Fq> {
        Fq::new(&self.modulus, &self.integral_coeffs(1)?)
    }

    /// True iff the element lies in `Q_p` (all higher basis coefficients
    /// vanish at the carried precision).
    pub fn is_rational(&self) -> bool {
        if self.rel == 0 {
            return true;
        }
        let m = self.modulus.p_pow(self.rel);
        self.unit.iter().skip(1).all(|c| modp(c, &m).is_zero())
    }

    /// The Frobenius automorphism σ, the ring map with `x ↦ x^p`.
    pub fn frobenius(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let pk = self.modulus.p_pow(self.rel);
        let n = self.modulus.degree();
        let mut out = vec![BigInt::zero(); n];
        for (a, img) in self.unit.iter().zip(self.modulus.frobenius_images()) {
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(img) {
                *o = modp(&(&*o + a * c), &pk);
            }
        }
        Self::from_parts(&self.modulus, self.val, out, self.absolute_precision())
    }

    /// σ^k for any integer k (σ has order n).
    pub fn frobenius_pow(&self, k: i64) -> Self {
        let n = self.modulus.degree() as i64;
        let mut out = self.clone();
        for _ in 0..k.rem_euclid(n) {
            out = out.frobenius();
        }
        out
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        let mut result = self.one_like();
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base);
            }
            if i + 1 < bits {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn to_json(&self) -> ElemJson {
        ElemJson {
            p: self.modulus.prime(),
            n: self.modulus.degree(),
            prec: self.rel,
            val: (self.val != INFINITE_VAL).then_some(self.val),
            unit_coeffs: self.unit.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(modulus: &Arc<UnramifiedModulus>, j: &ElemJson) -> Result<Self> {
        if j.p != modulus.prime() || j.n != modulus.degree() {
            return Err(Error::ModulusMismatch);
        }
        if j.unit_coeffs.len() != j.n {
            return Err(Error::Parse(format!("expected {} unit coefficients", j.n)));
        }
        let coeffs = j
            .unit_coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let Some(val) = j.val else {
            return Ok(Self::zero(modulus));
        };
        let rel = j.prec.min(modulus.precision());
        Ok(Self::from_parts(modulus, val, coeffs, val + rel as i64))
    }

    fn same_modulus(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus,
            "unramified operands over different moduli"
        );
    }
}

/// Interchange format `{p, n, prec, val, unit_coeffs}`; `val` is null for the
/// exact zero and `unit_coeffs` are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub p: u64,
    pub n: usize,
    pub prec: u32,
    pub val: Option<i64>,
    pub unit_coeffs: Vec<String>,
}

/// Unique (q−1)-st root of unity reducing to `c`, by iterating `y ↦ y^q`.
pub fn teichmueller(c: &Fq) -> Result<UnramifiedElem> {
    if Scalar::is_zero(c) {
        return Err(Error::Domain("the Teichmüller lift of 0 is 0, not a root of unity".into()));
    }
    let modulus = c.modulus();
    let q = modulus.q();
    let mut y = UnramifiedElem::from_coeffs(modulus, c.coeffs())?;
    for _ in 0..=modulus.precision() {
        let next = y.pow(&q);
        if next.sub(&y).is_zero() {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::NonConvergence(modulus.precision() as usize + 1))
}

fn log_exp_min_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// p-adic logarithm on `1 + pW` (`1 + 4W` for p = 2).
///
/// The input is known to absolute precision r; every term `z^k/k` is then
/// known to at least r digits as well, so the result carries absolute
/// precision r (the working arithmetic records any shortfall).
pub fn padic_log(u: &UnramifiedElem) -> Result<UnramifiedElem> {
    let p = u.modulus.prime();
    let z = u.sub(&u.one_like());
    let vz = z.valuation_lower_bound();
    let need = log_exp_min_valuation(p);
    if vz < need {
        return Err(Error::Domain(format!(
            "log needs an argument congruent to 1 mod {}",
            p.pow(need as u32)
        )));
    }
    if z.is_exact_zero() {
        return Ok(UnramifiedElem::zero(&u.modulus));
    }
    let target = u.absolute_precision();
    let mut sum = UnramifiedElem::zero(&u.modulus);
    let mut power = z.clone();
    let mut k: i64 = 1;
    loop {
        // terms beyond k have valuation ≥ k·vz − log_p(k) ≥ target
        if k * vz - ilog(p, k as u64) as i64 >= target {
            break;
        }
        let term = power.mul(&UnramifiedElem::from_i64(&u.modulus, k).inv()?);
        sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(&z);
        k += 1;
    }
    Ok(cap_absolute(sum, target))
}

/// p-adic exponential on `pW` (`4W` for p = 2).
pub fn padic_exp(a: &UnramifiedElem) -> Result<UnramifiedElem> {
    let p = a.modulus.prime();
    let va = a.valuation_lower_bound();
    let need = log_exp_min_valuation(p);
    if va < need {
        return Err(Error::Domain(format!(
            "exp needs an argument divisible by {}",
            p.pow(need as u32)
        )));
    }
    let one = a.one_like();
    if a.is_exact_zero() {
        return Ok(one);
    }
    let target = a.absolute_precision();
    let mut sum = one.clone();
    let mut term = one;
    let mut k: i64 = 1;
    loop {
        // v(a^j / j!) ≥ j·va − (j−1)/(p−1), increasing in j
        if k * va - (k - 1) / (p as i64 - 1) >= target {
            break;
        }
        term = term.mul(a).mul(&UnramifiedElem::from_i64(&a.modulus, k).inv()?);
        sum = sum.add(&term);
        k += 1;
    }
    Ok(cap_absolute(sum, target))
}

fn ilog(p: u64, k: u64) -> u32 {
    let mut e = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        e += 1;
    }
    e
}

fn cap_absolute(x: UnramifiedElem, abs: i64) -> UnramifiedElem {
    if x.absolute_precision() <= abs {
        return x;
    }
    let coeffs = x.unit.clone();
    UnramifiedElem::from_parts(&x.modulus, x.val, coeffs, abs)
}

impl Scalar for UnramifiedElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.modulus)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.modulus)
    }

    fn int_like(&self, k: i64) -> Self {
        Self::from_i64(&self.modulus, k)
    }

    fn add(&self, other: &Self) -> Self {
        self.same_modulus(other);
        let abs = self.absolute_precision().min(other.absolute_precision());
        let terms: Vec<&UnramifiedElem> = [self, other].into_iter().filter(|x| x.rel > 0).collect();
        if terms.is_empty() {
            if abs == INFINITE_VAL {
                return Self::zero(&self.modulus);
            }
            return Self::zero_mod(&self.modulus, abs);
        }
        let v0 = terms.iter().map(|t| t.val).min().unwrap();
        let pb = self.modulus.p_big();
        let mut sum = vec![BigInt::zero(); self.modulus.degree()];
        for t in terms {
            let s = pb.pow((t.val - v0) as u32);
            for (acc, c) in sum.iter_mut().zip(&t.unit) {
                *acc += c * &s;
            }
        }
        Self::from_parts(&self.modulus, v0, sum, abs)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        self.same_modulus(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.modulus);
        }
        let val = self.val + other.val;
        if self.rel == 0 || other.rel == 0 {
            return Self::zero_mod(&self.modulus, val);
        }
        let rel = self.rel.min(other.rel);
        let pk = self.modulus.p_pow(rel);
        let prod = zpoly::mul(&self.unit, &other.unit, &pk);
        let red = self.modulus.reduce(&prod, rel).expect("monic modulus");
        Self::from_parts(&self.modulus, val, red, val + rel as i64)
    }

    fn neg(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let pk = self.modulus.p_pow(self.rel);
        UnramifiedElem { unit: self.unit.iter().map(|c| modp(&-c, &pk)).collect(), ..self.clone() }
    }

    /// Residue-field inverse lifted by Newton iteration `y ← y(2 − uy)`.
    fn inv(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let m = &self.modulus;
        let pb = m.p_big();
        let ubar = zpoly::reduce(&self.unit, &pb);
        let (g, s, _) = zpoly::ext_gcd_fp(&ubar, m.residue_polynomial(), &pb)?;
        if g != vec![BigInt::one()] {
            return Err(Error::NotUnit);
        }
        let mut y = m.reduce(&s, 1)?;
        let mut k = 1u32;
        while k < self.rel {
            k = (2 * k).min(self.rel);
            let pk = m.p_pow(k);
            let uy = m.reduce(&zpoly::mul(&self.unit, &y, &pk), k)?;
            let two_minus = zpoly::sub(&[BigInt::from(2)], &uy, &pk);
            y = m.reduce(&zpoly::mul(&y, &two_minus, &pk), k)?;
        }
        Ok(Self::from_parts(m, -self.val, y, -self.val + self.rel as i64))
    }

    fn is_zero(&self) -> bool {
        self.rel == 0
    }

    fn is_exact(&self) -> bool {
        false
    }
}

impl fmt::Debug for UnramifiedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UnramifiedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.modulus.prime();
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.rel == 0 {
            return write!(f, "O({p}^{})", self.val);
        }
        let terms: Vec<String> = self
            .unit
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{i}"),
            })
            .collect();
        write!(f, "{p}^{}*({}) + O({p}^{})", self.val, terms.join(" + "), self.absolute_precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::modulus::hensel_lift_modulus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frobenius_fixes_base_and_has_order_n() {
        let m = hensel_lift_modulus(3, 2, 10).unwrap();
        let a = UnramifiedElem::from_i64(&m, 1234);
        assert!(a.frobenius().sub(&a).is_zero());
        let w = UnramifiedElem::generator(&m);
        let s = w.frobenius();
        assert!(!s.sub(&w).is_zero());
        assert!(s.frobenius().sub(&w).is_zero());
        // σ(ω) = ω^p and (ω^p)^(q-1) = 1
        assert!(s.sub(&w.pow(&BigUint::from(3u32))).is_zero());
        assert!(s.pow(&BigUint::from(8u32)).is_one());
    }

    #[test]
    fn teichmueller_lifts() {
        let m = hensel_lift_modulus(5, 1, 8).unwrap();
        let two = Fq::from_i64(&m, 2);
        let w = teichmueller(&two).unwrap();
        assert!(w.pow(&BigUint::from(4u32)).is_one());
        assert_eq!(w.residue().unwrap(), two);
        let four = teichmueller(&Fq::from_i64(&m, 4)).unwrap();
        assert!(w.mul(&w).sub(&four).is_zero());
        assert!(teichmueller(&Fq::from_i64(&m, 1)).unwrap().is_one());
        assert!(teichmueller(&Fq::from_i64(&m, 0)).is_err());
    }

    #[test]
    fn teichmueller_commutes_with_frobenius() {
        let m = hensel_lift_modulus(3, 2, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let c = UnramifiedElem::random_unit(&m, &mut rng).residue().unwrap();
            let lhs = teichmueller(&c).unwrap().frobenius();
            let rhs = teichmueller(&c.frobenius()).unwrap();
            assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn log_exp_basics() {
        let m = hensel_lift_modulus(5, 2, 10).unwrap();
        assert!(padic_log(&UnramifiedElem::one(&m)).unwrap().is_zero());
        assert!(padic_exp(&UnramifiedElem::zero(&m)).unwrap().is_one());
        assert!(padic_log(&UnramifiedElem::from_i64(&m, 2)).is_err());
        assert!(padic_exp(&UnramifiedElem::from_i64(&m, 2)).is_err());
        let one_p = UnramifiedElem::from_i64(&m, 6);
        let l1 = padic_log(&one_p).unwrap();
        let l2 = padic_log(&one_p.mul(&one_p)).unwrap();
        assert!(l2.sub(&l1.add(&l1)).is_zero());
        assert!(l2.absolute_precision() >= 10);
    }

    #[test]
    fn log_exp_p2_domain() {
        let m = hensel_lift_modulus(2, 2, 12).unwrap();
        assert!(padic_log(&UnramifiedElem::from_i64(&m, 3)).is_err());
        let x = UnramifiedElem::from_i64(&m, 5);
        let back = padic_exp(&padic_log(&x).unwrap()).unwrap();
        assert!(back.sub(&x).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let m = hensel_lift_modulus(3, 2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = UnramifiedElem::random_unit(&m, &mut rng).shift(-2);
        let j = serde_json::to_string(&x.to_json()).unwrap();
        let back = UnramifiedElem::from_json(&m, &serde_json::from_str(&j).unwrap()).unwrap();
        assert!(back.sub(&x).is_zero());
        assert_eq!(back.absolute_precision(), x.absolute_precision());
    }
}
