//! The maximal order `o_D = W(F_q)⟨F⟩/(F^n − p)` of the central division
//! algebra of invariant 1/n, and the semidirect product `W(F_q)^× ⋉ Z`.
//!
//! Elements are kept in the normal form `Σ_{i<n} a_i F^i` with F on the
//! right, using `F a = σ(a) F` and `F^n = p`. Coefficients may have negative
//! valuation, which gives all of D.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::Rng;

use crate::padic::{teichmueller, Fq, UnramifiedElem, UnramifiedModulus};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone)]
pub struct ODElem {
    modulus: Arc<UnramifiedModulus>,
    coeffs: Vec<UnramifiedElem>,
}

fn same(a: &Arc<UnramifiedModulus>, b: &Arc<UnramifiedModulus>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ODElem {
    pub fn new(modulus: &Arc<UnramifiedModulus>, coeffs: Vec<UnramifiedElem>) -> Result<Self> {
        if coeffs.len() != modulus.degree() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                modulus.degree(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !same(c.modulus(), modulus)) {
            return Err(Error::ModulusMismatch);
        }
        Ok(ODElem { modulus: Arc::clone(modulus), coeffs })
    }

    pub fn zero(modulus: &Arc<UnramifiedModulus>) -> Self {
        ODElem { modulus: Arc::clone(modulus), coeffs: vec![UnramifiedElem::zero(modulus); modulus.degree()] }
    }

    pub fn one(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::from_scalar(&UnramifiedElem::one(modulus))
    }

    /// `a` as the element `a·F^0`.
    pub fn from_scalar(a: &UnramifiedElem) -> Self {
        Self::monomial(a, 0)
    }

    /// `a·F^k` for any integer k, reduced with `F^n = p`.
    pub fn monomial(a: &UnramifiedElem, k: i64) -> Self {
        let m = a.modulus();
        let n = m.degree() as i64;
        let mut out = Self::zero(m);
        out.coeffs[k.rem_euclid(n) as usize] = a.shift(k.div_euclid(n));
        out
    }

    /// The uniformizer F.
    pub fn frobenius_generator(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::monomial(&UnramifiedElem::one(modulus), 1)
    }

    /// `F^(-1) = p^(-1) F^(n-1)`.
    pub fn frobenius_generator_inverse(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::monomial(&UnramifiedElem::one(modulus), -1)
    }

    pub fn modulus(&self) -> &Arc<UnramifiedModulus> {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[UnramifiedElem] {
        &self.coeffs
    }

    pub fn random_integral<R: Rng + ?Sized>(modulus: &Arc<UnramifiedModulus>, rng: &mut R) -> Self {
        let coeffs = (0..modulus.degree()).map(|_| UnramifiedElem::random_integral(modulus, rng)).collect();
        ODElem { modulus: Arc::clone(modulus), coeffs }
    }

    pub fn random_unit<R: Rng + ?Sized>(modulus: &Arc<UnramifiedModulus>, rng: &mut R) -> Self {
        let mut x = Self::random_integral(modulus, rng);
        x.coeffs[0] = UnramifiedElem::random_unit(modulus, rng);
        x
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same(&self.modulus, &other.modulus) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(ODElem { modulus: Arc::clone(&self.modulus), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ODElem { modulus: Arc::clone(&self.modulus), coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    /// `Σ a_i σ^i(b_j) p^⌊(i+j)/n⌋ F^((i+j) mod n)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.modulus.degree();
        let mut out = Self::zero(&self.modulus);
        let mut twisted = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(UnramifiedElem::frobenius).collect();
            }
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                let k = i + j;
                let term = a.mul(b).shift((k / n) as i64);
                out.coeffs[k % n] = out.coeffs[k % n].add(&term);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.modulus);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The p-order `min_i (i/n + v(a_i))`; `None` for zero.
    pub fn valuation(&self) -> Option<Ratio<i64>> {
        let n = self.modulus.degree() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| Ratio::new(a.valuation().expect("nonzero") * n + i as i64, n))
            .min()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_ok_and(|d| d.is_zero())
    }

    /// Two-sided inverse of a unit of `o_D` by Newton iteration
    /// `y ← y(2 − xy)`, starting from the inverse of `a_0`.
    pub fn inverse(&self) -> Result<Self> {
        if self.valuation() != Some(Ratio::from_integer(0)) {
            return Err(Error::NotUnit);
        }
        let one = Self::one(&self.modulus);
        let two = Self::from_scalar(&UnramifiedElem::from_i64(&self.modulus, 2));
        let mut y = Self::from_scalar(&self.coeffs[0].inv()?);
        // the error v(1 − xy) starts at ≥ 1/n and doubles each step
        let target = self.coeffs.iter().map(|a| a.absolute_precision()).min().unwrap_or(0).max(1);
        let steps = 2 + (64 - ((target as u64) * self.modulus.degree() as u64).leading_zeros());
        for _ in 0..steps {
            let xy = self.mul(&y)?;
            if one.sub(&xy)?.is_zero() {
                return Ok(y);
            }
            y = y.mul(&two.sub(&xy)?)?;
        }
        if one.sub(&self.mul(&y)?)?.is_zero() {
            Ok(y)
        } else {
            Err(Error::NonConvergence(steps as usize))
        }
    }

    /// Fewest absolute digits carried by any coefficient.
    pub fn absolute_precision(&self) -> i64 {
        self.coeffs.iter().map(UnramifiedElem::absolute_precision).min().unwrap_or(i64::MAX)
    }
}

/// `F·a·F^(-1)`, computed in D; equals `σ(a)`.
pub fn conj_by_f(a: &UnramifiedElem) -> Result<ODElem> {
    let m = a.modulus();
    ODElem::frobenius_generator(m).mul(&ODElem::from_scalar(a))?.mul(&ODElem::frobenius_generator_inverse(m))
}

/// x lies in the center iff it commutes with F and with the Teichmüller
/// generator ω (which together generate D over Q_p).
pub fn center_check(x: &ODElem) -> Result<bool> {
    let m = x.modulus();
    let f = ODElem::frobenius_generator(m);
    let omega = ODElem::from_scalar(&teichmueller(&Fq::generator(m))?);
    Ok(x.mul(&f)?.eq_at_precision(&f.mul(x)?) && x.mul(&omega)?.eq_at_precision(&omega.mul(x)?))
}

/// `(a, m) ∈ W(F_q)^× ⋉ Z`, where the integer acts by σ.
#[derive(Clone, Debug)]
pub struct WeilElem {
    pub a: UnramifiedElem,
    pub m: i64,
}

impl WeilElem {
    pub fn new(a: UnramifiedElem, m: i64) -> Result<Self> {
        if a.valuation() != Some(0) {
            return Err(Error::NotUnit);
        }
        Ok(WeilElem { a, m })
    }

    pub fn identity(modulus: &Arc<UnramifiedModulus>) -> Self {
        WeilElem { a: UnramifiedElem::one(modulus), m: 0 }
    }

    pub fn random<R: Rng + ?Sized>(modulus: &Arc<UnramifiedModulus>, max_shift: i64, rng: &mut R) -> Self {
        WeilElem { a: UnramifiedElem::random_unit(modulus, rng), m: rng.gen_range(-max_shift..=max_shift) }
    }

    /// `(a, m)(b, k) = (a·σ^m(b), m + k)`.
    pub fn mul(&self, other: &Self) -> Self {
        WeilElem { a: self.a.mul(&other.a.frobenius_pow(self.m)), m: self.m + other.m }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(WeilElem { a: self.a.inv()?.frobenius_pow(-self.m), m: -self.m })
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.m == other.m && self.a.sub(&other.a).is_zero()
    }

    /// `a·F^m ∈ D^×`.
    pub fn embed(&self) -> ODElem {
        ODElem::monomial(&self.a, self.m)
    }
}

impl fmt::Debug for ODElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ODElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_exact_zero())
            .map(|(i, a)| match i {
                0 => format!("[{a}]"),
                1 => format!("[{a}]*F"),
                _ => format!("[{a}]*F^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::hensel_lift_modulus;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn omega(m: &Arc<UnramifiedModulus>) -> UnramifiedElem {
        teichmueller(&Fq::generator(m)).unwrap()
    }

    #[test]
    fn defining_relations() {
        for &(p, n) in &[(2u64, 2usize), (3, 2), (2, 3), (5, 1)] {
            let m = hensel_lift_modulus(p, n, 10).unwrap();
            let f = ODElem::frobenius_generator(&m);
            let pe = ODElem::from_scalar(&UnramifiedElem::from_i64(&m, p as i64));
            assert!(f.pow(n as u32).unwrap().eq_at_precision(&pe));
            assert!(f.mul(&f.pow(n as u32 - 1).unwrap()).unwrap().eq_at_precision(&pe));
            let w = omega(&m);
            let wp = w.pow(&BigUint::from(p));
            let lhs = f.mul(&ODElem::from_scalar(&w)).unwrap();
            let rhs = ODElem::from_scalar(&wp).mul(&f).unwrap();
            assert!(lhs.eq_at_precision(&rhs));
            assert_eq!(f.valuation(), Some(Ratio::new(1, n as i64)));
            assert_eq!(pe.mul(&f).unwrap().valuation(), Some(Ratio::new(n as i64 + 1, n as i64)));
            assert!(f.mul(&ODElem::frobenius_generator_inverse(&m)).unwrap().eq_at_precision(&ODElem::one(&m)));
        }
    }

    #[test]
    fn inverse_examples() {
        let m = hensel_lift_modulus(3, 2, 8).unwrap();
        let one = ODElem::one(&m);
        assert!(one.inverse().unwrap().eq_at_precision(&one));
        let w = omega(&m);
        let winv = ODElem::from_scalar(&w).inverse().unwrap();
        assert!(winv.eq_at_precision(&ODElem::from_scalar(&w.pow(&BigUint::from(7u32)))));
        let f = ODElem::frobenius_generator(&m);
        assert_eq!(f.inverse().unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn random_units_invert_on_both_sides() {
        let m = hensel_lift_modulus(2, 3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let one = ODElem::one(&m);
        for _ in 0..20 {
            let x = ODElem::random_unit(&m, &mut rng);
            let y = x.inverse().unwrap();
            assert!(x.mul(&y).unwrap().eq_at_precision(&one));
            assert!(y.mul(&x).unwrap().eq_at_precision(&one));
            assert!(x.mul(&y).unwrap().absolute_precision() >= 10);
        }
    }

    #[test]
    fn conjugation_is_frobenius() {
        let m = hensel_lift_modulus(3, 3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = UnramifiedElem::from_i64(&m, 7);
        assert!(conj_by_f(&z).unwrap().eq_at_precision(&ODElem::from_scalar(&z)));
        let w = omega(&m);
        assert!(conj_by_f(&w).unwrap().eq_at_precision(&ODElem::from_scalar(&w.pow(&BigUint::from(3u32)))));
        for _ in 0..10 {
            let a = UnramifiedElem::random_unit(&m, &mut rng);
            let c = conj_by_f(&a).unwrap();
            assert!(c.eq_at_precision(&ODElem::from_scalar(&a.frobenius())));
            assert!(c.absolute_precision() >= 7);
        }
    }

    #[test]
    fn weil_group() {
        let m = hensel_lift_modulus(2, 2, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let id = WeilElem::identity(&m);
        assert!(id.embed().eq_at_precision(&ODElem::one(&m)));
        for _ in 0..10 {
            let x = WeilElem::random(&m, 5, &mut rng);
            let y = WeilElem::random(&m, 5, &mut rng);
            let lhs = x.embed().mul(&y.embed()).unwrap();
            assert!(lhs.eq_at_precision(&x.mul(&y).embed()));
            assert!(x.mul(&x.inverse().unwrap()).eq_at_precision(&id));
            // n·v is the Z-component
            assert_eq!(x.embed().valuation().unwrap() * 2, Ratio::from_integer(x.m));
        }
        // (a, n)(b, 0): σ^n = id, so F^n contributes only p
        let a = UnramifiedElem::random_unit(&m, &mut rng);
        let b = UnramifiedElem::random_unit(&m, &mut rng);
        let prod = WeilElem::new(a.clone(), 2).unwrap().mul(&WeilElem::new(b.clone(), 0).unwrap());
        assert!(prod.a.sub(&a.mul(&b)).is_zero());
        assert!(prod.embed().eq_at_precision(&ODElem::from_scalar(&a.mul(&b).shift(1))));
    }

    #[test]
    fn center() {
        let m = hensel_lift_modulus(3, 2, 8).unwrap();
        assert!(center_check(&ODElem::from_scalar(&UnramifiedElem::from_i64(&m, 3))).unwrap());
        assert!(!center_check(&ODElem::from_scalar(&omega(&m))).unwrap());
        assert!(!center_check(&ODElem::frobenius_generator(&m)).unwrap());
        let m1 = hensel_lift_modulus(3, 1, 8).unwrap();
        assert!(center_check(&ODElem::frobenius_generator(&m1)).unwrap());
    }
}
