use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::modulus::UnramifiedModulus;
use super::zpoly::{self, Poly};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Element of the residue field `F_q = F_p[x]/(m mod p)`.
#[derive(Clone)]
pub struct Fq {
    modulus: Arc<UnramifiedModulus>,
    /// length n, entries in [0, p)
    coeffs: Vec<BigInt>,
}

impl Fq {
    pub fn new(modulus: &Arc<UnramifiedModulus>, coeffs: &[BigInt]) -> Result<Self> {
        let p = modulus.p_big();
        let r = zpoly::rem(coeffs, modulus.residue_polynomial(), &p)?;
        Ok(Self::from_reduced(modulus, r))
    }

    fn from_reduced(modulus: &Arc<UnramifiedModulus>, mut r: Poly) -> Self {
        r.resize(modulus.degree(), BigInt::zero());
        Fq { modulus: Arc::clone(modulus), coeffs: r }
    }

    pub fn from_i64(modulus: &Arc<UnramifiedModulus>, k: i64) -> Self {
        Self::new(modulus, &[BigInt::from(k)]).expect("residue polynomial is monic")
    }

    /// The class of x, i.e. the residue of the Teichmüller generator.
    pub fn generator(modulus: &Arc<UnramifiedModulus>) -> Self {
        Self::new(modulus, &[BigInt::zero(), BigInt::one()]).expect("monic modulus")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Arc<UnramifiedModulus> {
        &self.modulus
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        let p = self.modulus.p_big();
        let r = zpoly::powmod(&self.coeffs, e, self.modulus.residue_polynomial(), &p)
            .expect("monic modulus");
        Self::from_reduced(&self.modulus, r)
    }

    /// Absolute Frobenius `c ↦ c^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(&BigUint::from(self.modulus.prime()))
    }

    fn lift(&self, r: Poly) -> Self {
        Self::from_reduced(&self.modulus, r)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Fq {}

impl Scalar for Fq {
    fn zero_like(&self) -> Self {
        self.lift(Vec::new())
    }
    fn one_like(&self) -> Self {
        Self::from_i64(&self.modulus, 1)
    }
    fn int_like(&self, k: i64) -> Self {
        Self::from_i64(&self.modulus, k)
    }
    fn add(&self, other: &Self) -> Self {
        self.lift(zpoly::add(&self.coeffs, &other.coeffs, &self.modulus.p_big()))
    }
    fn sub(&self, other: &Self) -> Self {
        self.lift(zpoly::sub(&self.coeffs, &other.coeffs, &self.modulus.p_big()))
    }
    fn mul(&self, other: &Self) -> Self {
        let p = self.modulus.p_big();
        let r = zpoly::mulmod(&self.coeffs, &other.coeffs, self.modulus.residue_polynomial(), &p)
            .expect("monic modulus");
        self.lift(r)
    }
    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
    fn inv(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let p = self.modulus.p_big();
        let (g, s, _) = zpoly::ext_gcd_fp(&self.coeffs, self.modulus.residue_polynomial(), &p)?;
        if g != vec![BigInt::one()] {
            return Err(Error::NotUnit);
        }
        Ok(self.lift(zpoly::rem(&s, self.modulus.residue_polynomial(), &p)?))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn is_exact(&self) -> bool {
        true
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{i}"),
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
    use crate::padic::modulus::hensel_lift_modulus;

    #[test]
    fn residue_field_has_order_q() {
        let m = hensel_lift_modulus(3, 2, 2).unwrap();
        let w = Fq::generator(&m);
        // the multiplicative group has order 8
        assert!(w.pow(&BigUint::from(8u32)).is_one());
        let inv = w.inv().unwrap();
        assert!(w.mul(&inv).is_one());
        // Frobenius has order n
        assert_eq!(w.frobenius().frobenius(), w);
        assert_ne!(w.frobenius(), w);
    }
}
