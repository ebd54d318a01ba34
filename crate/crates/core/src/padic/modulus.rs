use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::zpoly::{self, Poly};
use crate::{Error, Result};

/// Concrete model of `W(F_q)` as `(Z/p^N)[x]/(m)`, where `m` is the monic
/// Hensel lift of an irreducible factor of `x^(q-1) - 1` mod p.
///
/// The class of `x` is then a Teichmüller root of unity and Frobenius is
/// `x ↦ x^p` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnramifiedModulus {
    p: u64,
    n: usize,
    prec: u32,
    /// monic, degree n, coefficients in [0, p^prec)
    m: Poly,
    /// m mod p
    m_residue: Poly,
    /// frob[i] = x^(p·i) mod (m, p^prec), i < n
    frob: Vec<Poly>,
}

impl UnramifiedModulus {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// q = p^n
    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.n as u32)
    }

    pub fn polynomial(&self) -> &Poly {
        &self.m
    }

    pub fn residue_polynomial(&self) -> &Poly {
        &self.m_residue
    }

    pub(crate) fn frobenius_images(&self) -> &[Poly] {
        &self.frob
    }

    pub(crate) fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub(crate) fn p_pow(&self, k: u32) -> BigInt {
        BigInt::from(self.p).pow(k)
    }

    /// Reduce a polynomial modulo `(m, p^k)`, padded to length n.
    pub(crate) fn reduce(&self, a: &[BigInt], k: u32) -> Result<Vec<BigInt>> {
        let pk = self.p_pow(k);
        let m = zpoly::reduce(&self.m, &pk);
        let mut r = zpoly::rem(a, &m, &pk)?;
        r.resize(self.n, BigInt::zero());
        Ok(r)
    }
}

/// Build the canonical model of `W(F_q)` at absolute precision `prec`.
///
/// For n = 1 the modulus is `x - 1` (so `W(F_p) = Z_p` with basis {1}). For
/// n ≥ 2 the residue polynomial is the least monic irreducible of degree n
/// over `F_p`, ordering candidates by their coefficient tuple read from
/// `x^(n-1)` down to the constant term; every such polynomial divides
/// `x^(q-1) - 1`, which is checked anyway.
pub fn hensel_lift_modulus(p: u64, n: usize, prec: u32) -> Result<Arc<UnramifiedModulus>> {
    if !zpoly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if prec < 1 {
        return Err(Error::InvalidPrecision(prec));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let pb = BigInt::from(p);
    let q = BigUint::from(p).pow(n as u32);
    let q_minus_1 = &q - BigUint::one();

    let residue = if n == 1 {
        vec![BigInt::from(p - 1), BigInt::one()]
    } else {
        least_irreducible_factor(p, n, &q_minus_1)?
    };

    let m = lift_factor(&residue, p, prec, &q_minus_1)?;

    let pk = pb.pow(prec);
    let x: Poly = vec![BigInt::zero(), BigInt::one()];
    let xp = zpoly::powmod(&x, &BigUint::from(p), &m, &pk)?;
    let mut frob = Vec::with_capacity(n);
    let mut acc: Poly = vec![BigInt::one()];
    for _ in 0..n {
        let mut padded = acc.clone();
        padded.resize(n, BigInt::zero());
        frob.push(padded);
        acc = zpoly::mulmod(&acc, &xp, &m, &pk)?;
    }

    Ok(Arc::new(UnramifiedModulus { p, n, prec, m, m_residue: residue, frob }))
}

fn least_irreducible_factor(p: u64, n: usize, q_minus_1: &BigUint) -> Result<Poly> {
    let pb = BigInt::from(p);
    let x: Poly = vec![BigInt::zero(), BigInt::one()];
    let total = BigUint::from(p).pow(n as u32);
    let mut idx = BigUint::zero();
    while idx < total {
        // digits of idx in base p: most significant is the x^(n-1) coefficient
        let digits = idx.to_radix_le(p as u32);
        let mut f: Poly = vec![BigInt::zero(); n + 1];
        for (k, d) in digits.iter().enumerate() {
            f[k] = BigInt::from(*d);
        }
        f[n] = BigInt::one();
        idx += BigUint::one();
        if f[0].is_zero() {
            continue;
        }
        let r = zpoly::powmod(&x, q_minus_1, &f, &pb)?;
        if r != vec![BigInt::one()] {
            continue;
        }
        if is_irreducible_fp(&f, p)? {
            return Ok(f);
        }
    }
    Err(Error::Domain(format!("no irreducible polynomial of degree {n} over F_{p}")))
}

/// Irreducibility over F_p: no common factor with x^(p^d) - x for d ≤ n/2.
pub(crate) fn is_irreducible_fp(f: &[BigInt], p: u64) -> Result<bool> {
    let pb = BigInt::from(p);
    let n = zpoly::degree(f).unwrap_or(0);
    if n == 0 {
        return Ok(false);
    }
    let x: Poly = vec![BigInt::zero(), BigInt::one()];
    let mut xpd = x.clone();
    for _ in 1..=n / 2 {
        xpd = zpoly::powmod(&xpd, &BigUint::from(p), f, &pb)?;
        let h = zpoly::sub(&xpd, &x, &pb);
        let (g, _, _) = zpoly::ext_gcd_fp(f, &h, &pb)?;
        if zpoly::degree(&g) != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lift a monic factor `g` of `f = x^(q-1) - 1` over F_p to `Z/p^prec`.
///
/// With `f = g·h + r`, the correction solving `(g + δ) | f` one digit at a
/// time is `δ ≡ r · h^(-1) mod g`, and `h ≡ f'/g' mod (g, p)` because r
/// vanishes mod p. Only powers of x modulo `g` are needed, never the
/// degree-(q-1) polynomial itself.
fn lift_factor(residue: &[BigInt], p: u64, prec: u32, q_minus_1: &BigUint) -> Result<Poly> {
    let pb = BigInt::from(p);
    let x: Poly = vec![BigInt::zero(), BigInt::one()];
    let gbar = residue.to_vec();

    // f' = (q-1) x^(q-2)
    let qm1_mod_p = BigInt::from(q_minus_1 % BigUint::from(p));
    let f_prime = zpoly::scale(
        &zpoly::powmod(&x, &(q_minus_1 - BigUint::one()), &gbar, &pb)?,
        &qm1_mod_p,
        &pb,
    );
    let g_prime: Poly = zpoly::trim(
        gbar.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| zpoly::modp(&(c * BigInt::from(i)), &pb))
            .collect(),
    );
    let (_, g_prime_inv, _) = zpoly::ext_gcd_fp(&g_prime, &gbar, &pb)?;
    let hbar = zpoly::mulmod(&f_prime, &g_prime_inv, &gbar, &pb)?;
    let (gcd, hinv, _) = zpoly::ext_gcd_fp(&hbar, &gbar, &pb)?;
    if gcd != vec![BigInt::one()] {
        return Err(Error::Domain("factor is not coprime to its cofactor".into()));
    }

    let mut g = gbar.clone();
    for k in 1..prec {
        let pk1 = pb.pow(k + 1);
        let pk = pb.pow(k);
        let xq = zpoly::powmod(&x, q_minus_1, &g, &pk1)?;
        let r = zpoly::sub(&xq, &[BigInt::one()], &pk1);
        if r.iter().any(|c| !(c % &pk).is_zero()) {
            return Err(Error::Domain("Hensel invariant violated".into()));
        }
        let c: Poly = zpoly::reduce(&r.iter().map(|c| c / &pk).collect::<Vec<_>>(), &pb);
        let delta = zpoly::mulmod(&c, &hinv, &gbar, &pb)?;
        let shifted: Poly = delta.iter().map(|d| d * &pk).collect();
        g = zpoly::add(&g, &shifted, &pk1);
    }
    let pn = pb.pow(prec);
    let check = zpoly::powmod(&x, q_minus_1, &g, &pn)?;
    if zpoly::reduce(&check, &pn) != vec![BigInt::one()] {
        return Err(Error::Domain("lifted modulus does not divide x^(q-1) - 1".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Poly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Brute force: long-divide x^(q-1) - 1 by m over Z/p^N.
    fn divides_brute(m: &[BigInt], p: u64, n: usize, prec: u32) -> bool {
        let q = p.pow(n as u32) as usize;
        let mut f = vec![BigInt::zero(); q];
        f[0] = BigInt::from(-1);
        f[q - 1] = BigInt::one();
        let pk = BigInt::from(p).pow(prec);
        zpoly::divrem(&f, m, &pk).unwrap().1.is_empty()
    }

    #[test]
    fn degree_one_is_x_minus_one() {
        let m = hensel_lift_modulus(5, 1, 8).unwrap();
        let pk = BigInt::from(5).pow(8);
        assert_eq!(m.polynomial(), &vec![pk - 1, BigInt::one()]);
        assert!(divides_brute(m.polynomial(), 5, 1, 8));
    }

    #[test]
    fn p2_n2_lifts_x2_x_1() {
        let m = hensel_lift_modulus(2, 2, 4).unwrap();
        assert_eq!(m.residue_polynomial(), &ints(&[1, 1, 1]));
        assert!(divides_brute(m.polynomial(), 2, 2, 4));
        // over Z, x^2 + x + 1 already divides x^3 - 1
        assert_eq!(m.polynomial(), &ints(&[1, 1, 1]));
    }

    #[test]
    fn p3_n2_factor_of_x8_minus_1() {
        let m = hensel_lift_modulus(3, 2, 6).unwrap();
        assert_eq!(m.residue_polynomial(), &ints(&[1, 0, 1]));
        assert!(divides_brute(m.polynomial(), 3, 2, 6));
        assert!(is_irreducible_fp(m.residue_polynomial(), 3).unwrap());
    }

    #[test]
    fn higher_degrees_divide() {
        for &(p, n, prec) in &[(2u64, 3usize, 10u32), (5, 2, 7), (3, 3, 5), (7, 2, 4)] {
            let m = hensel_lift_modulus(p, n, prec).unwrap();
            assert!(divides_brute(m.polynomial(), p, n, prec), "p={p} n={n}");
            assert!(is_irreducible_fp(m.residue_polynomial(), p).unwrap());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(hensel_lift_modulus(6, 2, 4).unwrap_err(), Error::NotPrime(6));
        assert_eq!(hensel_lift_modulus(5, 2, 0).unwrap_err(), Error::InvalidPrecision(0));
    }
}
