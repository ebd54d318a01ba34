//! Integer and polynomial helpers over `Z/m` (dense, lowest degree first).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Poly = Vec<BigInt>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

pub fn inv_mod(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = modp(a, m).extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::NotUnit);
    }
    Ok(modp(&e.x, m))
}

/// Largest k with p^k | x, capped at `cap`; x == 0 returns `cap`.
pub fn valuation_capped(x: &BigInt, p: &BigInt, cap: u32) -> u32 {
    if x.is_zero() {
        return cap;
    }
    let mut v = 0;
    let mut m = x.clone();
    while v < cap && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

pub fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn reduce(a: &[BigInt], m: &BigInt) -> Poly {
    trim(a.iter().map(|c| modp(c, m)).collect())
}

pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim(
        (0..n)
            .map(|i| modp(&(a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)), m))
            .collect(),
    )
}

pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim(
        (0..n)
            .map(|i| modp(&(a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)), m))
            .collect(),
    )
}

pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

pub fn scale(a: &[BigInt], s: &BigInt, m: &BigInt) -> Poly {
    trim(a.iter().map(|c| modp(&(c * s), m)).collect())
}

/// Division by a polynomial whose leading coefficient is a unit mod `m`.
pub fn divrem(a: &[BigInt], g: &[BigInt], m: &BigInt) -> Result<(Poly, Poly)> {
    let g = reduce(g, m);
    let dg = degree(&g).ok_or(Error::DivisionByZero)?;
    let lead_inv = inv_mod(&g[dg], m)?;
    let mut r = reduce(a, m);
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(dg).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = modp(&(&r[dr] * &lead_inv), m);
        let shift = dr - dg;
        q[shift] = c.clone();
        for (i, gi) in g.iter().enumerate() {
            r[i + shift] = modp(&(&r[i + shift] - &c * gi), m);
        }
        r = trim(r);
    }
    Ok((trim(q), trim(r)))
}

pub fn rem(a: &[BigInt], g: &[BigInt], m: &BigInt) -> Result<Poly> {
    Ok(divrem(a, g, m)?.1)
}

pub fn mulmod(a: &[BigInt], b: &[BigInt], g: &[BigInt], m: &BigInt) -> Result<Poly> {
    rem(&mul(a, b, m), g, m)
}

pub fn powmod(base: &[BigInt], exp: &BigUint, g: &[BigInt], m: &BigInt) -> Result<Poly> {
    let mut result: Poly = rem(&[BigInt::one()], g, m)?;
    let mut b = rem(base, g, m)?;
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = mulmod(&result, &b, g, m)?;
        }
        if i + 1 < bits {
            b = mulmod(&b, &b, g, m)?;
        }
    }
    Ok(result)
}

/// Extended Euclid over the field `F_p`: returns (g, s, t) with s·a + t·b = g,
/// g monic.
pub fn ext_gcd_fp(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Result<(Poly, Poly, Poly)> {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1): (Poly, Poly) = (vec![BigInt::one()], Vec::new());
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![BigInt::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1, p)?;
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let d = degree(&r0).ok_or(Error::DivisionByZero)?;
    let lc = inv_mod(&r0[d], p)?;
    Ok((scale(&r0, &lc, p), scale(&s0, &lc, p), scale(&t0, &lc, p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn division_with_remainder() {
        let m = BigInt::from(7);
        // x^3 + 2x + 5 = (x^2 + x + 3)(x - 1) + 8  ->  remainder 1 mod 7
        let (q, r) = divrem(&p(&[5, 2, 0, 1]), &p(&[-1, 1]), &m).unwrap();
        assert_eq!(q, p(&[3, 1, 1]));
        assert_eq!(r, p(&[1]));
    }

    #[test]
    fn bezout_over_fp() {
        let m = BigInt::from(3);
        let a = p(&[1, 0, 1]); // x^2 + 1, irreducible mod 3
        let b = p(&[1, 1]);
        let (g, s, t) = ext_gcd_fp(&a, &b, &m).unwrap();
        assert_eq!(g, p(&[1]));
        let lhs = add(&mul(&s, &a, &m), &mul(&t, &b, &m), &m);
        assert_eq!(lhs, p(&[1]));
    }
}
