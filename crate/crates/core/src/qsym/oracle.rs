//! Brute-force model of QSym: expand `M_I` as an honest polynomial in six
//! commuting variables. Injective on compositions of length ≤ 6, which covers
//! every degree ≤ 6.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Composition, QSymElem};
use crate::Rational;

pub const VARS: usize = 6;

pub type Poly6 = BTreeMap<[u8; VARS], Rational>;

/// `M_I(x_1, …, x_6) = Σ_{i_1 > … > i_k} x_{i_1}^{a_1} ⋯ x_{i_k}^{a_k}`.
pub fn expand_monomial(i: &Composition) -> Poly6 {
    let mut out = Poly6::new();
    let k = i.len();
    if k > VARS {
        return out;
    }
    // choose k indices out of 6, listed in decreasing order
    for mask in 0u32..1 << VARS {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut exps = [0u8; VARS];
        let idx = (0..VARS).rev().filter(|b| mask >> b & 1 == 1);
        for (&a, var) in i.parts().iter().zip(idx) {
            exps[var] = a as u8;
        }
        *out.entry(exps).or_insert_with(Rational::zero) += Rational::from_integer(1.into());
    }
    out
}

pub fn expand(x: &QSymElem) -> Poly6 {
    let mut out = Poly6::new();
    for (i, c) in x.terms() {
        for (e, v) in expand_monomial(i) {
            *out.entry(e).or_insert_with(Rational::zero) += c * v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn poly_mul(a: &Poly6, b: &Poly6) -> Poly6 {
    let mut out = Poly6::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = [0u8; VARS];
            for k in 0..VARS {
                e[k] = ea[k] + eb[k];
            }
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Checks `expand(x·y) = expand(x)·expand(y)`.
pub fn product_agrees(x: &QSymElem, y: &QSymElem) -> bool {
    expand(&x.mul(y)) == poly_mul(&expand(x), &expand(y))
}
