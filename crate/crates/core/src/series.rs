//! Truncated formal power series in one and two variables over any
//! [`Scalar`] ring.
//!
//! A series of truncation `D` stores the dense coefficients `c_0..c_D`; binary
//! operations work at the smaller truncation of their operands.

use std::fmt;

use crate::scalar::Scalar;
use crate::{Error, Rational, Result};

pub const DEFAULT_TRUNCATION: usize = 16;

#[derive(Clone, Debug)]
pub struct UniSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniSeries<S> {
    /// `coeffs` must be nonempty; its length fixes the truncation.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        UniSeries { coeffs }
    }

    /// Pad or cut `coeffs` to degree `trunc`, using `template` for zeros.
    pub fn from_coeffs(template: &S, mut coeffs: Vec<S>, trunc: usize) -> Self {
        coeffs.truncate(trunc + 1);
        coeffs.resize(trunc + 1, template.zero_like());
        UniSeries { coeffs }
    }

    pub fn zero(template: &S, trunc: usize) -> Self {
        Self::from_coeffs(template, Vec::new(), trunc)
    }

    pub fn constant(c: S, trunc: usize) -> Self {
        let t = c.clone();
        Self::from_coeffs(&t, vec![c], trunc)
    }

    /// The series `t`.
    pub fn identity(template: &S, trunc: usize) -> Self {
        Self::monomial(template.one_like(), 1, trunc)
    }

    pub fn monomial(c: S, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero(&c, trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    fn template(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        Self::from_coeffs(self.template(), self.coeffs.clone(), trunc)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UniSeries<T> {
        UniSeries::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<UniSeries<T>> {
        Ok(UniSeries::new(self.coeffs.iter().map(f).collect::<Result<_>>()?))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.trunc().min(other.trunc());
        UniSeries::new((0..=d).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.trunc().min(other.trunc());
        UniSeries::new((0..=d).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect())
    }

    pub fn neg(&self) -> Self {
        UniSeries::new(self.coeffs.iter().map(Scalar::neg).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        UniSeries::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.trunc().min(other.trunc());
        let mut out = vec![self.template().zero_like(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniSeries::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.template().one_like(), self.trunc());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inv()?;
        let d = self.trunc();
        let mut out = vec![inv0.clone()];
        for k in 1..=d {
            let mut s = self.template().zero_like();
            for j in 1..=k {
                s = s.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(s.mul(&inv0).neg());
        }
        Ok(UniSeries::new(out))
    }

    /// `f(t^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        let d = self.trunc();
        let mut out = Self::zero(self.template(), d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k <= d {
                out.coeffs[i * k] = c.clone();
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let d = self.trunc();
        let mut out: Vec<S> = (1..=d).map(|k| self.coeffs[k].mul_int(k as i64)).collect();
        out.push(self.template().zero_like());
        UniSeries::new(out)
    }

    /// Coefficientwise equality at the common truncation (for inexact rings:
    /// the difference is zero at the carried precision).
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).coeffs.iter().all(Scalar::is_zero)
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coeffs[0].is_zero()
    }
}

/// `g(h(t))` by Horner evaluation in the truncated ring.
pub fn compose<S: Scalar>(g: &UniSeries<S>, h: &UniSeries<S>) -> Result<UniSeries<S>> {
    if !h.has_zero_constant() {
        return Err(Error::NonZeroConstantTerm);
    }
    let d = g.trunc().min(h.trunc());
    let h = h.truncate(d);
    let mut acc = UniSeries::constant(g.coeffs[d].clone(), d);
    for k in (0..d).rev() {
        acc = acc.mul(&h);
        acc.coeffs[0] = acc.coeffs[0].add(&g.coeffs[k]);
    }
    Ok(acc)
}

/// Compositional inverse by degreewise triangular solve: the coefficient of
/// `t^d` in `h(ḡ)` is `h_1·ḡ_d` plus terms involving only `ḡ_1..ḡ_{d-1}`.
pub fn revert<S: Scalar>(h: &UniSeries<S>) -> Result<UniSeries<S>> {
    if !h.has_zero_constant() {
        return Err(Error::NonZeroConstantTerm);
    }
    let d = h.trunc();
    if d == 0 {
        return Ok(h.clone());
    }
    let inv1 = h.coeffs[1].inv().map_err(|_| Error::NonInvertibleLinear)?;
    let mut g = UniSeries::monomial(inv1.clone(), 1, d);
    for k in 2..=d {
        let partial = compose(&h.truncate(k), &g.truncate(k))?;
        g.coeffs[k] = partial.coeffs[k].mul(&inv1).neg();
    }
    Ok(g)
}

/// Lagrange inversion `[t^k] ḡ = (1/k)·[t^(k-1)] (t/h(t))^k`; an independent
/// route to [`revert`] over rings where k is invertible.
pub fn revert_lagrange<S: Scalar>(h: &UniSeries<S>) -> Result<UniSeries<S>> {
    if !h.has_zero_constant() {
        return Err(Error::NonZeroConstantTerm);
    }
    let d = h.trunc();
    if h.coeffs.get(1).is_none_or(Scalar::is_zero) {
        return Err(Error::NonInvertibleLinear);
    }
    // h(t)/t, truncated to degree d-1
    let shifted = UniSeries::from_coeffs(h.template(), h.coeffs[1..].to_vec(), d.saturating_sub(1));
    let phi = shifted.recip()?;
    let mut out = UniSeries::zero(h.template(), d);
    let mut power = UniSeries::constant(h.template().one_like(), phi.trunc());
    for k in 1..=d {
        power = power.mul(&phi);
        let kinv = h.template().int_like(k as i64).inv()?;
        out.coeffs[k] = power.coeffs[k - 1].mul(&kinv);
    }
    Ok(out)
}

/// The translated derivative `g'(h(t))`.
pub fn derivative_cocycle<S: Scalar>(g: &UniSeries<S>, h: &UniSeries<S>) -> Result<UniSeries<S>> {
    compose(&g.derivative(), h)
}

/// Bivariate series truncated by total degree: `coeffs[i][j]` is the
/// coefficient of `X^i Y^j`, `i + j ≤ D`.
#[derive(Clone, Debug)]
pub struct BiSeries<S> {
    trunc: usize,
    coeffs: Vec<Vec<S>>,
}

impl<S: Scalar> BiSeries<S> {
    pub fn zero(template: &S, trunc: usize) -> Self {
        let coeffs = (0..=trunc).map(|i| vec![template.zero_like(); trunc - i + 1]).collect();
        BiSeries { trunc, coeffs }
    }

    /// `f(X)`
    pub fn from_x(f: &UniSeries<S>) -> Self {
        let mut out = Self::zero(f.template(), f.trunc());
        for (i, c) in f.coeffs.iter().enumerate() {
            out.coeffs[i][0] = c.clone();
        }
        out
    }

    /// `f(Y)`
    pub fn from_y(f: &UniSeries<S>) -> Self {
        let mut out = Self::zero(f.template(), f.trunc());
        for (j, c) in f.coeffs.iter().enumerate() {
            out.coeffs[0][j] = c.clone();
        }
        out
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, i: usize, j: usize) -> &S {
        &self.coeffs[i][j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: S) {
        self.coeffs[i][j] = c;
    }

    /// `(i, j, c_ij)` over all stored coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, c)| (i, j, c)))
    }

    fn template(&self) -> &S {
        &self.coeffs[0][0]
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        let mut out = Self::zero(self.template(), trunc);
        for (i, j, c) in self.terms() {
            if i + j <= trunc {
                out.coeffs[i][j] = c.clone();
            }
        }
        out
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let d = self.trunc.min(other.trunc);
        let coeffs = (0..=d)
            .map(|i| (0..=d - i).map(|j| f(&self.coeffs[i][j], &other.coeffs[i][j])).collect())
            .collect();
        BiSeries { trunc: d, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|row| row.iter().map(|c| c.mul(s)).collect()).collect();
        BiSeries { trunc: self.trunc, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.template(), d);
        for (i1, j1, a) in self.terms() {
            if i1 + j1 > d || (a.is_zero() && a.is_exact()) {
                continue;
            }
            for (i2, j2, b) in other.terms() {
                if i1 + j1 + i2 + j2 > d {
                    continue;
                }
                let slot = &mut out.coeffs[i1 + i2][j1 + j2];
                *slot = slot.add(&a.mul(b));
            }
        }
        out
    }

    /// `F(Y, X)`
    pub fn swap(&self) -> Self {
        let mut out = Self::zero(self.template(), self.trunc);
        for (i, j, c) in self.terms() {
            out.coeffs[j][i] = c.clone();
        }
        out
    }

    /// `F(X, 0)`
    pub fn restrict_x(&self) -> UniSeries<S> {
        UniSeries::new(self.coeffs.iter().map(|row| row[0].clone()).collect())
    }

    /// `F(0, Y)`
    pub fn restrict_y(&self) -> UniSeries<S> {
        UniSeries::new(self.coeffs[0].clone())
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).terms().all(|(_, _, c)| c.is_zero())
    }
}

/// `g(H(X, Y))` for a bivariate `H` without constant term.
pub fn compose_bi<S: Scalar>(g: &UniSeries<S>, h: &BiSeries<S>) -> Result<BiSeries<S>> {
    if !h.coeffs[0][0].is_zero() {
        return Err(Error::NonZeroConstantTerm);
    }
    let d = g.trunc().min(h.trunc);
    let h = h.truncate(d);
    let mut acc = BiSeries::zero(g.template(), d);
    acc.coeffs[0][0] = g.coeffs[d].clone();
    for k in (0..d).rev() {
        acc = acc.mul(&h);
        acc.coeffs[0][0] = acc.coeffs[0][0].add(&g.coeffs[k]);
    }
    Ok(acc)
}

/// `F(a(t), b(t))` for series `a`, `b` without constant terms.
pub fn bi_substitute<S: Scalar>(f: &BiSeries<S>, a: &UniSeries<S>, b: &UniSeries<S>) -> Result<UniSeries<S>> {
    if !a.has_zero_constant() || !b.has_zero_constant() {
        return Err(Error::NonZeroConstantTerm);
    }
    let d = f.trunc.min(a.trunc()).min(b.trunc());
    let a = a.truncate(d);
    let b = b.truncate(d);
    let one = UniSeries::constant(f.template().one_like(), d);
    let mut bpow = vec![one];
    for k in 1..=d {
        bpow.push(bpow[k - 1].mul(&b));
    }
    // Horner in a over the rows Σ_j c_ij b^j
    let mut out = UniSeries::zero(f.template(), d);
    for i in (0..=d).rev() {
        let mut row = UniSeries::zero(f.template(), d);
        for (j, c) in f.coeffs[i].iter().enumerate().take(d - i + 1) {
            if !(c.is_zero() && c.is_exact()) {
                row = row.add(&bpow[j].scale(c));
            }
        }
        out = out.mul(&a).add(&row);
    }
    Ok(out)
}

fn render_term(c: &str, var: &str, k: usize) -> String {
    let mono = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    match (c, k) {
        (c, 0) => c.to_string(),
        ("1", _) => mono,
        ("-1", _) => format!("-{mono}"),
        (c, _) if c.contains(['+', ' ']) || c[1..].contains('-') => format!("({c})*{mono}"),
        (c, _) => format!("{c}*{mono}"),
    }
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

impl fmt::Display for UniSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Scalar::is_zero(*c))
            .map(|(k, c)| render_term(&c.to_string(), "t", k))
            .collect();
        write!(f, "{} + O(t^{})", join_terms(terms), self.trunc() + 1)
    }
}

impl fmt::Display for BiSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for total in 0..=self.trunc {
            for i in (0..=total).rev() {
                let j = total - i;
                let c = &self.coeffs[i][j];
                if Scalar::is_zero(c) {
                    continue;
                }
                let mono = match (i, j) {
                    (0, 0) => String::new(),
                    _ => {
                        let x = render_term("1", "X", i);
                        let y = render_term("1", "Y", j);
                        [x, y].into_iter().filter(|s| !s.is_empty() && s != "1").collect::<Vec<_>>().join("*")
                    }
                };
                terms.push(match (c.to_string().as_str(), mono.is_empty()) {
                    (s, true) => s.to_string(),
                    ("1", false) => mono,
                    ("-1", false) => format!("-{mono}"),
                    (s, false) => format!("{s}*{mono}"),
                });
            }
        }
        write!(f, "{} + O({})", join_terms(terms), self.trunc + 1)
    }
}

/// Coefficients as exact decimal/fraction strings, lowest degree first.
pub fn to_json_array(s: &UniSeries<Rational>) -> serde_json::Value {
    serde_json::Value::Array(s.coeffs.iter().map(|c| c.to_string().into()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn q(cs: &[i64]) -> UniSeries<Rational> {
        UniSeries::new(cs.iter().map(|&c| int(c)).collect())
    }

    fn qs(cs: &[(i64, i64)]) -> UniSeries<Rational> {
        UniSeries::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    /// Brute-force power-series composition by expanding each power of h
    /// through plain convolution, independent of the Horner path.
    fn compose_brute(g: &UniSeries<Rational>, h: &UniSeries<Rational>) -> Vec<Rational> {
        let d = g.trunc().min(h.trunc());
        let mut out = vec![int(0); d + 1];
        let mut power = vec![int(0); d + 1];
        power[0] = int(1);
        for k in 0..=d {
            for i in 0..=d {
                out[i] += &g.coeffs()[k] * &power[i];
            }
            let mut next = vec![int(0); d + 1];
            for i in 0..=d {
                for j in 0..=d - i {
                    next[i + j] += &power[i] * &h.coeffs()[j];
                }
            }
            power = next;
        }
        out
    }

    #[test]
    fn compose_small_example() {
        let g = q(&[0, 1, 1, 0, 0]);
        let h = q(&[0, 1, 0, 1, 0]);
        assert_eq!(compose(&g, &h).unwrap().coeffs(), q(&[0, 1, 1, 1, 2]).coeffs());
        assert_eq!(compose_brute(&g, &h), q(&[0, 1, 1, 1, 2]).coeffs().to_vec());
    }

    #[test]
    fn compose_identity_and_errors() {
        let f = q(&[0, 2, -1, 5, 3]);
        let id = UniSeries::identity(&int(0), 4);
        assert!(compose(&id, &f).unwrap().eq_at_precision(&f));
        assert!(compose(&f, &id).unwrap().eq_at_precision(&f));
        assert_eq!(compose(&f, &q(&[1, 1, 0, 0, 0])).unwrap_err(), Error::NonZeroConstantTerm);
    }

    #[test]
    fn revert_examples() {
        let id = UniSeries::identity(&int(0), 10);
        assert!(revert(&id).unwrap().eq_at_precision(&id));
        // t/(1-t) -> t/(1+t)
        let mut a = vec![0i64];
        a.extend(std::iter::repeat_n(1, 10));
        let mut b = vec![0i64];
        b.extend((0..10).map(|k| if k % 2 == 0 { 1 } else { -1 }));
        assert_eq!(revert(&q(&a)).unwrap().coeffs(), q(&b).coeffs());
        // t - t^2 -> Catalan numbers
        let cat = revert(&q(&[0, 1, -1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(cat.coeffs(), q(&[0, 1, 1, 2, 5, 14, 42, 132]).coeffs());
        assert_eq!(revert(&q(&[0, 0, 1])).unwrap_err(), Error::NonInvertibleLinear);
    }

    #[test]
    fn derivative_and_substitution() {
        assert_eq!(q(&[0, 0, 0, 1]).derivative().coeffs(), q(&[0, 0, 3, 0]).coeffs());
        let t = UniSeries::identity(&int(0), 5);
        let mut f = BiSeries::zero(&int(0), 5);
        f.set_coeff(1, 0, int(1));
        f.set_coeff(0, 1, int(1));
        let a = q(&[0, 1, 2, 0, 0, 1]);
        let b = q(&[0, 0, 3, 1, 0, 0]);
        assert!(bi_substitute(&f, &a, &b).unwrap().eq_at_precision(&a.add(&b)));
        f.set_coeff(1, 1, int(-1));
        assert_eq!(bi_substitute(&f, &t, &t).unwrap().coeffs(), q(&[0, 2, -1, 0, 0, 0]).coeffs());
    }

    #[test]
    fn cocycle_trivial_cases() {
        let h = q(&[0, 1, 3, -2, 1]);
        let id = UniSeries::identity(&int(0), 4);
        assert_eq!(derivative_cocycle(&id, &h).unwrap().coeffs(), q(&[1, 0, 0, 0, 0]).coeffs());
        let g = q(&[0, 1, 1, 0, 0]);
        assert_eq!(derivative_cocycle(&g, &id).unwrap().coeffs(), q(&[1, 2, 0, 0, 0]).coeffs());
    }

    #[test]
    fn rendering() {
        let s = qs(&[(0, 1), (1, 1), (-1, 2), (0, 1), (3, 4)]);
        assert_eq!(s.to_string(), "t - 1/2*t^2 + 3/4*t^4 + O(t^5)");
        assert_eq!(to_json_array(&s).to_string(), r#"["0","1","-1/2","0","3/4"]"#);
    }

    fn series_strategy(d: usize, invertible: bool) -> impl Strategy<Value = UniSeries<Rational>> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), d).prop_map(move |v| {
            let mut c = vec![int(0)];
            c.extend(v.into_iter().map(|(n, m)| rat(n, m)));
            if invertible && c[1] == int(0) {
                c[1] = int(1);
            }
            UniSeries::new(c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn compose_matches_brute_force(g in series_strategy(6, false), h in series_strategy(6, false)) {
            prop_assert_eq!(compose(&g, &h).unwrap().coeffs().to_vec(), compose_brute(&g, &h));
        }

        #[test]
        fn compose_is_associative(f in series_strategy(5, false), g in series_strategy(5, false), h in series_strategy(5, false)) {
            let lhs = compose(&compose(&f, &g).unwrap(), &h).unwrap();
            let rhs = compose(&f, &compose(&g, &h).unwrap()).unwrap();
            prop_assert!(lhs.eq_at_precision(&rhs));
        }

        #[test]
        fn revert_is_two_sided_and_matches_lagrange(h in series_strategy(8, true)) {
            let g = revert(&h).unwrap();
            let id = UniSeries::identity(&int(0), 8);
            prop_assert!(compose(&h, &g).unwrap().eq_at_precision(&id));
            prop_assert!(compose(&g, &h).unwrap().eq_at_precision(&id));
            prop_assert!(revert_lagrange(&h).unwrap().eq_at_precision(&g));
        }

        #[test]
        fn derivative_is_a_derivation(f in series_strategy(7, false), g in series_strategy(7, false)) {
            let f = f.add(&UniSeries::constant(int(2), 7));
            let lhs = f.mul(&g).derivative().truncate(6);
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative())).truncate(6);
            prop_assert!(lhs.eq_at_precision(&rhs));
        }

        #[test]
        fn chain_rule_cocycle(g in series_strategy(10, true), h in series_strategy(10, true), k in series_strategy(10, true)) {
            // g'(h) · k'(g∘h) = (k∘g)'(h)
            let gh = compose(&g, &h).unwrap();
            let lhs = derivative_cocycle(&g, &h).unwrap().mul(&derivative_cocycle(&k, &gh).unwrap());
            let rhs = derivative_cocycle(&compose(&k, &g).unwrap(), &h).unwrap();
            // the derivative loses the top coefficient
            prop_assert!(lhs.truncate(9).eq_at_precision(&rhs.truncate(9)));
        }
    }
}
