//! Quasisymmetric functions QSym in the monomial basis `M_I`, the dual
//! noncommutative algebra on generators `Z_k`, and symmetric functions
//! embedded in QSym.
//!
//! Grading is algebraic: `M_I` and `Z_I` have degree `|I|`. The convention
//! for the monomial basis is `M_I = Σ_{i_1 > … > i_k} x_{i_1}^{a_1} ⋯ x_{i_k}^{a_k}`,
//! so sending `x_i ↦ 1/i` gives the multiple zeta value `ζ(a_1, …, a_k)`.

pub mod checks;
pub mod lyndon;
pub mod oracle;
pub mod sym;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::{Error, Rational, Result};

/// A tuple of positive integers; the empty composition indexes the unit.
///
/// Ordered by degree, then lexicographically on parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("composition parts must be positive".into()));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn concat(&self, other: &Self) -> Self {
        Composition([self.0.as_slice(), other.0.as_slice()].concat())
    }

    pub fn reversed(&self) -> Self {
        Composition(self.0.iter().rev().copied().collect())
    }

    /// All `(I₁, I₂)` with `I₁·I₂ = self`.
    pub fn splittings(&self) -> impl Iterator<Item = (Composition, Composition)> + '_ {
        (0..=self.0.len()).map(|k| (Composition(self.0[..k].to_vec()), Composition(self.0[k..].to_vec())))
    }

    /// Compositions obtained by merging runs of adjacent parts.
    pub fn coarsenings(&self) -> Vec<Composition> {
        if self.0.is_empty() {
            return vec![Composition::empty()];
        }
        let k = self.0.len();
        (0u64..1 << (k - 1))
            .map(|mask| {
                let mut parts = vec![self.0[0]];
                for i in 1..k {
                    if mask >> (i - 1) & 1 == 1 {
                        *parts.last_mut().unwrap() += self.0[i];
                    } else {
                        parts.push(self.0[i]);
                    }
                }
                Composition(parts)
            })
            .collect()
    }

    /// Every composition of `d` (for d = 0, the empty one).
    pub fn all_of_degree(d: u32) -> Vec<Composition> {
        if d == 0 {
            return vec![Composition::empty()];
        }
        (0u64..1 << (d - 1))
            .map(|mask| {
                let mut parts = vec![1];
                for i in 1..d {
                    if mask >> (i - 1) & 1 == 1 {
                        *parts.last_mut().unwrap() += 1;
                    } else {
                        parts.push(1);
                    }
                }
                Composition(parts)
            })
            .collect()
    }

    /// Parses `"(2,1)"`, `"2,1"` or `"()"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t).trim();
        if inner.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad composition part {x:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Add `c` at `key`; zero entries are removed later by [`prune`].
fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if !c.is_zero() {
        *map.entry(key).or_insert_with(Rational::zero) += c;
    }
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, c| !c.is_zero());
}

fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a Rational)>) -> String {
    let mut out = String::new();
    for (name, c) in terms {
        let mag = c.abs();
        let body = if mag.is_one() { name } else { format!("{mag}*{name}") };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn terms_json<'a>(terms: impl Iterator<Item = (&'a Composition, &'a Rational)>) -> serde_json::Value {
    serde_json::Value::Array(terms.map(|(k, c)| json!({"composition": k.parts(), "coeff": c.to_string()})).collect())
}

/// Parses linear combinations such as `"2*M(1,1) - 1/2*M(2) + M()"`; a bare
/// `"(2,1)"` is read as `M(2,1)`. `letter` is the basis symbol.
fn parse_combination(s: &str, letter: char) -> Result<BTreeMap<Composition, Rational>> {
    let err = || Error::Parse(format!("cannot parse {s:?} as a linear combination of {letter}(...)"));
    let mut out = BTreeMap::new();
    let mut rest = s.trim();
    if rest.is_empty() {
        return Err(err());
    }
    let mut sign = Rational::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r.trim_start();
    }
    loop {
        let close = rest.find(')').ok_or_else(err)?;
        let open = rest[..close].find('(').ok_or_else(err)?;
        let head = rest[..open].trim();
        let head = head.strip_suffix(letter).unwrap_or(head).trim();
        let coeff = match head.strip_suffix('*').map(str::trim).unwrap_or(head) {
            "" => Rational::one(),
            c => c.parse::<Rational>().map_err(|_| err())?,
        };
        let comp = Composition::parse(&rest[open..=close])?;
        accumulate(&mut out, comp, sign.clone() * coeff);
        rest = rest[close + 1..].trim_start();
        if rest.is_empty() {
            break;
        }
        sign = match rest.as_bytes()[0] {
            b'+' => Rational::one(),
            b'-' => -Rational::one(),
            _ => return Err(err()),
        };
        rest = rest[1..].trim_start();
    }
    prune(&mut out);
    Ok(out)
}

/// Sparse tensor `Σ c · A ⊗ B` over pairs of compositions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<(Composition, Composition), Rational>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn add_term(&mut self, a: Composition, b: Composition, c: Rational) {
        accumulate(&mut self.terms, (a, b), c);
        prune(&mut self.terms);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Composition, &Rational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, a: &Composition, b: &Composition) -> Rational {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product in `A ⊗ A` given the product on basis elements of A.
    pub fn mul_with(
        &self,
        other: &Tensor,
        prod: impl Fn(&Composition, &Composition) -> BTreeMap<Composition, Rational>,
    ) -> Tensor {
        let mut out = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let left = prod(a1, a2);
                let right = prod(b1, b2);
                let c = c1 * c2;
                for (l, cl) in &left {
                    for (r, cr) in &right {
                        accumulate(&mut out, (l.clone(), r.clone()), &c * cl * cr);
                    }
                }
            }
        }
        prune(&mut out);
        Tensor { terms: out }
    }

    /// Apply linear maps on each factor.
    pub fn map_factors(
        &self,
        f: impl Fn(&Composition) -> BTreeMap<Composition, Rational>,
        g: impl Fn(&Composition) -> BTreeMap<Composition, Rational>,
    ) -> Tensor {
        let mut out = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            for (x, cx) in f(a) {
                for (y, cy) in g(b) {
                    accumulate(&mut out, (x.clone(), y), c * &cx * cy);
                }
            }
        }
        prune(&mut out);
        Tensor { terms: out }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| json!({"left": a.parts(), "right": b.parts(), "coeff": c.to_string()}))
                .collect(),
        )
    }

    pub fn render(&self, letter: char) -> String {
        render_terms(self.terms.iter().map(|((a, b), c)| (format!("{letter}{a} ⊗ {letter}{b}"), c)))
    }
}

/// Quasi-shuffle of two compositions, with multiplicities.
pub fn quasi_shuffle(a: &[u32], b: &[u32]) -> BTreeMap<Composition, Rational> {
    let mut out = BTreeMap::new();
    quasi_shuffle_into(a, b, &mut Vec::new(), &mut out);
    out
}

fn quasi_shuffle_into(a: &[u32], b: &[u32], prefix: &mut Vec<u32>, out: &mut BTreeMap<Composition, Rational>) {
    if a.is_empty() || b.is_empty() {
        let parts = [prefix.as_slice(), a, b].concat();
        *out.entry(Composition(parts)).or_insert_with(Rational::zero) += Rational::one();
        return;
    }
    for (head, ra, rb) in [(a[0], &a[1..], b), (b[0], a, &b[1..]), (a[0] + b[0], &a[1..], &b[1..])] {
        prefix.push(head);
        quasi_shuffle_into(ra, rb, prefix, out);
        prefix.pop();
    }
}

/// Element of QSym as a finite combination of `M_I`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QSymElem {
    terms: BTreeMap<Composition, Rational>,
}

impl QSymElem {
    pub fn zero() -> Self {
        QSymElem::default()
    }

    pub fn one() -> Self {
        Self::monomial(Composition::empty())
    }

    pub fn monomial(i: Composition) -> Self {
        Self::from_terms([(i, Rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Composition, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&mut map, k, c);
        }
        prune(&mut map);
        QSymElem { terms: map }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(QSymElem { terms: parse_combination(s, 'M')? })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: &Composition) -> Rational {
        self.terms.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Composition::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(k, c)| (k.clone(), c.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (k, m) in quasi_shuffle(&a.0, &b.0) {
                    accumulate(&mut out, k, &c * m);
                }
            }
        }
        prune(&mut out);
        QSymElem { terms: out }
    }

    /// Deconcatenation `Δ M_I = Σ_{I = I₁·I₂} M_{I₁} ⊗ M_{I₂}`.
    pub fn comul(&self) -> Tensor {
        let mut t = Tensor::zero();
        for (i, c) in &self.terms {
            for (a, b) in i.splittings() {
                t.add_term(a, b, c.clone());
            }
        }
        t
    }

    /// Counit: the coefficient of `M_()`.
    pub fn counit(&self) -> Rational {
        self.coeff(&Composition::empty())
    }

    pub fn antipode(&self) -> Self {
        let mut out = QSymElem::zero();
        for (i, c) in &self.terms {
            out = out.add(&antipode_monomial(i).scale(c));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        terms_json(self.terms.iter())
    }
}

impl fmt::Display for QSymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(self.terms.iter().map(|(k, c)| (format!("M{k}"), c))))
    }
}

/// Product on the tensor square of QSym.
pub fn qsym_tensor_mul(x: &Tensor, y: &Tensor) -> Tensor {
    x.mul_with(y, |a, b| quasi_shuffle(&a.0, &b.0))
}

fn antipode_cache() -> &'static Mutex<BTreeMap<Composition, QSymElem>> {
    static CACHE: OnceLock<Mutex<BTreeMap<Composition, QSymElem>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// `S(M_I)` from `Σ_{I = I₁·I₂} S(M_{I₁}) M_{I₂} = ε(M_I)`, solved for the
/// term with `I₂ = ()`.
fn antipode_monomial(i: &Composition) -> QSymElem {
    if i.is_empty() {
        return QSymElem::one();
    }
    if let Some(s) = antipode_cache().lock().expect("antipode cache poisoned").get(i) {
        return s.clone();
    }
    let mut acc = QSymElem::zero();
    for (a, b) in i.splittings() {
        if b.is_empty() {
            continue;
        }
        acc = acc.add(&antipode_monomial(&a).mul(&QSymElem::monomial(b)));
    }
    let s = acc.scale(&-Rational::one());
    antipode_cache().lock().expect("antipode cache poisoned").insert(i.clone(), s.clone());
    s
}

/// Element of the free associative algebra on `Z_1, Z_2, …`; a word
/// `Z_{i_1} ⋯ Z_{i_k}` is stored as the composition `(i_1, …, i_k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NSymElem {
    terms: BTreeMap<Composition, Rational>,
}

impl NSymElem {
    pub fn zero() -> Self {
        NSymElem::default()
    }

    pub fn one() -> Self {
        Self::word(Composition::empty())
    }

    pub fn word(i: Composition) -> Self {
        Self::from_terms([(i, Rational::one())])
    }

    /// The generator `Z_k` (`Z_0 = 1`).
    pub fn generator(k: u32) -> Self {
        if k == 0 {
            Self::one()
        } else {
            Self::word(Composition(vec![k]))
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Composition, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&mut map, k, c);
        }
        prune(&mut map);
        NSymElem { terms: map }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(NSymElem { terms: parse_combination(s, 'Z')? })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(k, c)| (k.clone(), c.clone())))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), c * s)))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                accumulate(&mut out, a.concat(b), ca * cb);
            }
        }
        prune(&mut out);
        NSymElem { terms: out }
    }

    /// The multiplicative extension of `Δ Z_k = Σ_{i+j=k} Z_i ⊗ Z_j`, written
    /// out directly: `Δ Z_I = Σ_{A + B = I} Z_{A°} ⊗ Z_{B°}` over pairs of
    /// nonnegative vectors, where `°` drops zero entries.
    pub fn comul(&self) -> Tensor {
        let mut t = Tensor::zero();
        for (i, c) in &self.terms {
            let mut a = Vec::with_capacity(i.len());
            split_word(&i.0, &mut a, &mut |a| {
                let left: Vec<u32> = a.iter().copied().filter(|&x| x > 0).collect();
                let right: Vec<u32> = i.0.iter().zip(a).map(|(x, y)| x - y).filter(|&x| x > 0).collect();
                t.add_term(Composition(left), Composition(right), c.clone());
            });
        }
        t
    }

    pub fn counit(&self) -> Rational {
        self.terms.get(&Composition::empty()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        terms_json(self.terms.iter())
    }
}

fn split_word(word: &[u32], a: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if a.len() == word.len() {
        f(a);
        return;
    }
    for x in 0..=word[a.len()] {
        a.push(x);
        split_word(word, a, f);
        a.pop();
    }
}

impl fmt::Display for NSymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(self.terms.iter().map(|(k, c)| (format!("Z{k}"), c))))
    }
}

pub fn nsym_tensor_mul(x: &Tensor, y: &Tensor) -> Tensor {
    x.mul_with(y, |a, b| BTreeMap::from([(a.concat(b), Rational::one())]))
}

/// `⟨Z_I, M_J⟩ = δ_{I,J}`, extended bilinearly.
pub fn duality_pairing(w: &NSymElem, x: &QSymElem) -> Rational {
    w.terms.iter().map(|(k, c)| c * x.coeff(k)).sum()
}

/// `⟨w₁ ⊗ w₂, T⟩` for a tensor of QSym basis elements.
pub fn tensor_pairing(w1: &NSymElem, w2: &NSymElem, t: &Tensor) -> Rational {
    t.terms()
        .map(|(a, b, c)| {
            let l = w1.terms.get(a).cloned().unwrap_or_else(Rational::zero);
            let r = w2.terms.get(b).cloned().unwrap_or_else(Rational::zero);
            c * l * r
        })
        .sum()
}

/// `⟨T, x ⊗ y⟩` for a tensor of NSym words.
pub fn tensor_pairing_dual(t: &Tensor, x: &QSymElem, y: &QSymElem) -> Rational {
    t.terms().map(|(a, b, c)| c * x.coeff(a) * y.coeff(b)).sum()
}

/// `Σ_{k ≤ d} dim QSym_k`-style table: the number of compositions of each
/// degree `0..=d`.
pub fn graded_dimensions(d: u32) -> Vec<usize> {
    (0..=d).map(|k| Composition::all_of_degree(k).len()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn m(parts: &[u32]) -> QSymElem {
        QSymElem::monomial(c(parts))
    }

    fn z(parts: &[u32]) -> NSymElem {
        NSymElem::word(c(parts))
    }

    #[test]
    fn composition_basics() {
        assert_eq!(Composition::parse("(2,1)").unwrap(), c(&[2, 1]));
        assert_eq!(Composition::parse("()").unwrap(), Composition::empty());
        assert!(Composition::parse("(2,0)").is_err());
        assert!(c(&[1, 1]) < c(&[2]));
        assert!(c(&[3]) < c(&[1, 1, 1, 1]));
        assert_eq!(c(&[1, 2]).coarsenings().len(), 2);
        assert_eq!(graded_dimensions(6), vec![1, 1, 2, 4, 8, 16, 32]);
    }

    #[test]
    fn products() {
        assert_eq!(QSymElem::one().mul(&m(&[2, 1])), m(&[2, 1]));
        assert_eq!(m(&[1]).mul(&m(&[1])).to_string(), "2*M(1,1) + M(2)");
        assert_eq!(m(&[1]).mul(&m(&[2])), m(&[1, 2]).add(&m(&[2, 1])).add(&m(&[3])));
    }

    #[test]
    fn parse_and_render() {
        let x = QSymElem::parse("2*M(1,1) - 1/2*M(2) + (3)").unwrap();
        assert_eq!(x.to_string(), "2*M(1,1) - 1/2*M(2) + M(3)");
        assert_eq!(QSymElem::parse("-M()").unwrap().to_string(), "-M()");
        assert!(QSymElem::parse("M(1").is_err());
        assert_eq!(NSymElem::parse("Z(2,1)").unwrap(), z(&[2, 1]));
    }

    #[test]
    fn coproducts() {
        let e = Composition::empty();
        let d = QSymElem::one().comul();
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeff(&e, &e), int(1));
        let d = m(&[2, 1]).comul();
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff(&c(&[2]), &c(&[1])), int(1));

        let d = NSymElem::generator(2).comul();
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff(&c(&[1]), &c(&[1])), int(1));
        assert_eq!(d.coeff(&e, &c(&[2])), int(1));
        let d11 = z(&[1, 1]).comul();
        assert_eq!(d11, nsym_tensor_mul(&z(&[1]).comul(), &z(&[1]).comul()));
        assert_eq!(d11.coeff(&c(&[1]), &c(&[1])), int(2));
    }

    #[test]
    fn antipode_small_degrees() {
        assert_eq!(QSymElem::one().antipode(), QSymElem::one());
        assert_eq!(m(&[1]).antipode(), m(&[1]).scale(&int(-1)));
        assert_eq!(m(&[2]).antipode(), m(&[2]).scale(&int(-1)));
        assert_eq!(m(&[1, 1]).antipode(), m(&[2]).add(&m(&[1, 1])));
    }

    #[test]
    fn antipode_matches_closed_form() {
        // S(M_I) = (-1)^ℓ(I) Σ_{J coarser than rev(I)} M_J
        for d in 1..=6 {
            for i in Composition::all_of_degree(d) {
                let sign = if i.len() % 2 == 0 { int(1) } else { int(-1) };
                let want = QSymElem::from_terms(i.reversed().coarsenings().into_iter().map(|j| (j, sign.clone())));
                assert_eq!(QSymElem::monomial(i.clone()).antipode(), want, "{i}");
            }
        }
    }

    #[test]
    fn pairing() {
        assert_eq!(duality_pairing(&z(&[2, 1]), &m(&[2, 1])), int(1));
        assert_eq!(duality_pairing(&z(&[3]), &m(&[2, 1])), int(0));
    }
}
