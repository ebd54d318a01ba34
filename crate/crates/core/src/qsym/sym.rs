//! Symmetric functions in the monomial and power-sum bases, and their
//! embedding into QSym.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Composition, QSymElem, Tensor};
use crate::{Error, Rational, Result};

/// Weakly decreasing tuple of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = [self.0.as_slice(), other.0.as_slice()].concat();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    pub fn all_of_degree(d: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=rest.min(max)).rev() {
                cur.push(k);
                rec(rest - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn parse(s: &str) -> Result<Self> {
        Partition::new(Composition::parse(s)?.parts().to_vec())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Distinct orderings of a multiset, in lexicographic order.
pub fn distinct_permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut v = items.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return out;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymBasis {
    /// `m_λ`
    Monomial,
    /// `p_λ = p_{λ_1} p_{λ_2} ⋯`
    PowerSum,
}

impl SymBasis {
    fn letter(self) -> char {
        match self {
            SymBasis::Monomial => 'm',
            SymBasis::PowerSum => 'p',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymElem {
    basis: SymBasis,
    terms: BTreeMap<Partition, Rational>,
}

pub type SymTensor = BTreeMap<(Partition, Partition), Rational>;

fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    let e = map.entry(key).or_insert_with(Rational::zero);
    *e += c;
}

impl SymElem {
    pub fn zero(basis: SymBasis) -> Self {
        SymElem { basis, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: SymBasis, lambda: Partition) -> Self {
        Self::from_terms(basis, [(lambda, Rational::one())])
    }

    pub fn from_terms(basis: SymBasis, terms: impl IntoIterator<Item = (Partition, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            add_to(&mut map, k, c);
        }
        map.retain(|_, c| !c.is_zero());
        SymElem { basis, terms: map }
    }

    pub fn basis(&self) -> SymBasis {
        self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        Ok(Self::from_terms(self.basis, self.terms.iter().chain(&other.terms).map(|(k, c)| (k.clone(), c.clone()))))
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::InvalidArgument("symmetric functions in different bases".into()))
        }
    }

    /// Product within the basis: concatenation for power sums, and for
    /// monomials the count of exponent vectors `α + β = ν` with α, β
    /// rearrangements of λ, μ.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                match self.basis {
                    SymBasis::PowerSum => add_to(&mut out, a.union(b), c),
                    SymBasis::Monomial => {
                        for (nu, k) in monomial_product(a, b) {
                            add_to(&mut out, nu, &c * Rational::from_integer(k.into()));
                        }
                    }
                }
            }
        }
        Ok(Self::from_terms(self.basis, out))
    }

    /// `Δ m_λ = Σ_{μ ∪ ν = λ} m_μ ⊗ m_ν`; `p_n` is primitive.
    pub fn comul(&self) -> SymTensor {
        let mut out = SymTensor::new();
        for (lambda, c) in &self.terms {
            match self.basis {
                SymBasis::Monomial => {
                    let mut groups: Vec<(u32, usize)> = Vec::new();
                    for &x in &lambda.0 {
                        match groups.last_mut() {
                            Some((y, k)) if *y == x => *k += 1,
                            _ => groups.push((x, 1)),
                        }
                    }
                    split_multiset(&groups, 0, &mut Vec::new(), &mut Vec::new(), &mut |l, r| {
                        add_to(&mut out, (Partition(l.to_vec()), Partition(r.to_vec())), c.clone());
                    });
                }
                SymBasis::PowerSum => {
                    let k = lambda.len();
                    for mask in 0u64..1 << k {
                        let (mut l, mut r) = (Vec::new(), Vec::new());
                        for (i, &x) in lambda.0.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                l.push(x);
                            } else {
                                r.push(x);
                            }
                        }
                        add_to(&mut out, (Partition(l), Partition(r)), c.clone());
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn render(&self) -> String {
        let letter = self.basis.letter();
        super::render_terms(self.terms.iter().map(|(k, c)| (format!("{letter}{k}"), c)))
    }
}

fn split_multiset(
    groups: &[(u32, usize)],
    i: usize,
    left: &mut Vec<u32>,
    right: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32], &[u32]),
) {
    if i == groups.len() {
        f(left, right);
        return;
    }
    let (x, k) = groups[i];
    for j in 0..=k {
        left.extend(std::iter::repeat_n(x, j));
        right.extend(std::iter::repeat_n(x, k - j));
        split_multiset(groups, i + 1, left, right, f);
        left.truncate(left.len() - j);
        right.truncate(right.len() - (k - j));
    }
}

fn monomial_product(a: &Partition, b: &Partition) -> BTreeMap<Partition, u64> {
    let len = a.len() + b.len();
    let pad = |p: &Partition| {
        let mut v = p.0.clone();
        v.resize(len, 0);
        distinct_permutations(&v)
    };
    let (pa, pb) = (pad(a), pad(b));
    let mut out = BTreeMap::new();
    for x in &pa {
        for y in &pb {
            let nu: Vec<u32> = x.iter().zip(y).map(|(s, t)| s + t).collect();
            if nu.windows(2).all(|w| w[0] >= w[1]) {
                let parts = nu.into_iter().filter(|&v| v > 0).collect();
                *out.entry(Partition(parts)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// The inclusion of symmetric functions into QSym: `m_λ` goes to the sum of
/// `M_I` over distinct rearrangements I of λ, and `p_λ` to `Π M_(λ_i)`.
pub fn embed_sym(f: &SymElem) -> QSymElem {
    let mut out = QSymElem::zero();
    for (lambda, c) in &f.terms {
        let image = match f.basis {
            SymBasis::Monomial => embed_monomial(lambda),
            SymBasis::PowerSum => lambda
                .0
                .iter()
                .fold(QSymElem::one(), |acc, &k| acc.mul(&QSymElem::monomial(Composition(vec![k])))),
        };
        out = out.add(&image.scale(c));
    }
    out
}

fn embed_monomial(lambda: &Partition) -> QSymElem {
    QSymElem::from_terms(distinct_permutations(&lambda.0).into_iter().map(|v| (Composition(v), Rational::one())))
}

/// `embed ⊗ embed` applied to a tensor of symmetric functions in `basis`.
pub fn embed_tensor(t: &SymTensor, basis: SymBasis) -> Tensor {
    let mut out = Tensor::zero();
    for ((l, r), c) in t {
        let el = embed_sym(&SymElem::basis_element(basis, l.clone()));
        let er = embed_sym(&SymElem::basis_element(basis, r.clone()));
        for (a, ca) in el.terms() {
            for (b, cb) in er.terms() {
                out.add_term(a.clone(), b.clone(), c * ca * cb);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn comp(v: &[u32]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partitions_and_permutations() {
        assert_eq!(Partition::all_of_degree(5).len(), 7);
        assert_eq!(Partition::all_of_degree(6).len(), 11);
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(distinct_permutations(&[1, 2, 3, 0]).len(), 24);
        assert_eq!(part(&[1, 3, 2]).parts(), &[3, 2, 1]);
    }

    #[test]
    fn embedding_examples() {
        let p3 = SymElem::basis_element(SymBasis::PowerSum, part(&[3]));
        assert_eq!(embed_sym(&p3), QSymElem::monomial(comp(&[3])));
        let m11 = SymElem::basis_element(SymBasis::Monomial, part(&[1, 1]));
        assert_eq!(embed_sym(&m11), QSymElem::monomial(comp(&[1, 1])));
        let m21 = SymElem::basis_element(SymBasis::Monomial, part(&[2, 1]));
        assert_eq!(embed_sym(&m21).to_string(), "M(1,2) + M(2,1)");
    }

    #[test]
    fn monomial_products() {
        // m_1 · m_1 = 2 m_11 + m_2
        let m1 = SymElem::basis_element(SymBasis::Monomial, part(&[1]));
        let sq = m1.mul(&m1).unwrap();
        assert_eq!(sq.render(), "2*m(1,1) + m(2)");
        // m_21 · m_1 = m_31 + 2 m_22 + 2 m_211
        let m21 = SymElem::basis_element(SymBasis::Monomial, part(&[2, 1]));
        let prod = m21.mul(&m1).unwrap();
        let want = SymElem::from_terms(
            SymBasis::Monomial,
            [(part(&[3, 1]), int(1)), (part(&[2, 2]), int(2)), (part(&[2, 1, 1]), int(2))],
        );
        assert_eq!(prod, want);
    }

    #[test]
    fn coproducts() {
        let m211 = SymElem::basis_element(SymBasis::Monomial, part(&[2, 1, 1]));
        // splits of {2,1,1}: 2·3 distinct pairs
        assert_eq!(m211.comul().len(), 6);
        let p211 = SymElem::basis_element(SymBasis::PowerSum, part(&[2, 1, 1]));
        let d = p211.comul();
        assert_eq!(d[&(part(&[1]), part(&[2, 1]))], int(2));
        assert_eq!(d.values().cloned().sum::<Rational>(), int(8));
    }
}
