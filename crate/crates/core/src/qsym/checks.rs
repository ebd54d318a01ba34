//! Exhaustive Hopf-algebra identity checks over all basis elements up to a
//! given degree. Each function returns the list of failing instances.

use std::collections::BTreeMap;

use super::oracle;
use super::sym::{embed_sym, embed_tensor, Partition, SymBasis, SymElem};
use super::{
    duality_pairing, nsym_tensor_mul, qsym_tensor_mul, tensor_pairing, tensor_pairing_dual, Composition, NSymElem,
    QSymElem, Tensor,
};
use crate::Rational;

fn compositions_up_to(d: u32) -> Vec<Composition> {
    (0..=d).flat_map(Composition::all_of_degree).collect()
}

fn pairs_up_to(d: u32) -> Vec<(Composition, Composition)> {
    let all = compositions_up_to(d);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.degree() + b.degree() <= d {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// `Δ(M_I M_J) = Δ(M_I) Δ(M_J)`.
pub fn qsym_bialgebra(d: u32) -> Vec<String> {
    pairs_up_to(d)
        .into_iter()
        .filter_map(|(a, b)| {
            let x = QSymElem::monomial(a.clone());
            let y = QSymElem::monomial(b.clone());
            (x.mul(&y).comul() != qsym_tensor_mul(&x.comul(), &y.comul())).then(|| format!("M{a}·M{b}"))
        })
        .collect()
}

/// `Δ(Z_I Z_J) = Δ(Z_I) Δ(Z_J)`.
pub fn nsym_bialgebra(d: u32) -> Vec<String> {
    pairs_up_to(d)
        .into_iter()
        .filter_map(|(a, b)| {
            let x = NSymElem::word(a.clone());
            let y = NSymElem::word(b.clone());
            (x.mul(&y).comul() != nsym_tensor_mul(&x.comul(), &y.comul())).then(|| format!("Z{a}·Z{b}"))
        })
        .collect()
}

fn triple_split(t: &Tensor, left: bool) -> BTreeMap<(Composition, Composition, Composition), Rational> {
    let mut out = BTreeMap::new();
    for (a, b, c) in t.terms() {
        let inner = if left { QSymElem::monomial(a.clone()) } else { QSymElem::monomial(b.clone()) };
        for (x, y, cc) in inner.comul().terms() {
            let key = if left { (x.clone(), y.clone(), b.clone()) } else { (a.clone(), x.clone(), y.clone()) };
            *out.entry(key).or_insert_with(Rational::default) += c * cc;
        }
    }
    out.retain(|_, c| *c != Rational::default());
    out
}

/// `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ` on every `M_I`.
pub fn qsym_coassociativity(d: u32) -> Vec<String> {
    compositions_up_to(d)
        .into_iter()
        .filter_map(|i| {
            let t = QSymElem::monomial(i.clone()).comul();
            (triple_split(&t, true) != triple_split(&t, false)).then(|| format!("M{i}"))
        })
        .collect()
}

/// `m(S ⊗ id)Δ = uε = m(id ⊗ S)Δ`.
pub fn antipode_axioms(d: u32) -> Vec<String> {
    compositions_up_to(d)
        .into_iter()
        .filter_map(|i| {
            let x = QSymElem::monomial(i.clone());
            let unit = QSymElem::one().scale(&x.counit());
            let mut left = QSymElem::zero();
            let mut right = QSymElem::zero();
            for (a, b, c) in x.comul().terms() {
                let ma = QSymElem::monomial(a.clone());
                let mb = QSymElem::monomial(b.clone());
                left = left.add(&ma.antipode().mul(&mb).scale(c));
                right = right.add(&ma.mul(&mb.antipode()).scale(c));
            }
            (left != unit || right != unit).then(|| format!("S on M{i}"))
        })
        .collect()
}

fn partitions_up_to(d: u32) -> Vec<Partition> {
    (0..=d).flat_map(Partition::all_of_degree).collect()
}

/// embed is an algebra and coalgebra morphism in both bases.
pub fn embed_hopf_morphism(d: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let parts = partitions_up_to(d);
    for basis in [SymBasis::Monomial, SymBasis::PowerSum] {
        for a in &parts {
            let f = SymElem::basis_element(basis, a.clone());
            let ef = embed_sym(&f);
            if ef.comul() != embed_tensor(&f.comul(), basis) {
                failures.push(format!("Δ∘embed on {basis:?} {a}"));
            }
            for b in &parts {
                if a.degree() + b.degree() > d {
                    continue;
                }
                let g = SymElem::basis_element(basis, b.clone());
                let prod = f.mul(&g).expect("same basis");
                if embed_sym(&prod) != ef.mul(&embed_sym(&g)) {
                    failures.push(format!("embed product {basis:?} {a}·{b}"));
                }
            }
        }
    }
    failures
}

/// Every product of monomials re-expanded in six variables.
pub fn oracle_products(d: u32) -> Vec<String> {
    pairs_up_to(d)
        .into_iter()
        .filter_map(|(a, b)| {
            let ok = oracle::product_agrees(&QSymElem::monomial(a.clone()), &QSymElem::monomial(b.clone()));
            (!ok).then(|| format!("oracle M{a}·M{b}"))
        })
        .collect()
}

/// `⟨w, xy⟩ = ⟨Δw, x ⊗ y⟩` and `⟨wv, x⟩ = ⟨w ⊗ v, Δx⟩` on basis elements.
pub fn duality_adjointness(d: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let pairs = pairs_up_to(d);
    for (a, b) in &pairs {
        let k = a.degree() + b.degree();
        let (ma, mb) = (QSymElem::monomial(a.clone()), QSymElem::monomial(b.clone()));
        let (za, zb) = (NSymElem::word(a.clone()), NSymElem::word(b.clone()));
        let prod = ma.mul(&mb);
        let zprod = za.mul(&zb);
        for c in Composition::all_of_degree(k) {
            let z = NSymElem::word(c.clone());
            if duality_pairing(&z, &prod) != tensor_pairing_dual(&z.comul(), &ma, &mb) {
                failures.push(format!("⟨Z{c}, M{a}·M{b}⟩"));
            }
            let m = QSymElem::monomial(c.clone());
            if duality_pairing(&zprod, &m) != tensor_pairing(&za, &zb, &m.comul()) {
                failures.push(format!("⟨Z{a}·Z{b}, M{c}⟩"));
            }
        }
    }
    failures
}

/// Sum of basis pairings over a degree: `Σ_{I,J} ⟨Z_I, M_J⟩` must equal the
/// number of compositions.
pub fn pairing_is_perfect(d: u32) -> bool {
    let all = Composition::all_of_degree(d);
    let total: Rational = all
        .iter()
        .flat_map(|i| all.iter().map(move |j| (i, j)))
        .map(|(i, j)| duality_pairing(&NSymElem::word(i.clone()), &QSymElem::monomial(j.clone())))
        .sum();
    total == Rational::from_integer((all.len() as i64).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_identities_to_degree_four() {
        assert!(qsym_bialgebra(4).is_empty());
        assert!(nsym_bialgebra(4).is_empty());
        assert!(qsym_coassociativity(6).is_empty());
        assert!(antipode_axioms(5).is_empty());
        assert!(embed_hopf_morphism(4).is_empty());
        assert!(oracle_products(4).is_empty());
        assert!(duality_adjointness(4).is_empty());
        assert!(pairing_is_perfect(4));
    }

    #[test]
    fn a_wrong_product_is_caught() {
        // the plain shuffle (no merged parts) breaks the polynomial model
        let x = QSymElem::parse("M(1)").unwrap();
        let wrong = QSymElem::parse("2*M(1,1)").unwrap();
        assert_ne!(oracle::expand(&wrong), oracle::poly_mul(&oracle::expand(&x), &oracle::expand(&x)));
    }
}
