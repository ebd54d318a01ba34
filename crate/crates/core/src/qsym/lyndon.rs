//! Lyndon words on the weighted alphabet {1, 2, 3, …}, letter k of weight k.
//!
//! They index a basis of the free graded Lie algebra with one generator in
//! each degree, whose enveloping algebra is the noncommutative algebra on the
//! `Z_k`.

use super::Composition;

/// Strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = u·v` with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u32]) -> Option<(&[u32], &[u32])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&i| is_lyndon(&w[i..])).map(|i| (&w[..i], &w[i..]))
}

/// Lyndon words of total weight `degree`, in lexicographic order.
pub fn lyndon_basis(degree: u32) -> Vec<Composition> {
    let mut out: Vec<Composition> =
        Composition::all_of_degree(degree).into_iter().filter(|c| is_lyndon(c.parts())).collect();
    out.sort();
    out
}

/// Dimension of the degree-k part of the free Lie algebra on one generator
/// per degree.
pub fn lie_generator_count(k: u32) -> usize {
    lyndon_basis(k).len()
}

/// The basis of the subalgebra generated in odd degrees ≥ 3, and also in
/// degree 1 when `include_one` is set.
pub fn odd_lyndon_basis(degree: u32, include_one: bool) -> Vec<Composition> {
    lyndon_basis(degree)
        .into_iter()
        .filter(|c| c.parts().iter().all(|&x| x % 2 == 1 && (x > 1 || include_one)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degrees() {
        assert_eq!(lie_generator_count(1), 1);
        assert_eq!(lie_generator_count(2), 1);
        assert_eq!(lie_generator_count(3), 2);
        let b3: Vec<Vec<u32>> = lyndon_basis(3).iter().map(|c| c.parts().to_vec()).collect();
        assert_eq!(b3, vec![vec![1, 2], vec![3]]);
        assert!(!is_lyndon(&[1, 1]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert_eq!(standard_factorization(&[1, 1, 2]), Some((&[1][..], &[1, 2][..])));
        assert_eq!(standard_factorization(&[1, 2, 2]), Some((&[1, 2][..], &[2][..])));
    }

    /// Poincaré–Birkhoff–Witt: `Π_k (1 − t^k)^(−dim_k) = Σ_d #compositions(d) t^d`.
    #[test]
    fn pbw_dimension_count() {
        let n = 12usize;
        let mut series = vec![0i128; n + 1];
        series[0] = 1;
        for k in 1..=n {
            for _ in 0..lie_generator_count(k as u32) {
                // multiply by 1/(1 − t^k)
                for d in k..=n {
                    series[d] += series[d - k];
                }
            }
        }
        for (d, &c) in series.iter().enumerate().skip(1) {
            assert_eq!(c, 1i128 << (d - 1), "degree {d}");
        }
    }

    #[test]
    fn odd_filter() {
        // degree 4: words in {1,3}: (1,3) is Lyndon; (1,1,1,1) is not
        let with_one: Vec<Vec<u32>> = odd_lyndon_basis(4, true).iter().map(|c| c.parts().to_vec()).collect();
        assert_eq!(with_one, vec![vec![1, 3]]);
        assert!(odd_lyndon_basis(4, false).is_empty());
        assert_eq!(odd_lyndon_basis(6, false).len(), 0);
        assert_eq!(odd_lyndon_basis(8, false).len(), 1);
    }
}
