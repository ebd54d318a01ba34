use ltlab::division_algebra::{ODElem, WeilElem};
use ltlab::multizeta::{bits_for_digits, pi, RealApprox};
use ltlab::padic::modulus::hensel_lift_modulus;
use ltlab::padic::residue::Fq;
use ltlab::padic::unramified::{padic_exp, padic_log, teichmueller, UnramifiedElem};
use ltlab::qsym::{Composition, NSymElem, QSymElem};
use ltlab::scalar::Scalar;
use ltlab::Rational;
use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, usize); 4] = [(2, 2), (3, 2), (5, 1), (2, 3)];

#[test]
fn frobenius_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, n) in FIELDS {
        let m = hensel_lift_modulus(p, n, 10).unwrap();
        for _ in 0..50 {
            let a = UnramifiedElem::random_integral(&m, &mut rng);
            let b = UnramifiedElem::random_integral(&m, &mut rng);
            let fa = a.frobenius();
            let fb = b.frobenius();
            assert!(a.add(&b).frobenius().sub(&fa.add(&fb)).is_zero());
            assert!(a.mul(&b).frobenius().sub(&fa.mul(&fb)).is_zero());
            assert!(a.frobenius_pow(n as i64).sub(&a).is_zero());
            assert!(a.frobenius_pow(-1).frobenius().sub(&a).is_zero());
        }
    }
}

#[test]
fn frobenius_reduces_to_pth_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (p, n) in FIELDS {
        let m = hensel_lift_modulus(p, n, 8).unwrap();
        for _ in 0..20 {
            let a = UnramifiedElem::random_integral(&m, &mut rng);
            let lhs = a.frobenius().residue().unwrap();
            let rhs = a.residue().unwrap().pow(&BigUint::from(p));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn teichmueller_is_multiplicative_and_has_order_dividing_q_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (p, n) in FIELDS {
        let m = hensel_lift_modulus(p, n, 10).unwrap();
        let q1 = m.q() - 1u32;
        for _ in 0..10 {
            let a = UnramifiedElem::random_unit(&m, &mut rng).residue().unwrap();
            let b = UnramifiedElem::random_unit(&m, &mut rng).residue().unwrap();
            let ta = teichmueller(&a).unwrap();
            let tb = teichmueller(&b).unwrap();
            assert!(ta.pow(&q1).is_one());
            let ab = teichmueller(&Fq::new(&m, ta.mul(&tb).residue().unwrap().coeffs()).unwrap()).unwrap();
            assert!(ab.sub(&ta.mul(&tb)).is_zero());
            assert!(ta.frobenius().sub(&ta.pow(&BigUint::from(p))).is_zero());
        }
    }
}

#[test]
fn log_and_exp_are_inverse_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (p, n) in FIELDS {
        let m = hensel_lift_modulus(p, n, 12).unwrap();
        let shift = if p == 2 { 2 } else { 1 };
        for _ in 0..20 {
            let x = UnramifiedElem::random_integral(&m, &mut rng).shift(shift);
            let y = UnramifiedElem::random_integral(&m, &mut rng).shift(shift);
            let ex = padic_exp(&x).unwrap();
            let ey = padic_exp(&y).unwrap();
            assert!(padic_exp(&x.add(&y)).unwrap().sub(&ex.mul(&ey)).is_zero());
            assert!(padic_log(&ex).unwrap().sub(&x).is_zero());
            let u = UnramifiedElem::one(&m).add(&x);
            let v = UnramifiedElem::one(&m).add(&y);
            let luv = padic_log(&u.mul(&v)).unwrap();
            assert!(luv.sub(&padic_log(&u).unwrap().add(&padic_log(&v).unwrap())).is_zero());
        }
    }
}

#[test]
fn valuation_is_ultrametric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = hensel_lift_modulus(3, 2, 10).unwrap();
    for i in 0..100 {
        let a = UnramifiedElem::random_unit(&m, &mut rng).shift(i % 4);
        let b = UnramifiedElem::random_unit(&m, &mut rng).shift((i / 4) % 4);
        let (va, vb) = (a.valuation().unwrap(), b.valuation().unwrap());
        assert_eq!(a.mul(&b).valuation(), Some(va + vb));
        let s = a.add(&b);
        assert!(s.valuation_lower_bound() >= va.min(vb));
        if va != vb {
            assert_eq!(s.valuation(), Some(va.min(vb)));
        }
    }
}

#[test]
fn division_algebra_is_distributive_and_valued() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (p, n) in [(2, 2), (3, 2), (2, 3)] {
        let m = hensel_lift_modulus(p, n, 10).unwrap();
        let f = ODElem::frobenius_generator(&m);
        for _ in 0..20 {
            let x = ODElem::random_integral(&m, &mut rng);
            let y = ODElem::random_integral(&m, &mut rng);
            let z = ODElem::random_integral(&m, &mut rng);
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            assert!(lhs.eq_at_precision(&rhs));
            let u = ODElem::random_unit(&m, &mut rng);
            let w = ODElem::random_unit(&m, &mut rng);
            assert_eq!(u.valuation(), Some(0.into()));
            let uf = u.mul(&f).unwrap();
            let wf = w.mul(&f).unwrap().mul(&f).unwrap();
            let nv = |e: &ODElem| e.valuation().map(|v| v * n as i64);
            assert_eq!(nv(&uf.mul(&wf).unwrap()), Some(3.into()));
            assert_eq!(nv(&uf), Some(1.into()));
            assert!(u.inverse().unwrap().mul(&u).unwrap().eq_at_precision(&ODElem::one(&m)));
        }
    }
}

#[test]
fn weil_embedding_is_an_injective_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let m = hensel_lift_modulus(3, 2, 10).unwrap();
    for _ in 0..30 {
        let g = WeilElem::random(&m, 3, &mut rng);
        let h = WeilElem::random(&m, 3, &mut rng);
        let lhs = g.mul(&h).embed();
        let rhs = g.embed().mul(&h.embed()).unwrap();
        assert!(lhs.eq_at_precision(&rhs));
        if !g.eq_at_precision(&h) {
            assert!(!g.embed().eq_at_precision(&h.embed()));
        }
    }
    assert!(WeilElem::identity(&m).embed().eq_at_precision(&ODElem::one(&m)));
}

fn composition() -> impl Strategy<Value = Composition> {
    prop::collection::vec(1u32..4, 0..4).prop_map(|v| Composition::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qsym_product_is_commutative_and_associative(a in composition(), b in composition(), c in composition()) {
        let (x, y, z) = (QSymElem::monomial(a), QSymElem::monomial(b), QSymElem::monomial(c));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&QSymElem::one()), x.clone());
    }

    #[test]
    fn qsym_product_preserves_degree(a in composition(), b in composition()) {
        let d = a.degree() + b.degree();
        let prod = QSymElem::monomial(a).mul(&QSymElem::monomial(b));
        for (c, _) in prod.terms() {
            prop_assert_eq!(c.degree(), d);
        }
    }

    #[test]
    fn counit_of_comultiplication_recovers_element(a in composition()) {
        let x = QSymElem::monomial(a);
        let t = x.comul();
        let mut left = QSymElem::zero();
        for (i, j, c) in t.terms() {
            if i.is_empty() {
                left = left.add(&QSymElem::monomial(j.clone()).scale(c));
            }
        }
        prop_assert_eq!(left, x);
    }

    #[test]
    fn real_products_stay_within_error(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = Rational::new(a.into(), b.into());
        let y = Rational::new(c.into(), d.into());
        let rx = RealApprox::from_rational(&x, 80);
        let ry = RealApprox::from_rational(&y, 80);
        let exact = RealApprox::from_rational(&(&x * &y + &x), 80);
        prop_assert!(rx.mul(&ry).add(&rx).agrees(&exact, 0.0));
        if !Zero::is_zero(&y) {
            let q = RealApprox::from_rational(&(&x / &y), 80);
            prop_assert!(rx.div(&ry).unwrap().agrees(&q, 0.0));
        }
    }
}

#[test]
fn nsym_is_not_commutative() {
    let a = NSymElem::generator(1);
    let b = NSymElem::generator(2);
    assert_ne!(a.mul(&b), b.mul(&a));
}

#[test]
fn composition_counts_are_powers_of_two() {
    assert_eq!(Composition::all_of_degree(0).len(), 1);
    for d in 1..=8 {
        assert_eq!(Composition::all_of_degree(d).len(), 1usize << (d - 1));
    }
}

#[test]
fn pi_error_bound_is_honest_across_precisions() {
    let hi = pi(bits_for_digits(60));
    for digits in [10, 20, 40] {
        let lo = pi(bits_for_digits(digits));
        let gap = (lo.center() - hi.center()).abs();
        assert!(gap <= lo.err_bound() + hi.err_bound());
        assert!(lo.err_f64() < 10f64.powi(-(digits as i32)));
    }
}
