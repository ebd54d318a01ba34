//! The acceptance suite: seven groups of exact or error-bounded checks, run
//! by `ltlab selftest` and by the `acceptance` test target.

use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cm_connection::{flat_connection_report, negative_control, witt_bracket_check, GradedLieElem};
use crate::division_algebra::{conj_by_f, ODElem, WeilElem};
use crate::lubin_tate::{
    check_fgl_axioms, group_law, integrality_uni, multiplicative_log, verify_p_typical, HondaData,
};
use crate::multizeta::{
    bits_for_digits, eval_qsym, eval_series, gamma_reciprocal_series, gamma_series_tail_bound, mzv, pi,
    reciprocal_gamma, zeta, zeta_even_check,
};
use crate::padic::{hensel_lift_modulus, teichmueller, Fq, UnramifiedElem};
use crate::qsym::{checks, Composition, QSymElem};
use crate::series::{compose, derivative_cocycle, BiSeries, UniSeries};
use crate::{Rational, Result};

pub const HONDA_CASES: [(u64, u32); 5] = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)];
pub const DIVISION_CASES: [(u64, usize); 3] = [(2, 2), (3, 2), (2, 3)];

#[derive(Clone, Debug, Serialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub precision: u32,
    pub digits: u32,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: 42, precision: 12, digits: 30 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub module: String,
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionResult {
    /// One status line followed by every failure, indented.
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} [{status}] {}: {} ({} checks, {:.2}s)",
            self.id, self.module, self.name, self.checks, self.seconds
        );
        for f in &self.failures {
            s.push_str(&format!("\n    - {f}"));
        }
        s
    }
}

/// Tally of checks and failures for one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn run(id: u8, module: &str, name: &str, body: impl FnOnce(&mut Tally)) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::default();
    body(&mut t);
    CriterionResult {
        id,
        module: module.to_string(),
        name: name.to_string(),
        pass: t.failures.is_empty() && t.checks > 0,
        checks: t.checks,
        failures: t.failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn rng_for(cfg: &AcceptanceConfig, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id as u64)
}

/// Honda laws are p-integral, so are `[a]` for random `a ∈ Z/p^16`, and
/// `[p](T) ≡ T^q mod p`.
pub fn criterion_1(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut rng = rng_for(cfg, 1);
    run(1, "lubin_tate", "Honda integrality and p-typicality", |t| {
        for (p, n) in HONDA_CASES {
            let q = p.pow(n) as usize;
            let d = q + 2;
            let Some(h) = t.absorb(HondaData::new(p, n, d), "honda") else { continue };
            let rep = h.integrality();
            t.check(rep.pass(), || format!("F_q not integral for p={p} n={n}: {:?}", rep.non_integral));
            let bound = (p as i64).pow(16);
            for _ in 0..5 {
                let a = rng.gen_range(0..bound);
                if let Some(s) = t.absorb(h.mult_by_int(a), "[a]") {
                    let r = integrality_uni(&s, p);
                    t.check(r.pass(), || format!("[{a}] not integral for p={p} n={n}"));
                }
            }
            if let Some(r) = t.absorb(verify_p_typical(p, n, d), "p-typical") {
                t.check(r.pass, || format!("[p](T) ≢ T^q for p={p} n={n}: {:?}", r.residual));
            }
        }
    })
}

fn multiplicative_target(d: usize) -> BiSeries<Rational> {
    let mut want = BiSeries::zero(&Rational::default(), d);
    let one = Rational::from_integer(1.into());
    want.set_coeff(1, 0, one.clone());
    want.set_coeff(0, 1, one.clone());
    want.set_coeff(1, 1, -one);
    want
}

/// Unit, commutativity and associativity of each Honda law, plus the
/// multiplicative law from `−log(1 − T)`.
pub fn criterion_2(_cfg: &AcceptanceConfig) -> CriterionResult {
    run(2, "lubin_tate", "formal group law axioms", |t| {
        for (p, n) in HONDA_CASES {
            let d = p.pow(n) as usize + 2;
            let Some(h) = t.absorb(HondaData::new(p, n, d), "honda") else { continue };
            if let Some(ax) = t.absorb(check_fgl_axioms(h.fgl()), "axioms") {
                t.check(ax.pass(), || format!("p={p} n={n}: {ax:?}"));
            }
        }
        let d = 10;
        if let Some(f) = t.absorb(group_law(&multiplicative_log(d)), "multiplicative law") {
            t.check(f.eq_at_precision(&multiplicative_target(d)), || "−log(1−T) does not give X+Y−XY".into());
            if let Some(ax) = t.absorb(check_fgl_axioms(&f), "axioms") {
                t.check(ax.pass(), || format!("multiplicative law: {ax:?}"));
            }
        }
    })
}

fn random_nonzero_integral(
    m: &std::sync::Arc<crate::padic::UnramifiedModulus>,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> ODElem {
    let unit = ODElem::random_unit(m, rng);
    let shift = ODElem::frobenius_generator(m).pow(rng.gen_range(0..=n as u32)).expect("same modulus");
    unit.mul(&shift).expect("same modulus")
}

/// Defining relations, associativity, valuation, conjugation and the Weil
/// embedding, all mod `p^N`.
pub fn criterion_3(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut rng = rng_for(cfg, 3);
    run(3, "division_algebra", "division algebra relations", |t| {
        for (p, n) in DIVISION_CASES {
            let Some(m) = t.absorb(hensel_lift_modulus(p, n, cfg.precision), "modulus") else { continue };
            let f = ODElem::frobenius_generator(&m);
            let pe = ODElem::from_scalar(&UnramifiedElem::from_i64(&m, p as i64));
            let fpow = f.pow(n as u32).expect("same modulus");
            t.check(fpow.eq_at_precision(&pe), || format!("F^n ≠ p for p={p} n={n}"));
            if let Some(w) = t.absorb(teichmueller(&Fq::generator(&m)), "teichmüller") {
                let lhs = f.mul(&ODElem::from_scalar(&w)).expect("same modulus");
                let rhs = ODElem::from_scalar(&w.pow(&BigUint::from(p))).mul(&f).expect("same modulus");
                t.check(lhs.eq_at_precision(&rhs), || format!("F·ω ≠ ω^p·F for p={p} n={n}"));
            }
            for i in 0..200 {
                let x = ODElem::random_integral(&m, &mut rng);
                let y = ODElem::random_integral(&m, &mut rng);
                let z = ODElem::random_integral(&m, &mut rng);
                let l = x.mul(&y).and_then(|xy| xy.mul(&z));
                let r = y.mul(&z).and_then(|yz| x.mul(&yz));
                let ok = matches!((l, r), (Ok(l), Ok(r)) if l.eq_at_precision(&r));
                t.check(ok, || format!("associativity triple {i} for p={p} n={n}"));
            }
            for i in 0..100 {
                let x = random_nonzero_integral(&m, n, &mut rng);
                let y = random_nonzero_integral(&m, n, &mut rng);
                let vxy = x.mul(&y).ok().and_then(|xy| xy.valuation());
                let sum = x.valuation().zip(y.valuation()).map(|(a, b): (Ratio<i64>, Ratio<i64>)| a + b);
                t.check(vxy.is_some() && vxy == sum, || format!("valuation pair {i} for p={p} n={n}"));
            }
            for i in 0..100 {
                let a = UnramifiedElem::random_unit(&m, &mut rng);
                let ok = conj_by_f(&a).map(|c| c.eq_at_precision(&ODElem::from_scalar(&a.frobenius())));
                t.check(ok == Ok(true), || format!("F a F⁻¹ ≠ σ(a) for unit {i}, p={p} n={n}"));
            }
            for i in 0..100 {
                let x = WeilElem::random(&m, 2 * n as i64, &mut rng);
                let y = WeilElem::random(&m, 2 * n as i64, &mut rng);
                let ok = x.embed().mul(&y.embed()).map(|e| e.eq_at_precision(&x.mul(&y).embed()));
                t.check(ok == Ok(true), || format!("Weil embedding pair {i}, p={p} n={n}"));
            }
        }
    })
}

type HopfCheck = fn() -> Vec<String>;

/// The Hopf-algebra suite over all basis elements up to degree 6, with the
/// polynomial oracle to degree 5.
pub fn criterion_4(_cfg: &AcceptanceConfig) -> CriterionResult {
    run(4, "qsym", "Hopf algebra suite", |t| {
        let groups: [(&str, HopfCheck); 6] = [
            ("QSym bialgebra", || checks::qsym_bialgebra(6)),
            ("NSym bialgebra", || checks::nsym_bialgebra(6)),
            ("coassociativity", || checks::qsym_coassociativity(6)),
            ("antipode", || checks::antipode_axioms(6)),
            ("embed_sym", || checks::embed_hopf_morphism(6)),
            ("polynomial oracle", || checks::oracle_products(5)),
        ];
        for (name, f) in groups {
            let failures = f();
            t.check(failures.is_empty(), || format!("{name}: {}", failures.join(", ")));
        }
        let dual = checks::duality_adjointness(5);
        t.check(dual.is_empty(), || format!("duality: {}", dual.join(", ")));
        t.check(checks::pairing_is_perfect(6), || "pairing is not perfect in degree 6".into());
    })
}

/// Random admissible composition of weight between 2 and `max_weight`.
fn random_admissible(max_weight: u32, rng: &mut ChaCha8Rng) -> Composition {
    let weight = rng.gen_range(2..=max_weight);
    let first = rng.gen_range(2..=weight);
    let mut parts = vec![first];
    let mut left = weight - first;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    Composition::new(parts).expect("positive parts")
}

/// Total weight bound for the stuffle pairs: each factor has weight ≤ this.
pub const STUFFLE_WEIGHT: u32 = 6;

/// ζ(2) = π²/6, the even-zeta identity, ζ(2,1) = ζ(3), stuffle consistency and
/// the `1/Γ` series against an independent Γ.
pub fn criterion_5(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut rng = rng_for(cfg, 5);
    let digits = cfg.digits;
    run(5, "multizeta", "multizeta numerics", |t| {
        let bits = bits_for_digits(digits);
        if let Some(z2) = t.absorb(zeta(2, digits), "ζ(2)") {
            let p = pi(bits);
            let target = p.mul(&p).div_int(6);
            t.check(z2.agrees(&target, 1e-12), || format!("ζ(2) − π²/6 = {:e}", z2.diff_f64(&target)));
        }
        for n in 1..=5 {
            if let Some(r) = t.absorb(zeta_even_check(n, digits, 1e-10), "even check") {
                t.check(r.pass, || format!("ζ({}) residual {:e}", 2 * n, r.residual));
            }
        }
        let c21 = Composition::new(vec![2, 1]).expect("valid");
        if let (Some(a), Some(b)) = (t.absorb(mzv(&c21, digits), "ζ(2,1)"), t.absorb(zeta(3, digits), "ζ(3)")) {
            t.check(a.agrees(&b, 1e-8), || format!("ζ(2,1) − ζ(3) = {:e}", a.diff_f64(&b)));
        }
        for i in 0..20 {
            let x = QSymElem::monomial(random_admissible(STUFFLE_WEIGHT, &mut rng));
            let y = QSymElem::monomial(random_admissible(STUFFLE_WEIGHT, &mut rng));
            let lhs = eval_qsym(&x, digits).and_then(|a| Ok(a.mul(&eval_qsym(&y, digits)?)));
            let rhs = eval_qsym(&x.mul(&y), digits);
            let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a.agrees(b, 0.0));
            t.check(ok, || format!("stuffle pair {i}: {x} · {y}"));
        }
        let d = 8;
        if let Some(series) = t.absorb(gamma_reciprocal_series(d, digits), "1/Γ series") {
            for (num, den) in [(1, 10), (1, 5)] {
                let z = Rational::new(num.into(), den.into());
                let Some(oracle) = t.absorb(reciprocal_gamma(&z, digits), "Γ oracle") else { continue };
                let value = eval_series(&series, &z);
                let gap = (value.center() - oracle.center()).abs();
                let allowed = gamma_series_tail_bound(d, &z) + value.err_bound() + oracle.err_bound();
                t.check(gap <= allowed, || format!("1/Γ({z}) off by {:e}", value.diff_f64(&oracle)));
            }
        }
    })
}

/// Flatness and regularity for random β, the negative control, and the
/// Witt bracket relations.
pub fn criterion_6(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut rng = rng_for(cfg, 6);
    run(6, "cm_connection", "flat connections and Witt algebra", |t| {
        for i in 0..20 {
            let beta = GradedLieElem::random(4, 6, &mut rng);
            if let Some(r) = t.absorb(flat_connection_report(&beta, 16), "solve λ₀") {
                t.check(r.pass, || format!("β #{i} = {}: residual {:?}, regular {}", r.beta, r.residual.len(), r.regular_at_u0));
            }
            if !beta.is_zero() {
                if let Some(res) = t.absorb(negative_control(&beta, 16), "negative control") {
                    t.check(!res.is_zero(), || format!("perturbed λ₀ still flat for β #{i}"));
                }
            }
        }
        for k in 1..=6 {
            for l in 1..=6 {
                let r = witt_bracket_check(k, l, 8);
                t.check(r.pass(), || format!("[v_{k}, v_{l}] fails on u^{:?}", r.failures));
            }
        }
    })
}

fn random_invertible_series(d: usize, rng: &mut ChaCha8Rng) -> UniSeries<Rational> {
    let mut c = vec![Rational::default()];
    for k in 1..=d {
        let mut num: i64 = rng.gen_range(-5..=5);
        if k == 1 && num == 0 {
            num = 1;
        }
        c.push(Rational::new(num.into(), rng.gen_range(1i64..=4).into()));
    }
    UniSeries::new(c)
}

/// `g'(h) · k'(g∘h) = (k∘g)'(h)` on random triples at D = 10.
pub fn criterion_7(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut rng = rng_for(cfg, 7);
    run(7, "series", "chain-rule cocycle", |t| {
        let d = 10;
        for i in 0..50 {
            let g = random_invertible_series(d, &mut rng);
            let h = random_invertible_series(d, &mut rng);
            let k = random_invertible_series(d, &mut rng);
            let outcome = (|| -> Result<bool> {
                let gh = compose(&g, &h)?;
                let lhs = derivative_cocycle(&g, &h)?.mul(&derivative_cocycle(&k, &gh)?);
                let rhs = derivative_cocycle(&compose(&k, &g)?, &h)?;
                // the derivative drops the top coefficient
                Ok(lhs.truncate(d - 1).eq_at_precision(&rhs.truncate(d - 1)))
            })();
            t.check(outcome == Ok(true), || format!("triple {i}: {outcome:?}"));
        }
    })
}

pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        _ => return None,
    })
}

/// Criteria 1–7 in order.
pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=7).filter_map(|id| run_criterion(id, cfg)).collect()
}
