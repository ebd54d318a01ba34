//! Honda formal group laws and their endomorphisms.
//!
//! The Honda logarithm `Σ p^(-i) T^(q^i)` has rational coefficients, so the
//! group law and the endomorphisms `[a]` for rational `a` are computed in
//! exact arithmetic for every height. Endomorphisms by elements of `W(F_q)`
//! go through the same exponential with floating unramified coefficients.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::padic::zpoly::is_prime;
use crate::padic::{PadicFloat, UnramifiedElem};
use crate::scalar::{int, rat, rational_mod, rational_valuation, Scalar};
use crate::series::{bi_substitute, compose, compose_bi, revert, BiSeries, UniSeries};
use crate::{Error, Rational, Result};

/// `Σ_{q^i ≤ D} p^(-i) T^(q^i)`.
pub fn honda_log(p: u64, n: u32, trunc: usize) -> Result<UniSeries<Rational>> {
    check_params(p, n)?;
    if trunc < 1 {
        return Err(Error::InsufficientTruncation { needed: 1, got: trunc });
    }
    let q = (p as u128).pow(n);
    let mut coeffs = vec![int(0); trunc + 1];
    let mut deg: u128 = 1;
    let mut den = BigInt::from(1);
    while deg <= trunc as u128 {
        coeffs[deg as usize] = Rational::new(BigInt::from(1), den.clone());
        deg *= q;
        den *= p;
    }
    Ok(UniSeries::new(coeffs))
}

fn check_params(p: u64, n: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("height must be at least 1".into()));
    }
    Ok(())
}

/// `F(X, Y) = log^{-1}(log X + log Y)`.
pub fn group_law<S: Scalar>(log: &UniSeries<S>) -> Result<BiSeries<S>> {
    let exp = revert(log)?;
    compose_bi(&exp, &BiSeries::from_x(log).add(&BiSeries::from_y(log)))
}

/// `[a](T) = log^{-1}(a · log T)`.
pub fn mult_by<S: Scalar>(a: &S, log: &UniSeries<S>) -> Result<UniSeries<S>> {
    compose(&revert(log)?, &log.scale(a))
}

/// The Honda group law of height n at total degree D, with its logarithm
/// and exponential.
#[derive(Clone, Debug)]
pub struct HondaData {
    p: u64,
    n: u32,
    trunc: usize,
    log: UniSeries<Rational>,
    exp: UniSeries<Rational>,
    fgl: BiSeries<Rational>,
}

impl HondaData {
    pub fn new(p: u64, n: u32, trunc: usize) -> Result<Self> {
        let log = honda_log(p, n, trunc)?;
        let exp = revert(&log)?;
        let fgl = compose_bi(&exp, &BiSeries::from_x(&log).add(&BiSeries::from_y(&log)))?;
        Ok(HondaData { p, n, trunc, log, exp, fgl })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn height(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn log(&self) -> &UniSeries<Rational> {
        &self.log
    }

    pub fn exp(&self) -> &UniSeries<Rational> {
        &self.exp
    }

    pub fn fgl(&self) -> &BiSeries<Rational> {
        &self.fgl
    }

    pub fn mult_by_rational(&self, a: &Rational) -> Result<UniSeries<Rational>> {
        compose(&self.exp, &self.log.scale(a))
    }

    pub fn mult_by_int(&self, a: i64) -> Result<UniSeries<Rational>> {
        self.mult_by_rational(&int(a))
    }

    /// `[a](T)` with coefficients in the ring of `a`, embedding the rational
    /// log and exp through `embed`. The result carries its own precision;
    /// see [`HondaData::precision_loss`].
    pub fn mult_by_scalar<S: Scalar>(&self, a: &S, embed: impl Fn(&Rational) -> S) -> Result<UniSeries<S>> {
        let log = self.log.map(&embed);
        let exp = self.exp.map(&embed);
        compose(&exp, &log.scale(a))
    }

    pub fn mult_by_padic(&self, a: &PadicFloat) -> Result<UniSeries<PadicFloat>> {
        self.mult_by_scalar(a, |r| PadicFloat::from_rational(a.prime(), a.cap(), r))
    }

    pub fn mult_by_unramified(&self, a: &UnramifiedElem) -> Result<UniSeries<UnramifiedElem>> {
        self.mult_by_scalar(a, |r| UnramifiedElem::from_rational(a.modulus(), r))
    }

    /// Upper bound on the absolute p-adic digits lost when `[a](T)` is
    /// computed in floating arithmetic: the worst denominator of `exp`
    /// plus the worst denominator among the powers of `log`.
    pub fn precision_loss(&self) -> u32 {
        let neg = |s: &UniSeries<Rational>| {
            s.coeffs().iter().filter_map(|c| rational_valuation(c, self.p)).map(|v| (-v).max(0)).max().unwrap_or(0)
        };
        let mut worst_power = 0;
        let mut power = UniSeries::constant(int(1), self.trunc);
        for _ in 1..=self.trunc {
            power = power.mul(&self.log);
            worst_power = worst_power.max(neg(&power));
        }
        (neg(&self.exp) + worst_power) as u32
    }

    /// `F(a(t), b(t))`.
    pub fn formal_sum(&self, a: &UniSeries<Rational>, b: &UniSeries<Rational>) -> Result<UniSeries<Rational>> {
        bi_substitute(&self.fgl, a, b)
    }

    pub fn integrality(&self) -> IntegralityReport {
        integrality_bi(&self.fgl, self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    /// Smallest valuation among nonzero coefficients.
    pub min_valuation: Option<i64>,
    /// Exponents `[i, j]` (or `[k, 0]` for univariate series) of
    /// coefficients with negative valuation.
    pub non_integral: Vec<[usize; 2]>,
}

impl IntegralityReport {
    pub fn pass(&self) -> bool {
        self.non_integral.is_empty()
    }
}

pub fn integrality_bi(f: &BiSeries<Rational>, p: u64) -> IntegralityReport {
    collect_integrality(f.terms().map(|(i, j, c)| ([i, j], c)), p)
}

pub fn integrality_uni(f: &UniSeries<Rational>, p: u64) -> IntegralityReport {
    collect_integrality(f.coeffs().iter().enumerate().map(|(k, c)| ([k, 0], c)), p)
}

fn collect_integrality<'a>(terms: impl Iterator<Item = ([usize; 2], &'a Rational)>, p: u64) -> IntegralityReport {
    let mut min_valuation = None;
    let mut non_integral = Vec::new();
    for (idx, c) in terms {
        if let Some(v) = rational_valuation(c, p) {
            min_valuation = Some(min_valuation.map_or(v, |m: i64| m.min(v)));
            if v < 0 {
                non_integral.push(idx);
            }
        }
    }
    IntegralityReport { min_valuation, non_integral }
}

/// Unit, commutativity and associativity of a bivariate law at its
/// truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FglAxioms {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl FglAxioms {
    pub fn pass(&self) -> bool {
        self.unit && self.commutative && self.associative
    }
}

pub fn check_fgl_axioms<S: Scalar>(f: &BiSeries<S>) -> Result<FglAxioms> {
    let d = f.trunc();
    let template = f.coeff(0, 0);
    let t = UniSeries::identity(template, d);
    let unit = f.restrict_x().eq_at_precision(&t) && f.restrict_y().eq_at_precision(&t);
    let commutative = f.eq_at_precision(&f.swap());
    Ok(FglAxioms { unit, commutative, associative: check_associativity(f)? })
}

/// Associativity to total degree D.
///
/// The degree-d coefficient of `F(F(αt, βt), γt) − F(αt, F(βt, γt))` is a
/// homogeneous polynomial of degree d in (α, β, γ). Setting γ = 1 and letting
/// α, β run over `{0, …, D}` determines it, so vanishing on that grid is an
/// exact certificate for the trivariate identity.
pub fn check_associativity<S: Scalar>(f: &BiSeries<S>) -> Result<bool> {
    let d = f.trunc();
    let template = f.coeff(0, 0);
    let t = UniSeries::identity(template, d);
    let scaled_sum = |alpha: &S, beta: &S| {
        // F(αt, βt) without series products
        let mut c = vec![template.zero_like(); d + 1];
        for (i, j, coeff) in f.terms() {
            let mut term = coeff.clone();
            for _ in 0..i {
                term = term.mul(alpha);
            }
            for _ in 0..j {
                term = term.mul(beta);
            }
            c[i + j] = c[i + j].add(&term);
        }
        UniSeries::new(c)
    };
    for a in 0..=d as i64 {
        let alpha = template.int_like(a);
        for b in 0..=d as i64 {
            let beta = template.int_like(b);
            let left = bi_substitute(f, &scaled_sum(&alpha, &beta), &t)?;
            let inner = scaled_sum(&beta, &template.one_like());
            let right = bi_substitute(f, &t.scale(&alpha), &inner)?;
            if !left.eq_at_precision(&right) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `log(F(X, Y)) = log X + log Y` as a bivariate identity.
pub fn check_log_homomorphism<S: Scalar>(log: &UniSeries<S>, f: &BiSeries<S>) -> Result<bool> {
    let lhs = compose_bi(log, f)?;
    let rhs = BiSeries::from_x(log).add(&BiSeries::from_y(log));
    Ok(lhs.eq_at_precision(&rhs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualTerm {
    pub degree: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PTypicalReport {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub degree: usize,
    /// Coefficients of `[p](T)` mod p, lowest degree first; `null` where a
    /// coefficient is not p-integral.
    pub reduced: Vec<Option<u64>>,
    /// Nonzero coefficients of `[p](T) − T^q` mod p.
    pub residual: Vec<ResidualTerm>,
    pub pass: bool,
}

/// `[p](T) ≡ T^q mod p` through degree D.
pub fn verify_p_typical(p: u64, n: u32, trunc: usize) -> Result<PTypicalReport> {
    check_params(p, n)?;
    let q = p.pow(n);
    if trunc < q as usize {
        return Err(Error::InsufficientTruncation { needed: q as usize, got: trunc });
    }
    let honda = HondaData::new(p, n, trunc)?;
    let mult_p = honda.mult_by_int(p as i64)?;
    let mut reduced = Vec::with_capacity(trunc + 1);
    let mut residual = Vec::new();
    for (k, c) in mult_p.coeffs().iter().enumerate() {
        let target = u64::from(k as u64 == q);
        match rational_mod(c, p, 1) {
            Ok(r) => {
                let r: u64 = r.try_into().expect("residue below p");
                reduced.push(Some(r));
                let diff = (r + p - target) % p;
                if diff != 0 {
                    residual.push(ResidualTerm { degree: k, value: diff.to_string() });
                }
            }
            Err(_) => {
                reduced.push(None);
                residual.push(ResidualTerm { degree: k, value: format!("non-integral {c}") });
            }
        }
    }
    let pass = residual.is_empty();
    Ok(PTypicalReport { p, n, q, degree: trunc, reduced, residual, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusRelationReport {
    pub degree: usize,
    /// Degrees where `[σa](T^p)` and `[a](T)^p` differ mod p.
    pub mismatches: Vec<usize>,
    /// Fewest p-adic digits carried by any coefficient of `[a]` or `[σa]`.
    pub min_precision: i64,
    pub pass: bool,
}

/// `[σ(a)](T^p) ≡ ([a](T))^p mod p`, the series form of `a^σ F = F a`.
pub fn endo_frobenius_relation(a: &UnramifiedElem, trunc: usize) -> Result<FrobeniusRelationReport> {
    let m = a.modulus();
    let p = m.prime();
    if trunc < p as usize {
        return Err(Error::InsufficientTruncation { needed: p as usize, got: trunc });
    }
    if a.valuation_lower_bound() < 0 {
        return Err(Error::Domain("endomorphisms need an integral scalar".into()));
    }
    let honda = HondaData::new(p, m.degree() as u32, trunc)?;
    let ea = honda.mult_by_unramified(a)?;
    let esa = honda.mult_by_unramified(&a.frobenius())?;
    let min_precision =
        ea.coeffs().iter().chain(esa.coeffs()).map(UnramifiedElem::absolute_precision).min().unwrap_or(i64::MAX);
    let ra = ea.try_map(UnramifiedElem::residue)?;
    let rsa = esa.try_map(UnramifiedElem::residue)?;
    let lhs = rsa.substitute_power(p as usize);
    let rhs = ra.pow(p as u32);
    let diff = lhs.sub(&rhs);
    let mismatches: Vec<usize> =
        diff.coeffs().iter().enumerate().filter(|(_, c)| !Scalar::is_zero(*c)).map(|(k, _)| k).collect();
    let pass = mismatches.is_empty();
    Ok(FrobeniusRelationReport { degree: trunc, mismatches, min_precision, pass })
}

/// The multiplicative law's logarithm `−log(1 − T) = Σ T^k / k`.
pub fn multiplicative_log(trunc: usize) -> UniSeries<Rational> {
    let mut c = vec![int(0)];
    c.extend((1..=trunc as i64).map(|k| rat(1, k)));
    UniSeries::new(c)
}

/// Coefficient strings of a bivariate law, `[[i, j, "c"], …]` for nonzero
/// coefficients.
pub fn bi_json(f: &BiSeries<Rational>) -> serde_json::Value {
    serde_json::Value::Array(
        f.terms()
            .filter(|(_, _, c)| !Zero::is_zero(*c))
            .map(|(i, j, c)| serde_json::json!([i, j, c.to_string()]))
            .collect(),
    )
}
