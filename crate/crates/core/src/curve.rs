//! Superelliptic curves `y^m = f(x)`, their integral models, and the sieve
//! for good specialization parameters.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::integer::{exact_root, factor_integer, prime_divisors_u64, FactorEffort};
use crate::arith::{IntFactorization, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperellipticCurve {
    m: u32,
    f: Poly,
}

impl SuperellipticCurve {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.f.degree().unwrap()
    }

    /// Genus-zero curves carry no torsion to specialize; they are accepted
    /// but flagged.
    pub fn is_genus_zero(&self) -> bool {
        genus(self) == 0
    }

    /// Canonical text `m; c_n,...,c_0`.
    pub fn key(&self) -> String {
        format!("{}; {}", self.m, self.f.to_descending_text())
    }

    /// Parse `m; c_n,...,c_0` with rational coefficients `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let parse_err = |column: usize, message: String| Error::Parse {
            line: 1,
            column,
            message,
        };
        let (m_text, f_text) = text
            .split_once(';')
            .ok_or_else(|| parse_err(1, "expected `m; c_n,...,c_0`".into()))?;
        let m: u32 = m_text
            .trim()
            .parse()
            .map_err(|_| parse_err(1, format!("cover degree {:?} is not an integer", m_text.trim())))?;
        let f = Poly::parse_descending(f_text).map_err(|e| parse_err(m_text.len() + 2, e))?;
        validate_curve(m, f)
    }
}

impl fmt::Display for SuperellipticCurve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "y^{} = {}", self.m, self.f)
    }
}

pub fn validate_curve(m: u32, f: Poly) -> Result<SuperellipticCurve> {
    if m < 2 {
        return Err(Error::InvalidCurve(format!("cover degree m = {} must be at least 2", m)));
    }
    match f.degree() {
        None | Some(0) => {
            return Err(Error::InvalidCurve(
                "f must have degree at least 1".to_string(),
            ))
        }
        _ => {}
    }
    if f.discriminant()?.is_zero() {
        return Err(Error::InvalidCurve(format!(
            "f = {} has a repeated root, so y^{} = f(x) is singular there",
            f, m
        )));
    }
    Ok(SuperellipticCurve { m, f })
}

/// `((m - 1)(n - 1) + 1 - gcd(m, n)) / 2` for squarefree f of degree n.
pub fn genus(curve: &SuperellipticCurve) -> u64 {
    genus_from_degrees(curve.m as u64, curve.n() as u64)
}

pub fn genus_from_degrees(m: u64, n: u64) -> u64 {
    ((m - 1) * (n - 1) + 1 - m.gcd(&n)) / 2
}

/// `z^m = g(x)` with integer coefficients, where `z = scale * y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    pub m: u32,
    pub g: Poly,
    pub scale: BigInt,
}

impl IntegralModel {
    pub fn value_at(&self, t: &BigInt) -> BigInt {
        self.g.eval_int(t).to_integer()
    }
}

/// Clear denominators: with N the lcm of coefficient denominators,
/// `z = N y` gives `z^m = N^(m-1) * (N f(x))`.
pub fn normalize_integral_model(curve: &SuperellipticCurve) -> IntegralModel {
    let n = curve.f.denominator_lcm();
    let factor = num_traits::pow(n.clone(), curve.m as usize);
    let g = curve.f.scale(&BigRational::from_integer(factor));
    debug_assert!(g.is_integral());
    IntegralModel {
        m: curve.m,
        g,
        scale: n,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Good,
    DegenerateRoot,
    DegeneratePower,
    Nonreduced,
    Unfactored,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Good => "good",
            Verdict::DegenerateRoot => "degenerate_root",
            Verdict::DegeneratePower => "degenerate_power",
            Verdict::Nonreduced => "nonreduced",
            Verdict::Unfactored => "unfactored",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterStatus {
    pub t: BigInt,
    pub value: BigInt,
    pub verdict: Verdict,
    pub factorization: Option<IntFactorization>,
}

impl ParameterStatus {
    /// Primes q with q || g(t) and q not dividing m, ascending.
    pub fn witness_primes(&self, m: u32) -> Vec<BigInt> {
        match &self.factorization {
            Some(fac) => witness_primes(fac, m),
            None => Vec::new(),
        }
    }
}

pub fn witness_primes(fac: &IntFactorization, m: u32) -> Vec<BigInt> {
    let mb = BigInt::from(m);
    fac.factors
        .iter()
        .filter(|(q, e)| *e == 1 && !(&mb % q).is_zero())
        .map(|(q, _)| q.clone())
        .collect()
}

/// Capelli: `y^m - a` is reducible over Q iff `a = b^p` for a prime `p | m`,
/// or `4 | m` and `a = -4 b^4`.
pub fn binomial_is_reducible(m: u32, a: &BigInt) -> bool {
    if a.is_zero() {
        return true;
    }
    for p in prime_divisors_u64(m as u64) {
        if exact_root(a, p as u32).is_some() {
            return true;
        }
    }
    if m % 4 == 0 && a.is_negative() {
        let q = -a;
        if (&q % 4u32).is_zero() && exact_root(&(q / 4u32), 4).is_some() {
            return true;
        }
    }
    false
}

pub fn good_parameter(model: &IntegralModel, t: &BigInt, effort: &FactorEffort) -> ParameterStatus {
    let value = model.value_at(t);
    let status = |verdict, factorization| ParameterStatus {
        t: t.clone(),
        value: value.clone(),
        verdict,
        factorization,
    };
    if value.is_zero() {
        return status(Verdict::DegenerateRoot, None);
    }
    if binomial_is_reducible(model.m, &value) {
        return status(Verdict::DegeneratePower, None);
    }
    let fac = factor_integer(&value, effort).expect("nonzero value");
    if !fac.is_complete() {
        return status(Verdict::Unfactored, Some(fac));
    }
    if witness_primes(&fac, model.m).is_empty() {
        return status(Verdict::Nonreduced, Some(fac));
    }
    status(Verdict::Good, Some(fac))
}

/// `true` when g(t) is +-1 (no primes at all).
pub fn is_unit_value(v: &BigInt) -> bool {
    v.abs().is_one()
}
