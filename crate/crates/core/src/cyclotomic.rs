//! Bernoulli numbers, irregular primes, and relative class numbers of
//! `Q(zeta_p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::integer::is_prime_u64;
use crate::arith::IntMatrix;
use crate::error::{Error, Result};
use crate::serial::{big, big_opt};
use crate::torsion::SurvivalReport;

/// `B_0..=B_max` with `B_1 = -1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn get(&self, k: usize) -> Option<&BigRational> {
        self.values.get(k)
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n + 1 - k) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// `sum_{j <= k} C(k+1, j) B_j = 0`.
pub fn bernoulli_exact(max_k: usize) -> BernoulliTable {
    let mut values = vec![BigRational::one()];
    for k in 1..=max_k {
        if k > 1 && k % 2 == 1 {
            values.push(BigRational::zero());
            continue;
        }
        let c = binomial_row(k + 1);
        let s: BigRational = (0..k)
            .map(|j| &values[j] * BigRational::from_integer(c[j].clone()))
            .sum();
        values.push(-s / BigRational::from_integer(BigInt::from(k + 1)));
    }
    BernoulliTable { values }
}

/// Product of the primes `p` with `(p - 1) | k`, for even `k >= 2`.
pub fn von_staudt_denominator(k: u64) -> BigInt {
    (2..=k + 1)
        .filter(|&p| k % (p - 1) == 0 && is_prime_u64(p))
        .map(BigInt::from)
        .product()
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// `B_0..=B_{p-3}` reduced mod p; all are p-integral by von Staudt-Clausen.
pub fn bernoulli_mod_p(p: u64) -> Result<Vec<u64>> {
    check_odd_prime(p)?;
    let top = p.saturating_sub(3) as usize;
    let mut b = vec![1u64];
    // binomials C(k+1, j) mod p, row by row
    let mut row = vec![1u64, 1];
    for k in 1..=top {
        let mut next = vec![1u64; k + 2];
        for j in 1..=k {
            next[j] = (row[j - 1] + row[j]) % p;
        }
        row = next;
        let s = (0..k).fold(0u64, |acc, j| (acc + row[j] * b[j]) % p);
        b.push((p - s) % p * inv_mod(k as u64 + 1, p) % p);
    }
    Ok(b)
}

/// `(p, k)` with `p | B_k`, `2 <= k <= p - 3` even.
pub fn irregular_pairs(p: u64) -> Result<Vec<(u64, u64)>> {
    let b = bernoulli_mod_p(p)?;
    Ok((2..=p.saturating_sub(3))
        .step_by(2)
        .filter(|&k| b[k as usize] == 0)
        .map(|k| (p, k))
        .collect())
}

pub const MINUS_CLASS_NUMBER_BOUND: u64 = 67;

fn primitive_root(p: u64) -> u64 {
    let n = p - 1;
    let factors = crate::arith::integer::prime_divisors_u64(n);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1))
        .expect("primes have primitive roots")
}

/// `h^-(p) = 2p prod_{chi odd} (-B_{1,chi} / 2)`. With `g` a primitive root
/// and `F(x) = sum_i (g^i mod p) x^i`, the product over odd characters of
/// `sum_a chi(a) a` is the norm of `F` from `Z[x]/(x^((p-1)/2) + 1)`.
pub fn minus_class_number(p: u64) -> Result<BigInt> {
    minus_class_number_bounded(p, MINUS_CLASS_NUMBER_BOUND)
}

pub fn minus_class_number_bounded(p: u64, bound: u64) -> Result<BigInt> {
    check_odd_prime(p)?;
    if p > bound {
        return Err(Error::OutOfRange(p, bound));
    }
    let n = ((p - 1) / 2) as usize;
    let g = primitive_root(p);
    let mut f = vec![0i64; n];
    let mut gi = 1u64;
    for i in 0..(p - 1) as usize {
        if i < n {
            f[i] += gi as i64;
        } else {
            f[i - n] -= gi as i64;
        }
        gi = gi * g % p;
    }
    let mut rows = Vec::with_capacity(n);
    let mut cur: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
    for _ in 0..n {
        rows.push(cur.clone());
        // multiply by x mod x^n + 1
        let last = cur.pop().expect("n >= 1");
        cur.insert(0, -last);
    }
    let res = IntMatrix::from_rows(n, rows).det();
    let num = BigInt::from(2 * p) * res;
    let den = num_traits::pow(BigInt::from(-2 * p as i64), n);
    let h = BigRational::new(num, den);
    if !h.is_integer() || !h.is_positive() {
        return Err(Error::Contract(format!("h^-({}) evaluated to {}", p, h)));
    }
    Ok(h.to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HerbrandRibetReport {
    pub p: u64,
    pub regular: bool,
    pub pairs: Vec<(u64, u64)>,
    /// Bounds of the even range `2 <= k <= p - 3`.
    pub k_range: (u64, u64),
    #[serde(with = "big_opt", default)]
    pub minus_class_number: Option<BigInt>,
    pub summary: String,
    pub lines: Vec<String>,
}

/// Scan certificates relevant to `p`: fields with a class of order
/// possibly `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PEvidence {
    #[serde(with = "big")]
    pub t: BigInt,
    pub field: String,
    pub proven_order: String,
}

pub fn herbrand_ribet_report(p: u64, scan: Option<&SurvivalReport>) -> Result<HerbrandRibetReport> {
    let pairs = irregular_pairs(p)?;
    let regular = pairs.is_empty();
    let hm = if p <= MINUS_CLASS_NUMBER_BOUND {
        Some(minus_class_number(p)?)
    } else {
        None
    };
    let top = p - 3;
    let mut lines = Vec::new();
    if top < 2 {
        lines.push(format!("vacuous range 2 <= k <= {}: no Bernoulli number to test", top));
    } else {
        lines.push(format!("tested B_k mod {} for even 2 <= k <= {}", p, top));
    }
    let summary = if regular {
        lines.push(format!("{} is regular, so {} does not divide h(Q(zeta_{}))", p, p, p));
        lines.push(format!(
            "if {p} does not divide [L:Q(zeta_{p})] then {p} | h(L) would force {p} | h(Q(zeta_{p})), which fails",
            p = p
        ));
        format!(
            "{p} regular; {p} ∤ h(Q(ζ_{p})); any {p}-divisible L forces {p} | [L:Q(ζ_{p})]",
            p = p
        )
    } else {
        let list: Vec<String> = pairs.iter().map(|(a, b)| format!("({}, {})", a, b)).collect();
        lines.push(format!("irregular pairs: {}", list.join(", ")));
        if let Some(h) = &hm {
            lines.push(format!(
                "h^-({}) = {}, divisible by {}: {}",
                p,
                h,
                p,
                (h % BigInt::from(p)).is_zero()
            ));
        }
        let divides = match &hm {
            Some(h) if (h % BigInt::from(p)).is_zero() => format!("{} | h^-({})", p, p),
            Some(_) => format!("{} does not divide h^-({})", p, p),
            None => format!("{} | h^-({}) by Kummer's criterion", p, p),
        };
        format!("{} irregular; pairs [{}]; {}", p, list.join(", "), divides)
    };
    if let (true, Some(h)) = (regular, &hm) {
        lines.push(format!("h^-({}) = {}", p, h));
    }
    if let Some(report) = scan {
        let hits: Vec<PEvidence> = report
            .rows
            .iter()
            .flat_map(|r| r.certificates.iter())
            .filter(|c| c.order.proven_order.candidates().iter().any(|d| d % p == 0))
            .map(|c| PEvidence {
                t: c.t.clone(),
                field: c.field.clone(),
                proven_order: c.order.proven_order.to_string(),
            })
            .collect();
        lines.push(format!(
            "scan of {} has {} classes of order possibly divisible by {}",
            report.curve,
            hits.len(),
            p
        ));
        for e in hits {
            lines.push(format!("t = {}: field {}, order {}", e.t, e.field, e.proven_order));
        }
    }
    Ok(HerbrandRibetReport {
        p,
        regular,
        pairs,
        k_range: (2, top),
        minus_class_number: hm,
        summary,
        lines,
    })
}

/// Kummer: `p` regular iff `p` does not divide `h^-(p)`.
pub fn kummer_consistent(p: u64) -> Result<bool> {
    let irregular = !irregular_pairs(p)?.is_empty();
    let divides = minus_class_number(p)?.is_multiple_of(&BigInt::from(p));
    Ok(irregular == divides)
}
