//! Primality testing and integer factorization.
//!
//! Trial division runs up to a configurable bound (at most 10^6), then
//! Brent's variant of Pollard rho takes over with a deterministic seed and a
//! bounded iteration count. Miller-Rabin with the first thirteen prime bases
//! is a proof below 3.317 * 10^24; above that a seeded 40-round test is used
//! and the result is flagged as probabilistic.

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const TRIAL_DIVISION_CAP: u64 = 1_000_000;

/// How a primality verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed 40 random Miller-Rabin rounds; input above the deterministic range.
    ProbablePrime,
}

fn deterministic_limit() -> BigUint {
    // 3_317_044_064_679_887_385_961_981
    BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap()
}

fn miller_rabin_round(n: &BigUint, d: &BigUint, s: u32, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn primality(n: &BigUint) -> Primality {
    if n < &BigUint::from(2u32) {
        return Primality::Composite;
    }
    for &p in &MR_BASES {
        let p = BigUint::from(p);
        if n == &p {
            return Primality::Prime;
        }
        if (n % &p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n_minus_1 >> s;
    if n < &deterministic_limit() {
        for &a in &MR_BASES {
            if !miller_rabin_round(n, &d, s, &BigUint::from(a)) {
                return Primality::Composite;
            }
        }
        return Primality::Prime;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d52_0040);
    let two = BigUint::from(2u32);
    for _ in 0..40 {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if !miller_rabin_round(n, &d, s, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n) != Primality::Composite
}

pub fn is_prime_int(n: &BigInt) -> bool {
    n.is_positive() && is_prime(n.magnitude())
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Budget for [`factor_integer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEffort {
    pub trial_bound: u64,
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        FactorEffort {
            trial_bound: TRIAL_DIVISION_CAP,
            rho_iterations: 2_000_000,
            seed: 0,
        }
    }
}

impl FactorEffort {
    /// A single knob: trial division up to `min(budget, 10^6)` and `budget`
    /// Pollard rho iterations in total.
    pub fn with_budget(budget: u64, seed: u64) -> Self {
        FactorEffort {
            trial_bound: budget.min(TRIAL_DIVISION_CAP),
            rho_iterations: budget,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorStatus {
    Complete,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    pub value: BigInt,
    /// Strictly increasing primes with positive exponents.
    pub factors: Vec<(BigInt, u32)>,
    /// Unfactored part of |value|; one when complete.
    pub cofactor: BigInt,
    pub status: FactorStatus,
    /// Some listed prime is only a probable prime.
    pub probabilistic: bool,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.status == FactorStatus::Complete
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }
}

struct RhoBudget {
    remaining: u64,
}

/// Brent's cycle-finding rho. Returns a nontrivial factor or `None` when the
/// budget runs out.
fn pollard_brent(n: &BigUint, budget: &mut RhoBudget, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    while budget.remaining > 0 {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&two, n);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0u64;
            while k < r && g == one {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                budget.remaining = budget.remaining.saturating_sub(steps);
                g = q.gcd(n);
                k += m;
                if budget.remaining == 0 && g == one {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

fn push_factor(out: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

/// Factor `n` into primes within the given effort.
///
/// Deterministic for fixed effort (including seed).
pub fn factor_integer(n: &BigInt, effort: &FactorEffort) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest = n.magnitude().clone();
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let mut probabilistic = false;

    // Trial division; stop early once the remaining part is 1 or prime.
    let mut d = 2u64;
    while d <= effort.trial_bound && !rest.is_one() {
        if BigUint::from(d) * BigUint::from(d) > rest {
            break;
        }
        if (&rest % d).is_zero() {
            let mut e = 0;
            while (&rest % d).is_zero() {
                rest /= d;
                e += 1;
            }
            found.push((BigUint::from(d), e));
            if !rest.is_one() && primality(&rest) == Primality::Prime {
                break;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut cofactor = BigUint::one();
    if !rest.is_one() {
        let mut budget = RhoBudget {
            remaining: effort.rho_iterations,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(effort.seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut stack = vec![(rest, 1u32)];
        while let Some((m, mult)) = stack.pop() {
            if m.is_one() {
                continue;
            }
            match primality(&m) {
                Primality::Prime => push_factor(&mut found, m, mult),
                Primality::ProbablePrime => {
                    probabilistic = true;
                    push_factor(&mut found, m, mult)
                }
                Primality::Composite => {
                    if let Some(root) = exact_square_root(&m) {
                        stack.push((root, mult * 2));
                        continue;
                    }
                    match pollard_brent(&m, &mut budget, &mut rng) {
                        Some(f) => {
                            let other = &m / &f;
                            stack.push((f, mult));
                            stack.push((other, mult));
                        }
                        None => cofactor *= m.pow(mult),
                    }
                }
            }
        }
    }
    found.sort();
    // Rho can hand back a cofactor sharing primes with found ones only via
    // separate branches; push_factor already merged equal primes.
    let factors = found
        .into_iter()
        .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e))
        .collect();
    let status = if cofactor.is_one() {
        FactorStatus::Complete
    } else {
        FactorStatus::Partial
    };
    Ok(IntFactorization {
        value: n.clone(),
        factors,
        cofactor: BigInt::from_biguint(Sign::Plus, cofactor),
        status,
        probabilistic,
    })
}

fn exact_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of `n` if one exists over the integers (negative `n` only for odd k).
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(n.clone());
    }
    if n.is_negative() && k % 2 == 0 {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Largest power of `p` dividing `n` (n nonzero).
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    if n.is_zero() {
        return u32::MAX;
    }
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n.sqrt()).filter(|d| n % d == 0).collect();
    let mut upper: Vec<u64> = out.iter().rev().map(|d| n / d).collect();
    if let (Some(a), Some(b)) = (out.last(), upper.first()) {
        if a == b {
            upper.remove(0);
        }
    }
    out.extend(upper);
    out
}

pub fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: i64) -> IntFactorization {
        factor_integer(&BigInt::from(n), &FactorEffort::default()).unwrap()
    }

    #[test]
    fn small_factorizations() {
        let f = fac(21);
        assert_eq!(
            f.factors,
            vec![(BigInt::from(3), 1), (BigInt::from(7), 1)]
        );
        assert!(f.is_complete());
        let f = fac(1);
        assert!(f.factors.is_empty());
        assert!(f.is_complete());
        let f = fac(212);
        assert_eq!(
            f.factors,
            vec![(BigInt::from(2), 2), (BigInt::from(53), 1)]
        );
        let f = fac(-212);
        assert_eq!(f.value, BigInt::from(-212));
        assert_eq!(f.exponent_of(&BigInt::from(53)), 1);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(
            factor_integer(&BigInt::zero(), &FactorEffort::default()),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn rho_splits_semiprime_beyond_trial_bound() {
        // 1000003 * 1000033, both above the trial bound
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_integer(&n, &FactorEffort::default()).unwrap();
        assert!(f.is_complete());
        assert_eq!(
            f.factors,
            vec![(BigInt::from(1_000_003), 1), (BigInt::from(1_000_033), 1)]
        );
    }

    #[test]
    fn tiny_budget_leaves_partial() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_integer(&n, &FactorEffort::with_budget(1, 0)).unwrap();
        assert_eq!(f.status, FactorStatus::Partial);
        assert_eq!(f.cofactor, n);
    }

    #[test]
    fn primality_edges() {
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(41));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2,3,5,7
        let mersenne = (BigUint::one() << 61u32) - 1u32;
        assert_eq!(primality(&mersenne), Primality::Prime);
        let big = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(primality(&big), Primality::ProbablePrime);
    }

    #[test]
    fn roots_and_divisors() {
        assert_eq!(exact_root(&BigInt::from(-32), 5), Some(BigInt::from(-2)));
        assert_eq!(exact_root(&BigInt::from(-4), 2), None);
        assert_eq!(exact_root(&BigInt::from(1), 5), Some(BigInt::one()));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(prime_divisors_u64(60), vec![2, 3, 5]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
