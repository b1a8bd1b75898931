//! Kummer-Dedekind splitting of rational primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::fp::{factor_mod_p, word_prime, FpPoly};
use crate::arith::matrix::rat_inverse;
use crate::arith::IntMatrix;
use crate::error::{Error, Result};
use crate::field::NumberField;

/// A prime ideal `P = (p, generator)` with ramification index and residue degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub p: BigInt,
    pub e: u32,
    pub f: u32,
    /// Basis coordinates of the second generator.
    pub generator: Vec<BigInt>,
}

/// Powers `alpha^0 .. alpha^n` in basis coordinates.
fn powers(k: &NumberField, alpha: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = k.degree();
    let mut out = vec![k.one()];
    for i in 0..n {
        let next = k.mul(&out[i], alpha);
        out.push(next);
    }
    out
}

/// Small integral elements tried as generators of a p-maximal suborder.
fn candidates(k: &NumberField) -> impl Iterator<Item = Vec<BigInt>> + '_ {
    let n = k.degree();
    let theta = std::iter::once(k.theta_power(1));
    let boxes = (1i64..=3).flat_map(move |r| {
        let width = (2 * r + 1) as u64;
        let total = width.pow(n as u32);
        (0..total).filter_map(move |mut idx| {
            let mut v = Vec::with_capacity(n);
            let mut on_shell = false;
            for _ in 0..n {
                let c = (idx % width) as i64 - r;
                idx /= width;
                on_shell |= c.abs() == r;
                v.push(BigInt::from(c));
            }
            on_shell.then_some(v)
        })
    });
    theta.chain(boxes)
}

/// Factor `pO` into prime ideals, via some `alpha` with `p` not dividing
/// `[O : Z[alpha]]`. Fails only when no small such `alpha` exists.
pub fn prime_decomposition(k: &NumberField, p: &BigInt) -> Result<Vec<PrimeIdealData>> {
    let pw = word_prime(p)?;
    let n = k.degree();
    if n == 1 {
        return Ok(vec![PrimeIdealData {
            p: p.clone(),
            e: 1,
            f: 1,
            generator: vec![p.clone()],
        }]);
    }
    for alpha in candidates(k) {
        let pw_list = powers(k, &alpha);
        let a = IntMatrix::from_rows(n, pw_list[..n].to_vec());
        let d = a.det();
        if d.is_zero() || d.is_multiple_of(p) {
            continue;
        }
        let rat: Vec<Vec<BigRational>> = pw_list[..n]
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let inv = rat_inverse(&rat).expect("nonsingular");
        // alpha^n = sum c_i alpha^i
        let c: Vec<BigInt> = (0..n)
            .map(|j| {
                pw_list[n]
                    .iter()
                    .zip(inv.iter())
                    .fold(BigRational::zero(), |acc, (x, row)| {
                        acc + BigRational::from_integer(x.clone()) * &row[j]
                    })
                    .to_integer()
            })
            .collect();
        let mut charpoly: Vec<BigInt> = c.iter().map(|x| -x).collect();
        charpoly.push(BigInt::one());
        let fac = factor_mod_p(&FpPoly::from_ints(&charpoly, pw))?;
        let mut out = Vec::with_capacity(fac.len());
        for (h, e) in fac {
            let mut gen = vec![BigInt::zero(); n];
            for (kk, hk) in h.lift().iter().enumerate() {
                if hk.is_zero() {
                    continue;
                }
                for (g, x) in gen.iter_mut().zip(&pw_list[kk]) {
                    *g += hk * x;
                }
            }
            out.push(PrimeIdealData {
                p: p.clone(),
                e,
                f: h.deg() as u32,
                generator: gen,
            });
        }
        return Ok(out);
    }
    Err(Error::IndexDividingPrime { p: p.to_string() })
}
