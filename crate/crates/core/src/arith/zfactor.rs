//! Factorization over the integers: squarefree split over Q, then
//! Zassenhaus (factor mod p, quadratic Hensel lifting, subset recombination).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fp::{factor_mod_p, FpPoly};
use super::integer::primes_up_to;
use super::poly::Poly;
use crate::error::{Error, Result};

type ZPoly = Vec<BigInt>;

fn trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmod(v: &[BigInt], m: &BigInt) -> ZPoly {
    trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsym(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    trim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let dh = h.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= dh {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dh];
    for i in (dh..r.len()).rev() {
        let c = r[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, hc) in h.iter().enumerate() {
            r[i - dh + j] = (&r[i - dh + j] - &c * hc).mod_floor(m);
        }
        q[i - dh] = c;
    }
    r.truncate(dh);
    (trim(q), trim(r))
}

fn from_fp(f: &FpPoly) -> ZPoly {
    f.lift()
}

/// One quadratic Hensel step from modulus m to m^2.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g_new = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h_new = zmod(&zadd(h, &r), &m2);
    let b = zmod(
        &zsub(&zadd(&zmul(s, &g_new), &zmul(t, &h_new)), &[BigInt::one()]),
        &m2,
    );
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h_new, &m2);
    let s_new = zmod(&zsub(s, &d), &m2);
    let t_new = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g_new)), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lift `f = lc * prod(factors) mod p` to monic factors mod `p^(2^steps)`.
fn multifactor_lift(f: &[BigInt], factors: &[FpPoly], p: u64, steps: u32) -> Vec<ZPoly> {
    let pb = BigInt::from(p);
    let modulus = (0..steps).fold(pb.clone(), |m, _| &m * &m);
    if factors.len() == 1 {
        // monic normalization of f mod modulus
        let lc = f.last().unwrap().mod_floor(&modulus);
        let inv = mod_inverse(&lc, &modulus);
        return vec![zmod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &modulus)];
    }
    let mid = factors.len() / 2;
    let lc_p = FpPoly::from_ints(&[f.last().unwrap().clone()], p);
    let left = factors[..mid]
        .iter()
        .fold(lc_p, |acc, g| acc.mul(g));
    let right = factors[mid..]
        .iter()
        .fold(FpPoly::one(p), |acc, g| acc.mul(g));
    let (one, s, t) = left.xgcd(&right);
    debug_assert!(one.is_one());
    let mut g = from_fp(&left);
    let mut h = from_fp(&right);
    let mut s = from_fp(&s);
    let mut t = from_fp(&t);
    let mut m = pb;
    for _ in 0..steps {
        let next = hensel_step(f, &g, &h, &s, &t, &m);
        g = next.0;
        h = next.1;
        s = next.2;
        t = next.3;
        m = &m * &m;
    }
    let mut out = multifactor_lift(&g, &factors[..mid], p, steps);
    out.extend(multifactor_lift(&h, &factors[mid..], p, steps));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.abs().is_one(), "non-invertible leading coefficient");
    (e.x * e.gcd.signum()).mod_floor(m)
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: &[BigInt]) -> ZPoly {
    let c = content(v);
    let mut out: ZPoly = v.iter().map(|x| x / &c).collect();
    if out.last().is_some_and(|x| x.is_negative()) {
        out = out.into_iter().map(|x| -x).collect();
    }
    out
}

/// Exact division over Z, `None` if `b` does not divide `a`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let (q, r) = Poly::from_bigints(a).div_rem(&Poly::from_bigints(b));
    if !r.is_zero() {
        return None;
    }
    q.to_integer_coeffs()
}

fn choose_prime(f: &[BigInt]) -> (u64, Vec<FpPoly>) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes_up_to(10_000) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = FpPoly::from_ints(f, p);
        if fp.deg() != f.len() - 1 || fp.gcd(&fp.derivative()).deg() > 0 {
            continue;
        }
        let facs: Vec<FpPoly> = factor_mod_p(&fp)
            .expect("prime modulus")
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("some prime keeps a squarefree polynomial squarefree")
}

/// Zassenhaus on a primitive squarefree polynomial with positive lc.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    let max_coeff = f.iter().map(|c| c.abs()).max().unwrap();
    let lc = f.last().unwrap().clone();
    // Mignotte-style bound on factor coefficients, times lc for the scaled factor.
    let bound = &lc * (BigInt::one() << n) * BigInt::from(n + 1) * &max_coeff;
    let target = bound * 2 + 1;
    let pb = BigInt::from(p);
    let mut steps = 0u32;
    let mut modulus = pb.clone();
    while modulus <= target {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = multifactor_lift(f, &modular, p, steps);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in combinations(remaining.len(), size) {
            let lc_rest = rest.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lc_rest.clone()], |acc, &i| zmul(&acc, &remaining[i]));
            let cand = primitive(&zsym(&prod, &modulus));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = zdiv_exact(&rest, &cand) {
                out.push(cand);
                rest = primitive(&q);
                let mut keep = Vec::new();
                for (i, g) in remaining.drain(..).enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(rest);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Factor a nonconstant rational polynomial into primitive integer irreducibles
/// (positive leading coefficient) with multiplicities, sorted by (degree,
/// coefficients). The rational content is dropped.
pub fn factor_over_q(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    // Yun's squarefree decomposition over Q.
    let mut parts: Vec<(Poly, u32)> = Vec::new();
    let fm = f.monic();
    let d = fm.derivative();
    let mut a = fm.gcd(&d);
    let mut b = fm.div_rem(&a).0;
    let mut c = d.div_rem(&a).0;
    let mut dd = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        a = b.gcd(&dd);
        if a.degree().unwrap_or(0) > 0 {
            parts.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        c = dd.div_rem(&a).0;
        dd = &c - &b.derivative();
        i += 1;
    }
    let mut out = Vec::new();
    for (sq, mult) in parts {
        let den = sq.denominator_lcm();
        let ints: Vec<BigInt> = sq
            .scale(&BigRational::from_integer(den))
            .to_integer_coeffs()
            .unwrap();
        for g in zassenhaus(&primitive(&ints)) {
            out.push((Poly::from_bigints(&g), mult));
        }
    }
    out.sort_by(|x, y| {
        let kx = (x.0.degree(), x.0.coeffs().to_vec());
        let ky = (y.0.degree(), y.0.coeffs().to_vec());
        kx.cmp(&ky)
    });
    Ok(out)
}

pub fn is_irreducible_over_q(f: &Poly) -> Result<bool> {
    let fs = factor_over_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}
