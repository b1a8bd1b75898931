//! Polynomials and linear algebra over a prime field F_p, p < 2^63.
//!
//! Factorization runs squarefree decomposition, then distinct-degree
//! splitting, then Berlekamp (p < 100) or seeded Cantor-Zassenhaus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::is_prime_u64;
use super::poly::Poly;
use crate::error::{Error, Result};

const BERLEKAMP_LIMIT: u64 = 100;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduce a big integer into `[0, p)`.
pub fn reduce(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Polynomial over F_p, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    /// Reduce a rational polynomial with p-integral coefficients.
    pub fn from_poly(f: &Poly, p: u64) -> Result<Self> {
        let pb = BigInt::from(p);
        let mut c = Vec::with_capacity(f.coeffs().len());
        for a in f.coeffs() {
            if (a.denom() % &pb).is_zero() {
                return Err(Error::Contract(format!(
                    "coefficient {} is not {}-integral",
                    a, p
                )));
            }
            let num = reduce(a.numer(), p);
            let den = reduce(a.denom(), p);
            c.push(mul_mod(num, inv_mod(den, p), p));
        }
        Ok(FpPoly::new(p, c))
    }

    pub fn from_ints(c: &[BigInt], p: u64) -> Self {
        FpPoly::new(p, c.iter().map(|a| reduce(a, p)).collect())
    }

    /// Integer lift with coefficients in `[0, p)`.
    pub fn lift(&self) -> Vec<BigInt> {
        self.c.iter().map(|&a| BigInt::from(a)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, k, self.p)).collect())
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| {
                    (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| {
                    (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0))
                        % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        FpPoly::new(p, out.into_iter().map(|v| v as u64).collect())
    }

    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.deg();
        if self.c.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                let t = mul_mod(c, dc, p);
                r[i - dd + j] = (r[i - dd + j] + p - t) % p;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, g monic.
    pub fn xgcd(&self, o: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod(a, (i as u64) % p, p))
                .collect(),
        )
    }

    pub fn pow_mod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + c) % self.p;
        }
        acc
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if p >= 1 << 63 {
        return Err(Error::ModulusTooLarge(p.to_string()));
    }
    Ok(())
}

/// Convert a big prime to a word-size modulus.
pub fn word_prime(p: &BigInt) -> Result<u64> {
    let w = p
        .to_u64()
        .filter(|&w| w < 1 << 63)
        .ok_or_else(|| Error::ModulusTooLarge(p.to_string()))?;
    check_prime(w)?;
    Ok(w)
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.p as usize;
    // Over F_p, a^p = a, so coefficients stay; exponents divide by p.
    let c: Vec<u64> = f.c.iter().step_by(p).copied().collect();
    FpPoly::new(f.p, c)
}

/// Squarefree decomposition of a monic polynomial: list of (factor, multiplicity).
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(f)) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.deg() > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.deg() > 0 {
            out.push((g.clone(), d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest.monic(), dr));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting for odd p.
fn equal_degree_cz(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let p = f.p;
    if f.deg() == d {
        return vec![f.monic()];
    }
    let n = f.deg();
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let g = f.gcd(&a);
        let split = if g.deg() > 0 && g.deg() < n {
            g
        } else {
            // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
            let mut frob = a.rem(f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p as u128, f);
                norm = norm.mul(&frob).rem(f);
            }
            let b = norm.pow_mod(((p - 1) / 2) as u128, f).sub(&FpPoly::one(p));
            let g = f.gcd(&b);
            if g.deg() == 0 || g.deg() == n {
                continue;
            }
            g
        };
        let other = f.div_rem(&split).0;
        let mut out = equal_degree_cz(&split, d, rng);
        out.extend(equal_degree_cz(&other.monic(), d, rng));
        return out;
    }
}

/// Nullspace basis of a matrix over F_p (rows x cols, row-major), vectors of length cols.
pub fn kernel_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let k = a[i][c];
                for j in 0..cols {
                    let t = mul_mod(k, a[r][j], p);
                    a[i][j] = (a[i][j] + p - t) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - a[i][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Berlekamp splitting of a squarefree monic polynomial.
fn berlekamp(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let n = f.deg();
    if n <= 1 {
        return vec![f.clone()];
    }
    // Columns of Q - I: x^(p*i) mod f for i < n.
    let xp = FpPoly::x(p).pow_mod(p as u128, f);
    let mut rows = vec![vec![0u64; n]; n];
    let mut cur = FpPoly::one(p);
    for i in 0..n {
        for (j, row) in rows.iter_mut().enumerate() {
            row[i] = cur.c.get(j).copied().unwrap_or(0);
        }
        rows[i][i] = (rows[i][i] + p - 1) % p;
        cur = cur.mul(&xp).rem(f);
    }
    let kernel = kernel_mod_p(&rows, n, p);
    let k = kernel.len();
    let mut factors = vec![f.clone()];
    if k == 1 {
        return factors;
    }
    for v in kernel.iter() {
        let vp = FpPoly::new(p, v.clone());
        if vp.deg() == 0 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.deg() <= 1 {
                next.push(g);
                continue;
            }
            let mut rest = g.clone();
            for s in 0..p {
                if rest.deg() <= 1 {
                    break;
                }
                let h = rest.gcd(&vp.sub(&FpPoly::new(p, vec![s])));
                if h.deg() > 0 && h.deg() < rest.deg() {
                    rest = rest.div_rem(&h).0.monic();
                    next.push(h);
                }
            }
            next.push(rest);
        }
        factors = next;
        if factors.len() == k {
            break;
        }
    }
    factors
}

/// Factor `f` modulo the prime `p` into monic irreducibles with multiplicity,
/// sorted by (degree, coefficients).
pub fn factor_mod_p(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    let p = f.p;
    check_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroModP(p.to_string()));
    }
    let f = f.monic();
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc2a5_0000 ^ p);
    for (sq, mult) in squarefree_decomposition(&f) {
        for (part, d) in distinct_degree(&sq) {
            let pieces = if p < BERLEKAMP_LIMIT {
                berlekamp(&part)
            } else {
                equal_degree_cz(&part, d, &mut rng)
            };
            for g in pieces {
                out.push((g.monic(), mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0.c, a.1).cmp(&(b.0.deg(), &b.0.c, b.1)));
    Ok(out)
}

/// Factor a rational polynomial (p-integral, nonzero mod p) modulo p.
pub fn factor_poly_mod_p(f: &Poly, p: u64) -> Result<Vec<(FpPoly, u32)>> {
    check_prime(p)?;
    factor_mod_p(&FpPoly::from_poly(f, p)?)
}
