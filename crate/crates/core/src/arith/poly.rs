//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients, ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().map(int_rat).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&int_rat(x))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lc_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Resultant via the Euclidean remainder sequence over Q.
    pub fn resultant(&self, other: &Poly) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let mut f = self.clone();
        let mut g = other.clone();
        let mut acc = BigRational::one();
        loop {
            let m = f.degree().unwrap();
            let n = g.degree().unwrap();
            if n == 0 {
                return acc * num_traits::pow(g.leading(), m);
            }
            let r = f.rem(&g);
            if r.is_zero() {
                return BigRational::zero();
            }
            let k = r.degree().unwrap();
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(g.leading(), m - k);
            f = g;
            g = r;
        }
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigRational> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        Ok(sign * res / self.leading())
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Integer coefficients of a monic integer polynomial, or an error.
    pub fn monic_integer_coeffs(&self) -> Result<Vec<BigInt>> {
        match self.to_integer_coeffs() {
            Some(c) if self.is_monic() && self.degree().is_some() => Ok(c),
            _ => Err(Error::NotMonicIntegral(self.to_string())),
        }
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Parse comma-separated rationals in descending degree, e.g. `1,0,-1/2`.
    pub fn parse_descending(text: &str) -> std::result::Result<Poly, String> {
        let mut coeffs = Vec::new();
        for (i, piece) in text.split(',').enumerate() {
            let piece = piece.trim();
            coeffs.push(parse_rational(piece).ok_or_else(|| {
                format!("coefficient {} ({:?}) is not a rational number", i + 1, piece)
            })?);
        }
        coeffs.reverse();
        Ok(Poly::new(coeffs))
    }

    /// Inverse of [`Poly::parse_descending`].
    pub fn to_descending_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .rev()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    /// Human-readable, highest degree first: `x^2 - 2*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let shown = !(a.is_one() && i > 0);
            if shown {
                write!(f, "{}", a)?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if shown { "*" } else { "" })?,
                _ => write!(f, "{}x^{}", if shown { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Number of real roots of a squarefree polynomial (Sturm chain) and the
/// resulting signature `(r1, r2)` with `r1 + 2 r2 = deg`.
pub fn sturm_signature(f: &Poly) -> Result<(usize, usize)> {
    let n = f.degree().ok_or(Error::ConstantPolynomial)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(f.to_string()));
    }
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let len = chain.len();
        if chain[len - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[len - 2].rem(&chain[len - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    // Signs at +inf are signs of leading coefficients; at -inf flip for odd degree.
    let changes = |signs: Vec<i8>| {
        let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |c: &BigRational| -> i8 {
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_pos: Vec<i8> = chain.iter().map(|p| sign(&p.leading())).collect();
    let at_neg: Vec<i8> = chain
        .iter()
        .map(|p| {
            let s = sign(&p.leading());
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    let r1 = changes(at_neg) - changes(at_pos);
    Ok((r1, (n - r1) / 2))
}
