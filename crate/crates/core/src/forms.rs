//! Primitive binary quadratic forms `a x^2 + b xy + c y^2`: reduction,
//! cycles of reduced indefinite forms, and Dirichlet composition.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// `(x, y) = (p X + q Y, r X + s Y)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            p: BigInt::one(),
            q: BigInt::zero(),
            r: BigInt::zero(),
            s: BigInt::one(),
        }
    }

    fn then(&self, o: &Transform) -> Transform {
        Transform {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }

    fn s_map() -> Transform {
        Transform {
            p: BigInt::zero(),
            q: -BigInt::one(),
            r: BigInt::one(),
            s: BigInt::zero(),
        }
    }

    fn t_map(k: BigInt) -> Transform {
        Transform {
            p: BigInt::one(),
            q: k,
            r: BigInt::zero(),
            s: BigInt::one(),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// `floor(sqrt(n))` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// `x^2 + (D mod 2) xy + ((D mod 2) - D)/4 y^2`
    pub fn principal(d: &BigInt) -> Form {
        let b = if d.is_odd() { BigInt::one() } else { BigInt::zero() };
        let c = (&b * &b - d) / 4;
        Form::new(1, b, c)
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn apply(&self, m: &Transform) -> Form {
        let a = self.eval(&m.p, &m.r);
        let c = self.eval(&m.q, &m.s);
        let b = BigInt::from(2) * &self.a * &m.p * &m.q
            + &self.b * (&m.p * &m.s + &m.q * &m.r)
            + BigInt::from(2) * &self.c * &m.r * &m.s;
        Form { a, b, c }
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn inverse(&self) -> Form {
        Form::new(self.a.clone(), -&self.b, self.c.clone())
    }

    fn s_step(&self) -> Form {
        Form::new(self.c.clone(), -&self.b, self.a.clone())
    }

    fn t_step(&self, k: &BigInt) -> Form {
        Form::new(
            self.a.clone(),
            &self.b + BigInt::from(2) * &self.a * k,
            &self.a * k * k + &self.b * k + &self.c,
        )
    }

    pub fn is_reduced_definite(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a
            && self.a <= self.c
            && ((ab != self.a && self.a != self.c) || !self.b.is_negative())
    }

    /// Reduce a positive definite form, tracking the SL2 transform.
    pub fn reduce_definite(&self) -> (Form, Transform) {
        debug_assert!(self.a.is_positive() && self.disc().is_negative());
        let mut f = self.clone();
        let mut m = Transform::identity();
        let two_a = |f: &Form| BigInt::from(2) * &f.a;
        loop {
            // bring b into (-a, a]
            let k = {
                let ta = two_a(&f);
                let shifted = &f.a - &f.b;
                shifted.div_floor(&ta)
            };
            if !k.is_zero() {
                f = f.t_step(&k);
                m = m.then(&Transform::t_map(k));
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                f = f.s_step();
                m = m.then(&Transform::s_map());
                continue;
            }
            break;
        }
        (f, m)
    }

    /// `0 < b < sqrt D` and `sqrt D - b < 2|a| < sqrt D + b`.
    pub fn is_reduced_indefinite(&self, s: &BigInt) -> bool {
        let two_a = BigInt::from(2) * self.a.abs();
        self.b.is_positive() && &self.b <= s && (&two_a + &self.b) > *s && (&two_a - &self.b) <= *s
    }

    /// One rho step: `(a, b, c) -> (c, b', *)` with `b' = -b mod 2c` normalized.
    pub fn rho(&self, s: &BigInt) -> (Form, Transform) {
        let cabs = self.c.abs();
        let two_c = BigInt::from(2) * &cabs;
        let minus_b = -&self.b;
        let target = if &cabs > s {
            // b' in (-|c|, |c|]
            let r = (&minus_b + &cabs - BigInt::one()).mod_floor(&two_c);
            &r - &cabs + BigInt::one()
        } else {
            // largest b' <= s with b' = -b mod 2|c|
            s - (s - &minus_b).mod_floor(&two_c)
        };
        let diff = &target - &minus_b;
        debug_assert!((&diff % &two_c).is_zero());
        // S then T^k on (c, -b, a): b' = -b + 2ck
        let k = &diff / (BigInt::from(2) * &self.c);
        let f = self.s_step().t_step(&k);
        let m = Transform::s_map().then(&Transform::t_map(k));
        (f, m)
    }

    /// Reduce an indefinite form (nonsquare discriminant) with transform.
    pub fn reduce_indefinite(&self) -> (Form, Transform) {
        let s = isqrt(&self.disc());
        let mut f = self.clone();
        let mut m = Transform::identity();
        while !f.is_reduced_indefinite(&s) {
            let (g, t) = f.rho(&s);
            f = g;
            m = m.then(&t);
        }
        (f, m)
    }

    /// The cycle of reduced forms SL2-equivalent to `self`, each with the
    /// transform from `self`.
    pub fn cycle(&self) -> Vec<(Form, Transform)> {
        let s = isqrt(&self.disc());
        let (start, m0) = self.reduce_indefinite();
        let mut out = vec![(start.clone(), m0.clone())];
        let mut f = start.clone();
        let mut m = m0;
        loop {
            let (g, t) = f.rho(&s);
            m = m.then(&t);
            if g == start {
                break;
            }
            out.push((g.clone(), m.clone()));
            f = g;
        }
        out
    }

    /// Canonical representative of the class. Definite forms: the reduced
    /// form. Indefinite forms: the least form with `a > 0` over the cycles
    /// of `self` and `(-a, b, -c)` (wide equivalence).
    pub fn canonical(&self) -> Form {
        if self.disc().is_negative() {
            return self.reduce_definite().0;
        }
        let neg = Form::new(-&self.a, self.b.clone(), -&self.c);
        self.cycle()
            .into_iter()
            .chain(neg.cycle())
            .map(|(f, _)| f)
            .filter(|f| f.a.is_positive())
            .min()
            .expect("cycle contains forms with a > 0")
    }

    /// An `(x, y)` with `f(x, y) = +-1`, if the form represents a unit.
    pub fn represents_unit(&self) -> Option<(BigInt, BigInt)> {
        if self.disc().is_negative() {
            let (f, m) = self.reduce_definite();
            return f.a.is_one().then(|| (m.p, m.r));
        }
        for (f, m) in self.cycle() {
            if f.a.abs().is_one() {
                return Some((m.p, m.r));
            }
        }
        None
    }

    /// Dirichlet composition (same discriminant, primitive forms), unreduced.
    pub fn compose(&self, o: &Form) -> Form {
        let d = self.disc();
        let s = (&self.b + &o.b) / 2;
        let (g1, u1, v1) = ext_gcd(&self.a, &o.a);
        let (g, w0, w) = ext_gcd(&g1, &s);
        // g = w0 (u1 a1 + v1 a2) + w s
        let v = &w0 * &v1;
        let a3 = &self.a * &o.a / (&g * &g);
        let two_a3 = BigInt::from(2) * &a3;
        let b3 = (&o.b + BigInt::from(2) * (&o.a / &g) * (&v * (&s - &o.b) - &w * &o.c))
            .mod_floor(&two_a3);
        let c3 = (&b3 * &b3 - &d) / (BigInt::from(4) * &a3);
        let _ = u1;
        Form::new(a3, b3, c3)
    }

    /// Composition followed by canonicalization.
    pub fn mul_class(&self, o: &Form) -> Form {
        self.compose(o).canonical()
    }

    pub fn pow_class(&self, mut e: u64) -> Form {
        let mut acc = Form::principal(&self.disc()).canonical();
        let mut base = self.canonical();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_class(&base);
            }
            base = base.mul_class(&base);
            e >>= 1;
        }
        acc
    }
}

/// `(g, x, y)` with `g = x a + y b >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// All reduced positive definite primitive forms of discriminant `d < 0`.
pub fn reduced_definite_forms(d: &BigInt) -> Vec<Form> {
    let mut out = Vec::new();
    let limit = isqrt(&(d.abs() / 3));
    let mut a = BigInt::one();
    while a <= limit {
        let mut b = -&a + BigInt::one();
        while b <= a {
            let num = &b * &b - d;
            let four_a = BigInt::from(4) * &a;
            if (&num % &four_a).is_zero() {
                let f = Form::new(a.clone(), b.clone(), num / four_a);
                if f.is_primitive() && f.is_reduced_definite() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    out
}

/// All reduced primitive indefinite forms of nonsquare discriminant `d > 0`.
pub fn reduced_indefinite_forms(d: &BigInt) -> Vec<Form> {
    let s = isqrt(d);
    let mut out = Vec::new();
    let mut b = BigInt::one();
    while b <= s {
        let num = &b * &b - d;
        if (&num % BigInt::from(4)).is_zero() {
            let ac: BigInt = -(num / BigInt::from(4));
            // |a| ranges over divisors of ac with sqrt D - b < 2|a| < sqrt D + b
            let mut a = BigInt::one();
            while BigInt::from(2) * &a <= &s + &b {
                if (&ac % &a).is_zero() {
                    for sa in [a.clone(), -&a] {
                        let f = Form::new(sa.clone(), b.clone(), -(&ac / &sa));
                        if f.is_primitive() && f.is_reduced_indefinite(&s) {
                            out.push(f);
                        }
                    }
                }
                a += 1;
            }
        }
        b += 1;
    }
    out.sort();
    out
}
