//! Number fields `Q[x]/(f)` with their maximal orders.

pub mod embed;
pub mod order;
pub mod splitting;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::fp::FpPoly;
use crate::arith::integer::{factor_integer, primes_up_to, valuation, FactorEffort};
use crate::arith::zfactor::is_irreducible_over_q;
use crate::arith::{sturm_signature, IntMatrix, Poly};
use crate::error::{Error, Result};

pub use embed::Embedding;
pub use order::Order;
pub use splitting::{prime_decomposition, PrimeIdealData};

#[derive(Clone, Debug)]
pub struct NumberField {
    poly: Poly,
    order: Order,
    poly_disc: BigInt,
    field_disc: BigInt,
    signature: (usize, usize),
    embedding: Embedding,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Build the field and its maximal order. `f` must be monic, integral
    /// and irreducible.
    pub fn new(f: &Poly) -> Result<NumberField> {
        maximal_order(f)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.order.degree()
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn field_disc(&self) -> &BigInt {
        &self.field_disc
    }

    /// `[O_K : Z[theta]]`
    pub fn index(&self) -> BigInt {
        self.order.index()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Integral basis as rows over the power basis, with common denominator.
    pub fn integral_basis(&self) -> (&IntMatrix, &BigInt) {
        (&self.order.num, &self.order.den)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn is_p_maximal(&self, p: &BigInt) -> Result<bool> {
        self.order.is_p_maximal(p)
    }

    pub fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree()];
        let mut p = vec![BigRational::zero(); self.degree()];
        p[0] = BigRational::one();
        for (x, c) in v.iter_mut().zip(self.order.power_to_coords(&p)) {
            *x = c.to_integer();
        }
        v
    }

    /// Basis coordinates of a power-basis element (rational in general).
    pub fn to_coords(&self, power: &[BigRational]) -> Vec<BigRational> {
        self.order.power_to_coords(power)
    }

    pub fn to_power(&self, coords: &[BigRational]) -> Vec<BigRational> {
        self.order.coords_to_power(coords)
    }

    /// Coordinates of `theta^k` reduced into the basis; integral.
    pub fn theta_power(&self, k: usize) -> Vec<BigInt> {
        let n = self.degree();
        let mut p = vec![BigRational::zero(); n];
        if k < n {
            p[k] = BigRational::one();
        } else {
            let mut acc = vec![BigRational::zero(); n];
            acc[0] = BigRational::one();
            let mut th = vec![BigRational::zero(); n];
            if n > 1 {
                th[1] = BigRational::one();
            } else {
                th[0] = -BigRational::from_integer(self.order.poly[0].clone());
            }
            for _ in 0..k {
                acc = order::mul_power(&acc, &th, &self.order.poly);
            }
            p = acc;
        }
        self.order
            .power_to_coords(&p)
            .into_iter()
            .map(|c| c.to_integer())
            .collect()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.order.mul_coords(a, b)
    }

    /// Matrix of multiplication by `a`: row i holds `a * omega_i`.
    pub fn mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        let n = self.degree();
        let rows = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                self.mul(a, &e)
            })
            .collect();
        IntMatrix::from_rows(n, rows)
    }

    pub fn norm(&self, a: &[BigInt]) -> BigInt {
        self.mult_matrix(a).det()
    }

    pub fn trace(&self, a: &[BigInt]) -> BigInt {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m.get(i, i).clone()).sum()
    }

    /// Norm of an arbitrary power-basis element: `Res(f, a)`.
    pub fn norm_power(&self, a: &[BigRational]) -> BigRational {
        self.poly.resultant(&Poly::new(a.to_vec()))
    }

    /// Primes up to the Minkowski bound.
    pub fn factor_base_primes(&self) -> Vec<u64> {
        let b = minkowski_bound(self);
        let limit = b.floor().to_integer().to_u64().unwrap_or(u64::MAX);
        primes_up_to(limit)
    }
}

/// Round-2 maximal order of `Q[x]/(f)`.
pub fn maximal_order(f: &Poly) -> Result<NumberField> {
    let coeffs = f.monic_integer_coeffs()?;
    if !is_irreducible_over_q(f)? {
        return Err(Error::Reducible(f.to_string()));
    }
    let poly_disc = f.discriminant()?.to_integer();
    let signature = sturm_signature(f)?;
    let mut order = Order::equation_order(&coeffs);
    let fac = factor_integer(&poly_disc, &FactorEffort::default())?;
    if !fac.is_complete() {
        return Err(Error::Unfactored(poly_disc.to_string()));
    }
    for (p, e) in &fac.factors {
        if *e < 2 || dedekind_p_maximal(&coeffs, p)? {
            continue;
        }
        while let Some(bigger) = order.enlarge_at(p)? {
            order = bigger;
        }
    }
    let index = order.index();
    let field_disc = &poly_disc / (&index * &index);
    let basis_power: Vec<Vec<f64>> = order
        .num
        .row_vecs()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::new(x.clone(), order.den.clone()).to_f64().unwrap_or(0.0))
                .collect()
        })
        .collect();
    let embedding = Embedding::new(&coeffs, &basis_power, signature.0);
    Ok(NumberField {
        poly: f.clone(),
        order,
        poly_disc,
        field_disc,
        signature,
        embedding,
    })
}

/// Dedekind's criterion: is `Z[theta]` maximal at p?
pub fn dedekind_p_maximal(coeffs: &[BigInt], p: &BigInt) -> Result<bool> {
    let pw = crate::arith::fp::word_prime(p)?;
    let f = Poly::from_bigints(coeffs);
    let fbar = FpPoly::from_ints(coeffs, pw);
    let factors = crate::arith::fp::factor_mod_p(&fbar)?;
    let mut g = FpPoly::one(pw);
    let mut h = FpPoly::one(pw);
    for (gi, e) in &factors {
        g = g.mul(gi);
        for _ in 1..*e {
            h = h.mul(gi);
        }
    }
    let gz = Poly::from_bigints(&g.lift());
    let hz = Poly::from_bigints(&h.lift());
    let diff = &(&gz * &hz) - &f;
    let pr = BigRational::from_integer(p.clone());
    let big_f: Vec<BigInt> = diff.coeffs().iter().map(|c| (c / &pr).to_integer()).collect();
    let fb = FpPoly::from_ints(&big_f, pw);
    let d = fb.gcd(&g).gcd(&h);
    Ok(d.degree() == Some(0))
}

/// Rational upper bound for `n!/n^n (4/pi)^r2 sqrt|D|`, using
/// `pi > 103993/33102`.
pub fn minkowski_bound(k: &NumberField) -> BigRational {
    let n = k.degree();
    let r2 = k.signature.1;
    let mut b = BigRational::one();
    for i in 1..=n {
        b *= BigRational::new(BigInt::from(i), BigInt::from(n));
    }
    let four_over_pi = BigRational::new(BigInt::from(4 * 33102), BigInt::from(103993));
    for _ in 0..r2 {
        b *= &four_over_pi;
    }
    b * sqrt_upper(&k.field_disc.abs())
}

/// `ceil(sqrt(d) * 10^6) / 10^6`
fn sqrt_upper(d: &BigInt) -> BigRational {
    let scale = BigInt::from(10u64.pow(6));
    let scaled = d * &scale * &scale;
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    BigRational::new(r, scale)
}

/// Exponent of p in the field discriminant.
pub fn disc_valuation(k: &NumberField, p: &BigInt) -> u32 {
    valuation(&k.field_disc, p)
}

/// `true` if p ramifies in K.
pub fn is_ramified(k: &NumberField, p: &BigInt) -> bool {
    k.field_disc.is_multiple_of(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(c: &[i64]) -> NumberField {
        NumberField::new(&Poly::from_ints(c)).unwrap()
    }

    #[test]
    fn quadratic_discriminants() {
        assert_eq!(*field(&[-5, 0, 1]).field_disc(), BigInt::from(5));
        assert_eq!(*field(&[1, 0, 1]).field_disc(), BigInt::from(-4));
        assert_eq!(*field(&[23, 0, 1]).field_disc(), BigInt::from(-23));
        assert_eq!(*field(&[12, 0, 1]).field_disc(), BigInt::from(-3));
        assert_eq!(field(&[12, 0, 1]).index(), BigInt::from(4));
    }

    #[test]
    fn cyclotomic_and_pure() {
        let k = field(&[1, 1, 1, 1, 1]);
        assert_eq!(*k.field_disc(), BigInt::from(125));
        assert_eq!(k.signature(), (0, 2));
        let k = field(&[-212, 0, 0, 0, 0, 1]);
        assert_eq!(k.signature(), (1, 2));
        assert!(k.is_p_maximal(&BigInt::from(2)).unwrap());
        assert!(k.is_p_maximal(&BigInt::from(5)).unwrap());
    }

    #[test]
    fn non_monic_and_reducible() {
        assert!(matches!(
            NumberField::new(&Poly::from_ints(&[1, 0, 2])),
            Err(Error::NotMonicIntegral(_))
        ));
        assert!(matches!(
            NumberField::new(&Poly::from_ints(&[-4, 0, 1])),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn norms() {
        let k = field(&[1, 0, 1]);
        let one_plus_i = k.to_coords(&[BigRational::one(), BigRational::one()]);
        let c: Vec<BigInt> = one_plus_i.iter().map(|x| x.to_integer()).collect();
        assert_eq!(k.norm(&c), BigInt::from(2));
        assert_eq!(
            k.norm_power(&[BigRational::one(), BigRational::one()]),
            BigRational::from_integer(BigInt::from(2))
        );
        assert_eq!(k.trace(&c), BigInt::from(2));
    }

    #[test]
    fn dedekind_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(!dedekind_p_maximal(&ints(&[-5, 0, 1]), &BigInt::from(2)).unwrap());
        assert!(dedekind_p_maximal(&ints(&[1, 0, 1]), &BigInt::from(2)).unwrap());
        // theta^3 / 2 is integral when theta^5 = 4 * 53
        assert!(!dedekind_p_maximal(&ints(&[-212, 0, 0, 0, 0, 1]), &BigInt::from(2)).unwrap());
        assert!(dedekind_p_maximal(&ints(&[-212, 0, 0, 0, 0, 1]), &BigInt::from(53)).unwrap());
    }

    #[test]
    fn minkowski() {
        let k = field(&[1, 0, 1]);
        let b = minkowski_bound(&k);
        // (1/2)(4/pi)*2 ~ 1.2732
        assert!(b > BigRational::new(BigInt::from(12732), BigInt::from(10000)));
        assert!(b < BigRational::new(BigInt::from(12733), BigInt::from(10000)));
        assert!(k.factor_base_primes().is_empty());
    }
}
