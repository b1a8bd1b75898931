//! Fractional ideals of a maximal order, stored as `(1/den) * HNF` over the
//! integral basis, and principality testing.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{HnfBasis, IntMatrix};
use crate::error::{Error, Result};
use crate::field::{NumberField, PrimeIdealData};
use crate::forms::Form;

#[derive(Clone)]
pub struct FracIdeal {
    field: Arc<NumberField>,
    /// Upper-triangular HNF rows in integral-basis coordinates.
    num: IntMatrix,
    den: BigInt,
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && *self.field == *other.field
    }
}

impl Eq for FracIdeal {}

impl fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FracIdeal(1/{} * {:?})", self.den, self.num)
    }
}

fn lattice_with_multiple(n: usize, multiple: &BigInt) -> HnfBasis {
    let mut h = HnfBasis::new(n);
    if !multiple.is_zero() {
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = multiple.abs();
            h.insert(v);
        }
    }
    h
}

impl FracIdeal {
    fn from_lattice(field: &Arc<NumberField>, lattice: HnfBasis, den: BigInt) -> Result<Self> {
        if !lattice.is_full_rank() {
            return Err(Error::ZeroIdeal);
        }
        let num = lattice.to_matrix();
        let g = num.row_vecs().iter().flatten().fold(den.clone(), |g, x| g.gcd(x));
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            let n = num.cols();
            (
                IntMatrix::from_rows(
                    n,
                    num.row_vecs()
                        .iter()
                        .map(|r| r.iter().map(|x| x / &g).collect())
                        .collect(),
                ),
                den / &g,
            )
        };
        Ok(FracIdeal {
            field: field.clone(),
            num,
            den,
        })
    }

    /// The module generated by `gens * O_K`; generators in basis coordinates.
    pub fn from_generators(field: &Arc<NumberField>, gens: &[Vec<BigRational>]) -> Result<Self> {
        let den = gens
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        Self::from_integral_generators(field, &ints).map(|i| i.scaled_down(&den))
    }

    pub fn from_integral_generators(field: &Arc<NumberField>, gens: &[Vec<BigInt>]) -> Result<Self> {
        let n = field.degree();
        let nonzero: Vec<&Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        if nonzero.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        // The norm of any generator lies in the ideal and bounds HNF entries.
        let multiple = nonzero
            .iter()
            .map(|g| field.norm(g).abs())
            .min()
            .expect("nonempty");
        let mut lattice = lattice_with_multiple(n, &multiple);
        for g in nonzero {
            for row in field.mult_matrix(g).into_rows() {
                lattice.insert(row);
            }
        }
        Self::from_lattice(field, lattice, BigInt::one())
    }

    pub fn principal(field: &Arc<NumberField>, a: &[BigInt]) -> Result<Self> {
        Self::from_integral_generators(field, &[a.to_vec()])
    }

    pub fn unit(field: &Arc<NumberField>) -> Self {
        let n = field.degree();
        FracIdeal {
            field: field.clone(),
            num: IntMatrix::identity(n),
            den: BigInt::one(),
        }
    }

    /// The rational ideal `(q)`.
    pub fn rational(field: &Arc<NumberField>, q: &BigInt) -> Result<Self> {
        let n = field.degree();
        Self::from_lattice(field, lattice_with_multiple(n, q), BigInt::one())
    }

    pub fn from_prime(field: &Arc<NumberField>, p: &PrimeIdealData) -> Result<Self> {
        let n = field.degree();
        let mut lattice = lattice_with_multiple(n, &p.p);
        for row in field.mult_matrix(&p.generator).into_rows() {
            lattice.insert(row);
        }
        Self::from_lattice(field, lattice, BigInt::one())
    }

    /// Rebuild a stored ideal; the rows must already be its canonical HNF
    /// and span an O_K-module.
    pub fn from_hnf_rows(field: &Arc<NumberField>, rows: &[Vec<BigInt>], den: &BigInt) -> Result<Self> {
        let n = field.degree();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) || !den.is_positive() {
            return Err(Error::Contract(format!("ideal record is not a {}x{} HNF", n, n)));
        }
        let mut lattice = HnfBasis::new(n);
        for r in rows {
            lattice.insert(r.clone());
        }
        let ideal = Self::from_lattice(field, lattice, den.clone())?;
        if ideal.num.row_vecs() != rows || &ideal.den != den || !ideal.is_module_closed() {
            return Err(Error::Contract("ideal record is not a canonical O_K-ideal".to_string()));
        }
        Ok(ideal)
    }

    fn scaled_down(mut self, d: &BigInt) -> Self {
        if d.is_one() {
            return self;
        }
        let g = self.num.row_vecs().iter().flatten().fold(d.clone(), |g, x| g.gcd(x));
        let n = self.num.cols();
        self.num = IntMatrix::from_rows(
            n,
            self.num
                .row_vecs()
                .iter()
                .map(|r| r.iter().map(|x| x / &g).collect())
                .collect(),
        );
        self.den = &self.den * d / &g;
        self
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.den.is_one() && self.num == IntMatrix::identity(self.field.degree())
    }

    /// `|det(num)| / den^n`
    pub fn norm(&self) -> BigRational {
        let n = self.field.degree();
        BigRational::new(self.num.det().abs(), num_traits::pow(self.den.clone(), n))
    }

    /// Norm of the numerator lattice; equals the norm for integral ideals.
    fn num_norm(&self) -> BigInt {
        self.num.row_vecs().iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    pub fn contains(&self, a: &[BigRational]) -> bool {
        let scaled: Vec<BigRational> = a
            .iter()
            .map(|x| x * BigRational::from_integer(self.den.clone()))
            .collect();
        if !scaled.iter().all(|x| x.is_integer()) {
            return false;
        }
        let v: Vec<BigInt> = scaled.iter().map(|x| x.to_integer()).collect();
        self.lattice().contains(&v)
    }

    fn lattice(&self) -> HnfBasis {
        let mut h = HnfBasis::new(self.num.cols());
        for r in self.num.row_vecs() {
            h.insert(r.clone());
        }
        h
    }

    /// Closure under multiplication by every integral basis element.
    pub fn is_module_closed(&self) -> bool {
        let n = self.field.degree();
        let lat = self.lattice();
        (0..n).all(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            self.num
                .row_vecs()
                .iter()
                .all(|r| lat.contains(&self.field.mul(&e, r)))
        })
    }

    pub fn mul(&self, o: &FracIdeal) -> Result<FracIdeal> {
        if *self.field != *o.field {
            return Err(Error::FieldMismatch);
        }
        let n = self.field.degree();
        let mut lattice = lattice_with_multiple(n, &(self.num_norm() * o.num_norm()));
        for a in self.num.row_vecs() {
            for b in o.num.row_vecs() {
                lattice.insert(self.field.mul(a, b));
            }
        }
        Self::from_lattice(&self.field, lattice, &self.den * &o.den)
    }

    pub fn pow(&self, mut e: u64) -> FracIdeal {
        let mut acc = FracIdeal::unit(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Z-basis rows in integral-basis coordinates (rational).
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.num
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Binary form `N(x alpha + y beta) / N(I)` of an integral ideal in a
    /// quadratic field, with `(alpha, beta)` the HNF rows.
    pub fn quadratic_form(&self) -> Form {
        assert_eq!(self.field.degree(), 2);
        assert!(self.is_integral());
        let rows = self.num.row_vecs();
        let (al, be) = (&rows[0], &rows[1]);
        let sum: Vec<BigInt> = al.iter().zip(be).map(|(x, y)| x + y).collect();
        let (na, nb, ns) = (self.field.norm(al), self.field.norm(be), self.field.norm(&sum));
        let nrm = self.num_norm();
        let cross = &ns - &na - &nb;
        Form::new(na / &nrm, cross / &nrm, nb / &nrm)
    }

    /// Ideal `a Z + ((-b + sqrt D)/2) Z` attached to a form, in a quadratic field.
    pub fn from_form(field: &Arc<NumberField>, f: &Form) -> Result<FracIdeal> {
        assert_eq!(field.degree(), 2);
        // omega = second basis element, omega^2 + u omega + v = 0, sqrt D = 2 omega + u
        let omega = vec![BigInt::zero(), BigInt::one()];
        let u = -field.trace(&omega);
        let half: BigInt = (&u - &f.b) / 2;
        let a = f.a.abs();
        let gens = vec![vec![a, BigInt::zero()], vec![half, BigInt::one()]];
        let n = 2;
        let mut lattice = lattice_with_multiple(n, &f.a);
        for g in &gens {
            lattice.insert(g.clone());
        }
        let lattice_ideal = Self::from_lattice(field, lattice, BigInt::one())?;
        debug_assert!(lattice_ideal.is_module_closed());
        Ok(lattice_ideal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Principality {
    /// Generator in integral-basis coordinates.
    Principal { witness: Vec<String> },
    Nonprincipal { proof: String },
    Unknown { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalityResult {
    pub verdict: Principality,
    /// Box radius searched (0 for exact quadratic verdicts).
    pub effort: u64,
}

impl PrincipalityResult {
    pub fn is_principal(&self) -> bool {
        matches!(self.verdict, Principality::Principal { .. })
    }

    pub fn is_nonprincipal(&self) -> bool {
        matches!(self.verdict, Principality::Nonprincipal { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.verdict, Principality::Unknown { .. })
    }

    pub fn witness(&self) -> Option<Vec<BigInt>> {
        match &self.verdict {
            Principality::Principal { witness } => {
                Some(witness.iter().map(|s| s.parse().expect("integer text")).collect())
            }
            _ => None,
        }
    }
}

fn principal_with(witness: &[BigInt], effort: u64) -> PrincipalityResult {
    PrincipalityResult {
        verdict: Principality::Principal {
            witness: witness.iter().map(|x| x.to_string()).collect(),
        },
        effort,
    }
}

/// Principality of an integral ideal. Quadratic fields get an exact verdict
/// from form reduction; higher degree searches the box of radius `radius`
/// over an LLL-reduced basis of the ideal for an element of norm `+-N(A)`.
pub fn is_principal(a: &FracIdeal, radius: u64) -> PrincipalityResult {
    assert!(a.is_integral(), "scale the ideal to an integral one first");
    let k = a.field();
    let n = k.degree();
    if a.is_unit_ideal() {
        return principal_with(&k.one(), 0);
    }
    if n == 1 {
        return principal_with(&[a.num.get(0, 0).clone()], 0);
    }
    if n == 2 {
        let f = a.quadratic_form();
        let rows = a.num.row_vecs();
        return match f.represents_unit() {
            Some((x, y)) => {
                let w: Vec<BigInt> = rows[0]
                    .iter()
                    .zip(&rows[1])
                    .map(|(p, q)| &x * p + &y * q)
                    .collect();
                principal_with(&w, 0)
            }
            None => PrincipalityResult {
                verdict: Principality::Nonprincipal {
                    proof: format!("form {} represents neither 1 nor -1", f.canonical()),
                },
                effort: 0,
            },
        };
    }
    let target = a.num_norm();
    let rows = k.embedding().lll(a.num.row_vecs().to_vec());
    let rows = &rows;
    for r in 1..=radius as i64 {
        let width = (2 * r + 1) as u64;
        let total = width.pow(n as u32);
        for mut idx in 0..total {
            let mut x = Vec::with_capacity(n);
            let mut on_shell = false;
            for _ in 0..n {
                let c = (idx % width) as i64 - r;
                idx /= width;
                on_shell |= c.abs() == r;
                x.push(c);
            }
            if !on_shell {
                continue;
            }
            let mut g = vec![BigInt::zero(); n];
            for (xi, row) in x.iter().zip(rows) {
                if *xi != 0 {
                    for (gj, rj) in g.iter_mut().zip(row) {
                        *gj += rj * *xi;
                    }
                }
            }
            if k.norm(&g).abs() == target {
                return principal_with(&g, r as u64);
            }
        }
    }
    PrincipalityResult {
        verdict: Principality::Unknown { budget: radius },
        effort: radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::field::prime_decomposition;

    fn field(c: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new(&Poly::from_ints(c)).unwrap())
    }

    fn v(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ramified_prime_minus_21() {
        let k = field(&[21, 0, 1]);
        let p = FracIdeal::from_integral_generators(&k, &[v(&[3, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(p.norm(), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(p.pow(2), FracIdeal::rational(&k, &BigInt::from(3)).unwrap());
        assert!(is_principal(&p, 0).is_nonprincipal());
        assert!(is_principal(&p.pow(2), 0).is_principal());
    }

    #[test]
    fn unit_and_principal() {
        let k = field(&[2, 0, 1]);
        assert!(FracIdeal::principal(&k, &v(&[1, 0])).unwrap().is_unit_ideal());
        let s = FracIdeal::principal(&k, &v(&[0, 1])).unwrap();
        let r = is_principal(&s, 0);
        let w = r.witness().unwrap();
        assert_eq!(FracIdeal::principal(&k, &w).unwrap(), s);
        assert!(matches!(
            FracIdeal::from_integral_generators(&k, &[v(&[0, 0])]),
            Err(Error::ZeroIdeal)
        ));
    }

    #[test]
    fn minus_40_nonprincipal() {
        let k = field(&[10, 0, 1]);
        let p = FracIdeal::from_integral_generators(&k, &[v(&[2, 0]), v(&[0, 1])]).unwrap();
        assert!(is_principal(&p, 0).is_nonprincipal());
    }

    #[test]
    fn pure_quintic_ramified() {
        let k = field(&[-212, 0, 0, 0, 0, 1]);
        let theta = k.theta_power(1);
        let q = BigInt::from(53);
        let mut e = vec![BigInt::zero(); 5];
        e[0] = q.clone();
        let e = k.to_coords(&e.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>());
        let e: Vec<BigInt> = e.iter().map(|x| x.to_integer()).collect();
        let p = FracIdeal::from_integral_generators(&k, &[e, theta]).unwrap();
        let split = prime_decomposition(&k, &q).unwrap();
        assert_eq!(split.len(), 1);
        assert_eq!(FracIdeal::from_prime(&k, &split[0]).unwrap(), p);
        assert_eq!(p.pow(5), FracIdeal::rational(&k, &q).unwrap());
        assert!(p.is_module_closed());
    }

    #[test]
    fn form_round_trip() {
        let k = field(&[-5, 1, 1]); // x^2 + x - 5, disc 21
        let f = Form::principal(&BigInt::from(21));
        assert!(FracIdeal::from_form(&k, &f).unwrap().is_unit_ideal());
        let k = field(&[21, 0, 1]);
        let f = Form::new(3, 0, 7);
        let i = FracIdeal::from_form(&k, &f).unwrap();
        assert_eq!(i.norm(), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(i.quadratic_form().canonical(), f.canonical());
    }
}
