//! Orders in `Q[x]/(f)` given by a rational basis over the power basis, and
//! the Round-2 enlargement step at a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::fp::{kernel_mod_p, mul_mod, reduce};
use crate::arith::matrix::rat_inverse;
use crate::arith::{HnfBasis, IntMatrix};
use crate::error::{Error, Result};

/// `omega_i = (1/den) * sum_j num[i][j] theta^j`, lower triangular HNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    /// Integer coefficients of the monic defining polynomial, ascending.
    pub poly: Vec<BigInt>,
    pub num: IntMatrix,
    pub den: BigInt,
    /// `mult[i][j]` = coordinates of `omega_i * omega_j` in the basis.
    pub mult: Vec<Vec<Vec<BigInt>>>,
    /// Power coordinates -> basis coordinates (row vector times matrix).
    pub to_basis: Vec<Vec<BigRational>>,
}

/// Multiply two power-basis vectors modulo the monic polynomial.
pub fn mul_power(a: &[BigRational], b: &[BigRational], poly: &[BigInt]) -> Vec<BigRational> {
    let n = poly.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..prod.len()).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        // theta^k = -sum_{j<n} poly[j] theta^(k-n+j)
        for (j, pj) in poly.iter().take(n).enumerate() {
            prod[k - n + j] -= &c * BigRational::from_integer(pj.clone());
        }
    }
    prod.truncate(n);
    prod
}

/// Lower-triangular HNF: the row-style HNF taken with columns reversed.
pub fn hnf_lower(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let rev: Vec<Vec<BigInt>> = m
        .row_vecs()
        .iter()
        .map(|r| r.iter().rev().cloned().collect())
        .collect();
    let h = IntMatrix::from_rows(n, rev).hnf();
    let mut rows: Vec<Vec<BigInt>> = h
        .into_rows()
        .into_iter()
        .map(|r| r.into_iter().rev().collect())
        .collect();
    rows.reverse();
    IntMatrix::from_rows(n, rows)
}

impl Order {
    pub fn equation_order(poly: &[BigInt]) -> Order {
        let n = poly.len() - 1;
        Order::from_basis(poly, IntMatrix::identity(n), BigInt::one())
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Canonicalize (lower HNF, reduced denominator) and build tables.
    pub fn from_basis(poly: &[BigInt], num: IntMatrix, den: BigInt) -> Order {
        let n = poly.len() - 1;
        let mut num = hnf_lower(&num);
        let mut den = den;
        let g = num
            .row_vecs()
            .iter()
            .flatten()
            .fold(den.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            num = IntMatrix::from_rows(
                n,
                num.row_vecs()
                    .iter()
                    .map(|r| r.iter().map(|x| x / &g).collect())
                    .collect(),
            );
            den /= &g;
        }
        let basis: Vec<Vec<BigRational>> = num
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect())
            .collect();
        let to_basis = rat_inverse(&basis).expect("order basis is nonsingular");
        let mut order = Order {
            poly: poly.to_vec(),
            num,
            den,
            mult: Vec::new(),
            to_basis,
        };
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = mul_power(&basis[i], &basis[j], poly);
                let coords = order.power_to_coords(&prod);
                let ints: Vec<BigInt> = coords
                    .iter()
                    .map(|c| {
                        assert!(c.is_integer(), "basis is not closed under multiplication");
                        c.to_integer()
                    })
                    .collect();
                mult[i][j] = ints.clone();
                mult[j][i] = ints;
            }
        }
        order.mult = mult;
        order
    }

    pub fn power_to_coords(&self, v: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        (0..n)
            .map(|j| {
                v.iter()
                    .zip(self.to_basis.iter())
                    .fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j])
            })
            .collect()
    }

    pub fn coords_to_power(&self, c: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut out = vec![BigRational::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, x) in self.num.row(i).iter().enumerate() {
                out[j] += ci * BigRational::new(x.clone(), self.den.clone());
            }
        }
        out
    }

    /// Product of two integral elements in basis coordinates.
    pub fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        *o += &ab * m;
                    }
                }
            }
        }
        out
    }

    fn mul_coords_mod(&self, a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = self.degree();
        let mut out = vec![0u64; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let ab = mul_mod(a[i], b[j], p);
                for k in 0..n {
                    let m = reduce(&self.mult[i][j][k], p);
                    out[k] = (out[k] + mul_mod(ab, m, p)) % p;
                }
            }
        }
        out
    }

    fn pow_coords_mod(&self, a: &[u64], mut e: u128, p: u64) -> Vec<u64> {
        let mut acc = self.one_coords_mod(p);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_coords_mod(&acc, &base, p);
            }
            base = self.mul_coords_mod(&base, &base, p);
            e >>= 1;
        }
        acc
    }

    fn one_coords_mod(&self, p: u64) -> Vec<u64> {
        let n = self.degree();
        let mut one = vec![BigRational::zero(); n];
        one[0] = BigRational::one();
        self.power_to_coords(&one)
            .iter()
            .map(|c| reduce(&c.to_integer(), p))
            .collect()
    }

    /// `d^n / det(num)` = `[O : Z[theta]]`.
    pub fn index(&self) -> BigInt {
        let n = self.degree();
        num_traits::pow(self.den.clone(), n) / self.num.det().abs()
    }

    /// One Round-2 step at p: the ring of multipliers of the p-radical.
    /// Returns `None` when the order is already p-maximal.
    pub fn enlarge_at(&self, p: &BigInt) -> Result<Option<Order>> {
        let pw = p
            .to_u64()
            .filter(|&w| w < 1 << 63)
            .ok_or_else(|| Error::ModulusTooLarge(p.to_string()))?;
        let n = self.degree();
        // Frobenius power q = p^j >= n kills exactly the radical of O/pO.
        let mut q: u128 = pw as u128;
        while q < n as u128 {
            q *= pw as u128;
        }
        let images: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                self.pow_coords_mod(&e, q, pw)
            })
            .collect();
        // kernel of a -> sum a_i images[i]
        let rows: Vec<Vec<u64>> = (0..n).map(|k| (0..n).map(|i| images[i][k]).collect()).collect();
        let kernel = kernel_mod_p(&rows, n, pw);
        let mut radical = HnfBasis::new(n);
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = p.clone();
            radical.insert(v);
        }
        for v in &kernel {
            radical.insert(v.iter().map(|&x| BigInt::from(x)).collect());
        }
        let gamma = radical.to_matrix();
        let gamma_rat: Vec<Vec<BigRational>> = gamma
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let gamma_inv = rat_inverse(&gamma_rat).expect("radical has full rank");
        // For each basis element omega_i, the map gamma_j -> omega_i gamma_j mod p I_p.
        let mut columns: Vec<Vec<u64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            let mut col = Vec::with_capacity(n * n);
            for gj in gamma.row_vecs() {
                let prod = self.mul_coords(&e, gj);
                for k in 0..n {
                    let c = prod
                        .iter()
                        .zip(gamma_inv.iter())
                        .fold(BigRational::zero(), |acc, (x, row)| {
                            acc + BigRational::from_integer(x.clone()) * &row[k]
                        });
                    debug_assert!(c.is_integer());
                    col.push(reduce(&c.to_integer(), pw));
                }
            }
            columns.push(col);
        }
        let rows: Vec<Vec<u64>> = (0..n * n)
            .map(|r| (0..n).map(|i| columns[i][r]).collect())
            .collect();
        let kernel = kernel_mod_p(&rows, n, pw);
        let mut u = HnfBasis::new(n);
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = p.clone();
            u.insert(v);
        }
        for v in &kernel {
            u.insert(v.iter().map(|&x| BigInt::from(x)).collect());
        }
        if u.pivot_product() == num_traits::pow(p.clone(), n) {
            return Ok(None);
        }
        // O' = (1/p) U, expressed over the power basis.
        let new_num = u.to_matrix().mul(&self.num);
        Ok(Some(Order::from_basis(&self.poly, new_num, &self.den * p)))
    }

    pub fn is_p_maximal(&self, p: &BigInt) -> Result<bool> {
        Ok(self.enlarge_at(p)?.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_ratio_order() {
        let o = Order::equation_order(&ints(&[-5, 0, 1]));
        let o2 = o.enlarge_at(&BigInt::from(2)).unwrap().unwrap();
        assert_eq!(o2.num, IntMatrix::from_i64(&[&[2, 0], &[1, 1]]));
        assert_eq!(o2.den, BigInt::from(2));
        assert_eq!(o2.index(), BigInt::from(2));
        assert!(o2.enlarge_at(&BigInt::from(2)).unwrap().is_none());
    }

    #[test]
    fn gaussian_is_maximal() {
        let o = Order::equation_order(&ints(&[1, 0, 1]));
        assert!(o.is_p_maximal(&BigInt::from(2)).unwrap());
    }

    #[test]
    fn hnf_lower_shape() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[2, 0]]);
        assert_eq!(hnf_lower(&m), IntMatrix::from_i64(&[&[2, 0], &[1, 1]]));
    }
}
