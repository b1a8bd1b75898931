//! Integer matrices: Hermite and Smith normal forms, determinants.
//!
//! HNF convention: row style, upper triangular, positive pivots, entries
//! above a pivot reduced into `[0, pivot)`, zero rows dropped.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rows(cols: usize, data: Vec<Vec<BigInt>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(data: &[&[i64]]) -> Self {
        let cols = data.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            data.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::from_rows(cols, vec![vec![BigInt::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = IntMatrix::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i][i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = IntMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out.data[i][j] += &self.data[i][k] * &o.data[k][j];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn hnf(&self) -> IntMatrix {
        let mut basis = HnfBasis::new(self.cols);
        for r in &self.data {
            basis.insert(r.clone());
        }
        basis.to_matrix()
    }

    pub fn is_hnf(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut pivots = Vec::new();
        for r in &self.data {
            let Some(p) = r.iter().position(|x| !x.is_zero()) else {
                return false;
            };
            if last_pivot.is_some_and(|lp| p <= lp) || !r[p].is_positive() {
                return false;
            }
            last_pivot = Some(p);
            pivots.push(p);
        }
        for (i, &p) in pivots.iter().enumerate() {
            let piv = &self.data[i][p];
            for r in &self.data[..i] {
                if r[p].is_negative() || &r[p] >= piv {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `(g, x, y)` with `x a + y b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// A lattice basis kept in HNF under incremental row insertion.
#[derive(Clone, Debug)]
pub struct HnfBasis {
    cols: usize,
    /// (pivot column, row), pivots increasing.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl HnfBasis {
    pub fn new(cols: usize) -> Self {
        HnfBasis {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Product of pivots; the lattice index in Z^cols when full rank.
    pub fn pivot_product(&self) -> BigInt {
        self.rows.iter().map(|(p, r)| r[*p].clone()).product()
    }

    /// Reduce `v` against the basis; zero iff `v` is in the lattice.
    pub fn reduce_vector(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let q = v[*p].div_floor(&r[*p]);
            if !q.is_zero() {
                for j in *p..self.cols {
                    v[j] -= &q * &r[j];
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce_vector(v).iter().all(|x| x.is_zero())
    }

    /// Insert a row; returns true if the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut changed = false;
        let mut c = 0;
        while c < self.cols {
            if v[c].is_zero() {
                c += 1;
                continue;
            }
            match self.rows.iter().position(|(p, _)| *p == c) {
                None => {
                    if v[c].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    let at = self.rows.iter().position(|(p, _)| *p > c).unwrap_or(self.rows.len());
                    self.rows.insert(at, (c, v));
                    changed = true;
                    break;
                }
                Some(idx) => {
                    let b = &self.rows[idx].1;
                    if (&v[c] % &b[c]).is_zero() {
                        let q = &v[c] / &b[c];
                        for j in c..self.cols {
                            v[j] -= &q * &b[j];
                        }
                    } else {
                        let (g, x, y) = xgcd(&b[c], &v[c]);
                        let bc = &b[c] / &g;
                        let vc = &v[c] / &g;
                        let mut nb = vec![BigInt::zero(); self.cols];
                        let mut nv = vec![BigInt::zero(); self.cols];
                        for j in c..self.cols {
                            nb[j] = &x * &b[j] + &y * &v[j];
                            nv[j] = &vc * &b[j] - &bc * &v[j];
                        }
                        self.rows[idx].1 = nb;
                        v = nv;
                        changed = true;
                    }
                    c += 1;
                }
            }
        }
        if changed {
            self.normalize();
        }
        changed
    }

    fn normalize(&mut self) {
        let n = self.rows.len();
        for i in 0..n {
            let p = self.rows[i].0;
            if self.rows[i].1[p].is_negative() {
                for x in self.rows[i].1.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        for i in 0..n {
            let (p, pivot_row) = (self.rows[i].0, self.rows[i].1.clone());
            for k in 0..i {
                let q = self.rows[k].1[p].div_floor(&pivot_row[p]);
                if !q.is_zero() {
                    for j in p..self.cols {
                        let t = &q * &pivot_row[j];
                        self.rows[k].1[j] -= t;
                    }
                }
            }
        }
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.cols, self.rows.iter().map(|(_, r)| r.clone()).collect())
    }
}

/// Smith form with the column transform: `U * M * V = diag(d)` for some
/// unimodular `U`; returns `(d, V, V^-1)`. `d` has `min(rows, cols)` entries
/// forming a divisibility chain (zeros last).
pub fn snf_with_transform(m: &IntMatrix) -> (Vec<BigInt>, IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.data.clone();
    let mut v = IntMatrix::identity(cols).data;
    let mut vinv = IntMatrix::identity(cols).data;
    let k = rows.min(cols);

    let col_addmul = |a: &mut Vec<Vec<BigInt>>,
                      v: &mut Vec<Vec<BigInt>>,
                      vinv: &mut Vec<Vec<BigInt>>,
                      dst: usize,
                      src: usize,
                      q: &BigInt| {
        // col_dst -= q col_src
        for r in a.iter_mut() {
            let t = q * &r[src];
            r[dst] -= t;
        }
        for r in v.iter_mut() {
            let t = q * &r[src];
            r[dst] -= t;
        }
        // inverse: row_src += q row_dst
        let row_dst = vinv[dst].clone();
        for (x, y) in vinv[src].iter_mut().zip(row_dst.iter()) {
            *x += q * y;
        }
    };

    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            if bj != t {
                for r in a.iter_mut() {
                    r.swap(t, bj);
                }
                for r in v.iter_mut() {
                    r.swap(t, bj);
                }
                vinv.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let pivot_row = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_addmul(&mut a, &mut v, &mut vinv, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        let row_i = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(row_i.iter()) {
                            *x += y;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let d = (0..k).map(|i| a[i][i].clone()).collect();
    (
        d,
        IntMatrix::from_rows(cols, v),
        IntMatrix::from_rows(cols, vinv),
    )
}

/// Invariant factors `d1 | d2 | ...`, `min(rows, cols)` of them.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    snf_with_transform(m).0
}

/// Inverse of a square rational matrix by Gauss-Jordan; `None` if singular.
pub fn rat_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pr);
        inv.swap(c, pr);
        let piv = a[c][c].recip();
        for j in 0..n {
            a[c][j] = &a[c][j] * &piv;
            inv[c][j] = &inv[c][j] * &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let k = a[i][c].clone();
            for j in 0..n {
                let t = &k * &a[c][j];
                a[i][j] -= t;
                let t = &k * &inv[c][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}
