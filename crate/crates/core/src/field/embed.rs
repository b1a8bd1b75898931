//! Floating-point Minkowski embedding and LLL reduction under T2. Used only
//! to find short elements; every arithmetic conclusion is re-derived exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn horner(coeffs: &[f64], z: C64) -> (C64, C64) {
    // value and derivative
    let mut v = C64::new(0.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d = d.mul(z).add(v);
        v = v.mul(z).add(C64::new(c, 0.0));
    }
    (v, d)
}

/// Roots of a monic polynomial (ascending coefficients) by Aberth iteration.
fn complex_roots(coeffs: &[f64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            C64::new(radius * 0.5 * ang.cos(), radius * 0.5 * ang.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner(coeffs, z[i]);
            if v.abs() == 0.0 {
                continue;
            }
            let ratio = v.div(d);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = s.add(C64::new(1.0, 0.0).div(z[i].sub(z[j])));
                }
            }
            let w = ratio.div(C64::new(1.0, 0.0).sub(ratio.mul(s)));
            z[i] = z[i].sub(w);
            moved = moved.max(w.abs() / (1.0 + z[i].abs()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Rows of the real embedding `x -> (sigma_real(x), sqrt2 Re, sqrt2 Im)`
/// for each integral basis element; `|image|^2 = T2`.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// `rows[k]` = image of the k-th basis element.
    rows: Vec<Vec<f64>>,
}

impl Embedding {
    /// `basis_power[k]` = power-basis coordinates of omega_k (as f64).
    pub fn new(poly: &[BigInt], basis_power: &[Vec<f64>], r1: usize) -> Embedding {
        let coeffs: Vec<f64> = poly.iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
        let n = coeffs.len() - 1;
        let mut roots = complex_roots(&coeffs);
        roots.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
        let (real, cplx) = roots.split_at_mut(r1.min(n));
        real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut upper: Vec<C64> = cplx.iter().filter(|z| z.im > 0.0).copied().collect();
        upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let s2 = std::f64::consts::SQRT_2;
        let rows = basis_power
            .iter()
            .map(|b| {
                let val = |z: C64| {
                    let mut acc = C64::new(0.0, 0.0);
                    let mut pw = C64::new(1.0, 0.0);
                    for &c in b {
                        acc = acc.add(pw.mul(C64::new(c, 0.0)));
                        pw = pw.mul(z);
                    }
                    acc
                };
                let mut out = Vec::with_capacity(n);
                for z in real.iter() {
                    out.push(val(C64::new(z.re, 0.0)).re);
                }
                for z in &upper {
                    let v = val(*z);
                    out.push(s2 * v.re);
                    out.push(s2 * v.im);
                }
                out
            })
            .collect();
        Embedding { rows }
    }

    pub fn image(&self, coords: &[BigInt]) -> Vec<f64> {
        let dim = self.rows.first().map_or(0, |r| r.len());
        let mut out = vec![0.0; dim];
        for (c, row) in coords.iter().zip(&self.rows) {
            let cf = c.to_f64().unwrap_or(0.0);
            if cf == 0.0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += cf * x;
            }
        }
        out
    }

    pub fn t2(&self, coords: &[BigInt]) -> f64 {
        self.image(coords).iter().map(|x| x * x).sum()
    }

    /// LLL (delta = 0.99) of integer rows, lengths measured by T2.
    pub fn lll(&self, mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        let n = basis.len();
        if n < 2 {
            return basis;
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut img: Vec<Vec<f64>> = basis.iter().map(|b| self.image(b)).collect();
        let mut k = 1;
        let mut steps = 0;
        while k < n && steps < 10_000 {
            steps += 1;
            // Gram-Schmidt from scratch; n is small.
            let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
            let mut mu = vec![vec![0.0; n]; n];
            let mut norms = vec![0.0; n];
            for i in 0..n {
                let mut v = img[i].clone();
                for j in 0..i {
                    mu[i][j] = if norms[j] > 0.0 { dot(&img[i], &bstar[j]) / norms[j] } else { 0.0 };
                    for (x, y) in v.iter_mut().zip(&bstar[j]) {
                        *x -= mu[i][j] * y;
                    }
                }
                norms[i] = dot(&v, &v);
                bstar.push(v);
            }
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q != 0.0 {
                    let qi = BigInt::from(q as i64);
                    let bj = basis[j].clone();
                    for (x, y) in basis[k].iter_mut().zip(&bj) {
                        *x -= &qi * y;
                    }
                    for i in 0..j {
                        mu[k][i] -= q * mu[j][i];
                    }
                    mu[k][j] -= q;
                }
            }
            img[k] = self.image(&basis[k]);
            let lhs = norms[k] + mu[k][k - 1] * mu[k][k - 1] * norms[k - 1];
            if lhs >= 0.99 * norms[k - 1] {
                k += 1;
            } else {
                basis.swap(k, k - 1);
                img.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cyclotomic() {
        let z = complex_roots(&[1.0, 1.0, 1.0, 1.0, 1.0]);
        for r in z {
            assert!((r.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn t2_of_gaussian() {
        let e = Embedding::new(
            &[BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            0,
        );
        let v = e.t2(&[BigInt::from(1), BigInt::from(1)]);
        assert!((v - 4.0).abs() < 1e-9);
        let red = e.lll(vec![
            vec![BigInt::from(5), BigInt::from(0)],
            vec![BigInt::from(3), BigInt::from(1)],
        ]);
        // (5, 3 + i) = (2 - i), whose generators have T2 = 10
        let shortest = red.iter().map(|b| e.t2(b)).fold(f64::MAX, f64::min);
        assert!((shortest - 10.0).abs() < 1e-9);
    }
}
