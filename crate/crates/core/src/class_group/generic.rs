//! Class groups from a Minkowski factor base and smooth-norm relations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::abelian::from_snf;
use super::{Certification, ClassGroup};
use crate::arith::matrix::snf_with_transform;
use crate::arith::{HnfBasis, IntMatrix};
use crate::error::{Error, Result};
use crate::field::{minkowski_bound, prime_decomposition, NumberField};
use crate::ideal::FracIdeal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationConfig {
    /// Box radii, increasing; shells between consecutive radii are enumerated.
    pub schedule: Vec<u64>,
    /// Give up when the Minkowski bound exceeds this.
    pub max_bound: u64,
    /// Largest box (in elements) enumerated; later schedule steps are dropped.
    pub max_elements: u64,
    /// Schedule steps always run before the stability test applies.
    pub min_steps: usize,
    pub seed: u64,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            schedule: vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 32],
            max_bound: 5000,
            max_elements: 300_000,
            min_steps: 8,
            seed: 0,
        }
    }
}

impl RelationConfig {
    /// A single budget `b` caps the schedule at radius `b`.
    pub fn with_budget(budget: u64) -> Self {
        let mut c = RelationConfig::default();
        c.schedule.retain(|&r| r <= budget.max(1));
        if c.schedule.last() != Some(&budget.max(1)) {
            c.schedule.push(budget.max(1));
        }
        c
    }
}

struct FactorBase {
    field: Arc<NumberField>,
    /// Rational primes, ascending.
    primes: Vec<BigInt>,
    /// Column of every prime ideal above `primes[i]`, with its residue degree.
    above: Vec<Vec<(usize, u32)>>,
    ideals: Vec<FracIdeal>,
    /// Cached `P^k` lattices per column.
    powers: Vec<Vec<HnfBasis>>,
}

impl FactorBase {
    fn build(field: &Arc<NumberField>, bound: u64) -> Result<Self> {
        let mut entries = Vec::new();
        for p in crate::arith::integer::primes_up_to(bound) {
            let pb = BigInt::from(p);
            let split = prime_decomposition(field, &pb)?;
            let mut here = Vec::new();
            for s in split {
                let ideal = FracIdeal::from_prime(field, &s)?;
                here.push((ideal, s.f));
            }
            entries.push((pb, here));
        }
        // columns sorted by (norm, HNF bytes)
        let mut cols: Vec<(BigRational, String, usize, usize)> = Vec::new();
        for (i, (_, here)) in entries.iter().enumerate() {
            for (j, (ideal, _)) in here.iter().enumerate() {
                cols.push((ideal.norm(), format!("{:?}", ideal.hnf()), i, j));
            }
        }
        cols.sort();
        let mut above = vec![Vec::new(); entries.len()];
        let mut ideals = Vec::with_capacity(cols.len());
        for (c, (_, _, i, j)) in cols.iter().enumerate() {
            above[*i].push((c, entries[*i].1[*j].1));
            ideals.push(entries[*i].1[*j].0.clone());
        }
        let powers = vec![Vec::new(); ideals.len()];
        Ok(FactorBase {
            field: field.clone(),
            primes: entries.into_iter().map(|(p, _)| p).collect(),
            above,
            ideals,
            powers,
        })
    }

    fn contains_power(&mut self, col: usize, k: usize, g: &[BigInt]) -> bool {
        while self.powers[col].len() < k {
            let e = self.powers[col].len() as u64 + 1;
            let ideal = self.ideals[col].pow(e);
            let mut h = HnfBasis::new(self.field.degree());
            for r in ideal.hnf().row_vecs() {
                h.insert(r.clone());
            }
            self.powers[col].push(h);
        }
        self.powers[col][k - 1].contains(g)
    }

    /// Exponent vector of `(g)` if its norm is smooth.
    fn relation(&mut self, g: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut norm = self.field.norm(g).abs();
        if norm.is_zero() {
            return None;
        }
        let mut row = vec![BigInt::zero(); self.ideals.len()];
        for i in 0..self.primes.len() {
            let p = self.primes[i].clone();
            let mut vp = 0u32;
            while norm.is_multiple_of(&p) {
                norm /= &p;
                vp += 1;
            }
            if vp == 0 {
                continue;
            }
            let mut accounted = 0u32;
            for (col, f) in self.above[i].clone() {
                let mut v = 0usize;
                while self.contains_power(col, v + 1, g) {
                    v += 1;
                }
                row[col] = BigInt::from(v);
                accounted += f * v as u32;
            }
            debug_assert_eq!(accounted, vp);
        }
        norm.is_one().then_some(row)
    }

    fn rational_relations(&self) -> Vec<Vec<BigInt>> {
        let n = self.field.degree();
        let mut out = Vec::new();
        for (i, p) in self.primes.iter().enumerate() {
            let mut row = vec![BigInt::zero(); self.ideals.len()];
            let pi = FracIdeal::rational(&self.field, p).expect("nonzero");
            // e = largest power of P containing (p)
            for &(col, _) in &self.above[i] {
                let mut e = 0u64;
                let mut acc = FracIdeal::unit(&self.field);
                loop {
                    let next = acc.mul(&self.ideals[col]).expect("same field");
                    let lat = {
                        let mut h = HnfBasis::new(n);
                        for r in next.hnf().row_vecs() {
                            h.insert(r.clone());
                        }
                        h
                    };
                    if pi.hnf().row_vecs().iter().all(|r| lat.contains(r)) {
                        e += 1;
                        acc = next;
                    } else {
                        break;
                    }
                }
                row[col] = BigInt::from(e);
            }
            out.push(row);
        }
        out
    }
}

/// Elements of the coefficient box with `r_prev < max|c_i| <= r`.
fn shell(n: usize, r_prev: u64, r: u64) -> impl Iterator<Item = Vec<BigInt>> {
    let r = r as i64;
    let rp = r_prev as i64;
    let width = (2 * r + 1) as u64;
    let total = width.pow(n as u32);
    (0..total).filter_map(move |mut idx| {
        let mut v = Vec::with_capacity(n);
        let mut top = 0i64;
        for _ in 0..n {
            let c = (idx % width) as i64 - r;
            idx /= width;
            top = top.max(c.abs());
            v.push(c);
        }
        // skip one of each +- pair: first nonzero coordinate positive
        let first = v.iter().find(|c| **c != 0).copied().unwrap_or(0);
        (top > rp && first > 0).then(|| v.into_iter().map(BigInt::from).collect())
    })
}

fn combine(x: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = basis[0].len();
    let mut out = vec![BigInt::zero(); n];
    for (xi, b) in x.iter().zip(basis) {
        if xi.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(b) {
            *o += xi * y;
        }
    }
    out
}

/// Class group of `K` from relations among prime ideals above primes up to
/// the Minkowski bound.
pub fn class_group_generic(k: &Arc<NumberField>, config: &RelationConfig) -> Result<ClassGroup> {
    let key = k.poly().to_descending_text();
    let bound = minkowski_bound(k).floor().to_integer();
    if k.degree() == 1 || bound < BigInt::from(2) {
        return Ok(ClassGroup {
            key,
            invariants: Vec::new(),
            generators: Vec::new(),
            certification: Certification::Proven,
        });
    }
    let bound = bound
        .to_u64()
        .filter(|&b| b <= config.max_bound)
        .ok_or_else(|| Error::Incomplete(format!("Minkowski bound {} exceeds the configured limit {}", bound, config.max_bound)))?;
    let mut fb = FactorBase::build(k, bound)?;
    let cols = fb.ideals.len();
    let n = k.degree();
    let mut lattice = HnfBasis::new(cols);
    let mut seen = vec![false; cols];
    let record = |row: Vec<BigInt>, lattice: &mut HnfBasis, seen: &mut Vec<bool>| {
        for (s, x) in seen.iter_mut().zip(&row) {
            *s |= !x.is_zero();
        }
        lattice.insert(row);
    };
    for row in fb.rational_relations() {
        record(row, &mut lattice, &mut seen);
    }
    // O itself and every factor-base prime, each searched shell by shell
    let mut fixed = vec![k.embedding().lll(IntMatrix::identity(n).into_rows())];
    for ideal in &fb.ideals {
        fixed.push(k.embedding().lll(ideal.hnf().row_vecs().to_vec()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut history: Vec<Option<BigInt>> = Vec::new();
    let mut r_prev = 0u64;
    for (step, &r) in config.schedule.iter().enumerate() {
        let size = (2 * r + 1).checked_pow(n as u32);
        if size.map_or(true, |s| s > config.max_elements) {
            break;
        }
        for basis in &fixed {
            for x in shell(n, r_prev, r) {
                if let Some(row) = fb.relation(&combine(&x, basis)) {
                    record(row, &mut lattice, &mut seen);
                }
            }
        }
        r_prev = r;
        // short elements of random factor-base ideals have small cofactors
        let max_exp = 4 * (step as u64 + 1);
        for c in 0..cols {
            let other = rng.gen_range(0..cols);
            let e = rng.gen_range(1..=max_exp);
            let mut a = fb.ideals[c].pow(e).mul(&fb.ideals[other])?;
            if a.norm() > BigRational::from_integer(BigInt::from(1u64 << 40)) {
                a = fb.ideals[c].clone();
            }
            let basis = k.embedding().lll(a.hnf().row_vecs().to_vec());
            for x in shell(n, 0, 1) {
                if let Some(row) = fb.relation(&combine(&x, &basis)) {
                    record(row, &mut lattice, &mut seen);
                }
            }
        }
        let order = lattice.is_full_rank().then(|| lattice.pivot_product());
        history.push(order.clone());
        let len = history.len();
        if order.is_some()
            && seen.iter().all(|s| *s)
            && len >= config.min_steps.max(3)
            && history[len - 1] == history[len - 2]
            && history[len - 2] == history[len - 3]
        {
            break;
        }
    }
    if !lattice.is_full_rank() {
        return Err(Error::Incomplete(format!(
            "relation lattice has rank {} of {} after radius {}",
            lattice.rank(),
            cols,
            r_prev
        )));
    }
    let (d, _v, vinv) = snf_with_transform(&lattice.to_matrix());
    let s = from_snf(&d, &vinv, (0..cols).collect());
    let mut generators = Vec::with_capacity(s.generators.len());
    for g in &s.generators {
        let mut acc = FracIdeal::unit(k);
        for (e, ideal) in g.iter().zip(&fb.ideals) {
            if !e.is_zero() {
                acc = acc.mul(&ideal.pow(e.to_u64().expect("small exponent")))?;
            }
        }
        generators.push(acc);
    }
    // every relation is a genuine factorization, so Z^cols / L maps onto Cl
    let certification = if s.invariants.is_empty() {
        Certification::Proven
    } else {
        Certification::Heuristic
    };
    Ok(ClassGroup {
        key,
        invariants: s.invariants,
        generators,
        certification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;

    fn field(c: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new(&Poly::from_ints(c)).unwrap())
    }

    #[test]
    fn quadratic_examples() {
        let cfg = RelationConfig::default();
        let cg = class_group_generic(&field(&[23, 0, 1]), &cfg).unwrap();
        // x^2 + 23 has index 2; the maximal order is Z[(1 + sqrt -23)/2]
        assert_eq!(cg.invariants, vec![BigInt::from(3)]);
        let cg = class_group_generic(&field(&[21, 0, 1]), &cfg).unwrap();
        assert_eq!(cg.invariants, vec![BigInt::from(2), BigInt::from(2)]);
        let cg = class_group_generic(&field(&[-10, 0, 1]), &cfg).unwrap();
        assert_eq!(cg.invariants, vec![BigInt::from(2)]);
    }

    #[test]
    fn trivial_examples() {
        let cfg = RelationConfig::default();
        let cg = class_group_generic(&field(&[1, 1, 1, 1, 1]), &cfg).unwrap();
        assert!(cg.invariants.is_empty());
        assert_eq!(cg.certification, Certification::Proven);
        let cg = class_group_generic(&field(&[-1, -1, 0, 1]), &cfg).unwrap();
        assert!(cg.invariants.is_empty());
        assert_eq!(cg.certification, Certification::Proven);
        let cg = class_group_generic(&field(&[-2, 0, 0, 0, 0, 1]), &cfg).unwrap();
        assert!(cg.invariants.is_empty());
        assert_eq!(cg.certification, Certification::Proven);
    }

    #[test]
    fn pure_cubic_with_class_number_two() {
        let cg = class_group_generic(&field(&[-11, 0, 0, 1]), &RelationConfig::default()).unwrap();
        assert_eq!(cg.invariants, vec![BigInt::from(2)]);
    }
}
