//! Structure of an explicitly enumerable finite abelian group.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::matrix::snf_with_transform;
use crate::arith::IntMatrix;

/// Invariant factors (all > 1, `d1 | d2 | ...`) and generator exponent
/// vectors over the original candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub invariants: Vec<BigInt>,
    /// `generators[j][i]` = exponent of `basis[i]` in the j-th generator.
    pub generators: Vec<Vec<BigInt>>,
    /// Candidates that ended up in the generating set, in order.
    pub basis_indices: Vec<usize>,
}

/// Build the group generated by `candidates` with discrete-log tables: each
/// new generator contributes the relation `k e_new = dlog(g^k)` for the
/// least `k` with `g^k` in the current subgroup.
pub fn group_structure<T, F>(candidates: &[T], identity: T, mul: F) -> Structure
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut table: HashMap<T, Vec<i64>> = HashMap::new();
    table.insert(identity.clone(), Vec::new());
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut basis_indices = Vec::new();
    for (idx, g) in candidates.iter().enumerate() {
        if table.contains_key(g) {
            continue;
        }
        let r = basis_indices.len();
        let mut x = g.clone();
        let mut k: i64 = 1;
        while !table.contains_key(&x) {
            x = mul(&x, g);
            k += 1;
        }
        let mut rel = table[&x].clone();
        rel.resize(r, 0);
        let mut row: Vec<i64> = rel.iter().map(|v| -v).collect();
        row.push(k);
        for old in relations.iter_mut() {
            old.push(0);
        }
        relations.push(row);
        let old: Vec<(T, Vec<i64>)> = table.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        let mut power = g.clone();
        for j in 1..k {
            for (h, v) in &old {
                let mut nv = v.clone();
                nv.resize(r, 0);
                nv.push(j);
                table.insert(mul(&power, h), nv);
            }
            power = mul(&power, g);
        }
        basis_indices.push(idx);
    }
    let r = basis_indices.len();
    if r == 0 {
        return Structure {
            invariants: Vec::new(),
            generators: Vec::new(),
            basis_indices,
        };
    }
    let m = IntMatrix::from_rows(
        r,
        relations
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    );
    let (d, _v, vinv) = snf_with_transform(&m);
    from_snf(&d, &vinv, basis_indices)
}

/// Keep the nontrivial cyclic factors; generator exponents reduced mod the
/// group exponent.
pub fn from_snf(d: &[BigInt], vinv: &IntMatrix, basis_indices: Vec<usize>) -> Structure {
    let exponent = d.iter().filter(|x| !x.is_zero()).fold(BigInt::one(), |a, x| a.lcm(x));
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    for (j, dj) in d.iter().enumerate() {
        if dj.abs().is_one() {
            continue;
        }
        invariants.push(dj.abs());
        generators.push(
            vinv.row(j)
                .iter()
                .map(|x| x.mod_floor(&exponent))
                .collect(),
        );
    }
    Structure {
        invariants,
        generators,
        basis_indices,
    }
}

/// Product of invariant factors.
pub fn order_of(invariants: &[BigInt]) -> BigInt {
    invariants.iter().product()
}

/// `x^e` by square-and-multiply.
pub fn power<T: Clone, F: Fn(&T, &T) -> T>(x: &T, e: &BigInt, identity: &T, mul: &F) -> T {
    let mut e = e.to_u64().expect("small exponent");
    let mut acc = identity.clone();
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}
