//! Quadratic class groups from binary quadratic forms.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::abelian::{group_structure, power};
use super::{Certification, ClassGroup};
use crate::arith::integer::{factor_integer, FactorEffort};
use crate::arith::Poly;
use crate::error::{Error, Result};
use crate::field::NumberField;
use crate::forms::{isqrt, reduced_definite_forms, reduced_indefinite_forms, Form};
use crate::ideal::FracIdeal;

/// Squarefree kernel of a nonzero integer, sign kept.
fn squarefree_core(d: &BigInt) -> BigInt {
    let fac = factor_integer(d, &FactorEffort::default()).expect("nonzero");
    let mut core = if d.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in &fac.factors {
        if e % 2 == 1 {
            core *= p;
        }
    }
    core * &fac.cofactor
}

/// Fundamental discriminant of `Q(sqrt d)` and the conductor `f` with
/// `d = f^2 D0`, when `d` is a discriminant.
pub fn fundamental_part(d: &BigInt) -> Option<(BigInt, BigInt)> {
    if d.is_zero() || !(d.mod_floor(&BigInt::from(4)) <= BigInt::one()) {
        return None;
    }
    let core = squarefree_core(d);
    let d0 = if core.mod_floor(&BigInt::from(4)).is_one() {
        core
    } else {
        core * 4
    };
    let f2 = d / &d0;
    let f = isqrt(&f2);
    Some((d0, f))
}

pub fn is_fundamental(d: &BigInt) -> bool {
    matches!(fundamental_part(d), Some((d0, _)) if &d0 == d && !d.is_one())
}

/// `x^2 - x + (1 - D)/4` or `x^2 - D/4`.
pub fn quadratic_polynomial(d: &BigInt) -> Poly {
    if d.is_odd() {
        Poly::from_bigints(&[(BigInt::one() - d) / BigInt::from(4), -BigInt::one(), BigInt::one()])
    } else {
        Poly::from_bigints(&[-(d / BigInt::from(4)), BigInt::zero(), BigInt::one()])
    }
}

pub fn quadratic_field(d: &BigInt) -> Result<Arc<NumberField>> {
    check_fundamental(d)?;
    Ok(Arc::new(NumberField::new(&quadratic_polynomial(d))?))
}

fn check_fundamental(d: &BigInt) -> Result<()> {
    if is_fundamental(d) {
        return Ok(());
    }
    let detail = match fundamental_part(d) {
        Some((d0, f)) if d0.is_one() => format!("{} is a square (conductor {})", d, f),
        Some((d0, f)) => format!("conductor {} over fundamental discriminant {}", f, d0),
        None => "not congruent to 0 or 1 mod 4".to_string(),
    };
    Err(Error::NotFundamental(d.to_string(), detail))
}

/// Form classes of a fundamental discriminant under wide equivalence, with
/// a lookup from every reduced form to its class.
pub struct FormClasses {
    d: BigInt,
    reps: Vec<Form>,
    lookup: HashMap<Form, usize>,
}

impl FormClasses {
    pub fn new(d: &BigInt) -> Self {
        let mut lookup = HashMap::new();
        let mut reps = Vec::new();
        if d.is_negative() {
            for f in reduced_definite_forms(d) {
                lookup.insert(f.clone(), reps.len());
                reps.push(f);
            }
        } else {
            for f in reduced_indefinite_forms(d) {
                if lookup.contains_key(&f) {
                    continue;
                }
                let neg = Form::new(-&f.a, f.b.clone(), -&f.c);
                let members: Vec<Form> = f
                    .cycle()
                    .into_iter()
                    .chain(neg.cycle())
                    .map(|(g, _)| g)
                    .collect();
                let rep = members
                    .iter()
                    .filter(|g| g.a.is_positive())
                    .min()
                    .expect("cycle has forms with a > 0")
                    .clone();
                let idx = reps.len();
                for g in members {
                    lookup.insert(g, idx);
                }
                reps.push(rep);
            }
            // order classes by representative for determinism
            let mut order: Vec<usize> = (0..reps.len()).collect();
            order.sort_by(|&i, &j| reps[i].cmp(&reps[j]));
            let mut rank = vec![0; reps.len()];
            for (new, &old) in order.iter().enumerate() {
                rank[old] = new;
            }
            for v in lookup.values_mut() {
                *v = rank[*v];
            }
            reps = order.iter().map(|&i| reps[i].clone()).collect();
        }
        FormClasses {
            d: d.clone(),
            reps,
            lookup,
        }
    }

    pub fn class_number(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Form] {
        &self.reps
    }

    pub fn class_of(&self, f: &Form) -> usize {
        let r = if self.d.is_negative() {
            let g = if f.a.is_negative() {
                Form::new(-&f.a, -&f.b, -&f.c)
            } else {
                f.clone()
            };
            g.reduce_definite().0
        } else {
            f.reduce_indefinite().0
        };
        self.lookup[&r]
    }

    pub fn identity(&self) -> usize {
        self.class_of(&Form::principal(&self.d))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.class_of(&self.reps[i].compose(&self.reps[j]))
    }
}

/// Exact class group of a fundamental discriminant.
pub fn class_group_quadratic(d: &BigInt) -> Result<ClassGroup> {
    let k = quadratic_field(d)?;
    class_group_of_quadratic_field(&k)
}

/// Class group of any quadratic field, via the forms of its discriminant.
pub fn class_group_of_quadratic_field(k: &Arc<NumberField>) -> Result<ClassGroup> {
    assert_eq!(k.degree(), 2);
    let d = k.field_disc().clone();
    let fc = FormClasses::new(&d);
    let cand: Vec<usize> = (0..fc.class_number()).collect();
    let id = fc.identity();
    let mul = |a: &usize, b: &usize| fc.mul(*a, *b);
    let s = group_structure(&cand, id, mul);
    let mut generators = Vec::with_capacity(s.generators.len());
    for g in &s.generators {
        let mut x = id;
        for (e, &i) in g.iter().zip(&s.basis_indices) {
            x = mul(&x, &power(&cand[i], e, &id, &mul));
        }
        generators.push(FracIdeal::from_form(k, &fc.reps()[x])?);
    }
    Ok(ClassGroup {
        key: d.to_string(),
        invariants: s.invariants,
        generators,
        certification: Certification::Proven,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::is_principal;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn fundamental_checks() {
        for d in [-3, -4, -7, -8, 5, 8, 12, 13, -84, 40] {
            assert!(is_fundamental(&bi(d)), "{}", d);
        }
        for d in [-12, 20, 1, 0, 9, 3, -16] {
            assert!(!is_fundamental(&bi(d)), "{}", d);
        }
        assert_eq!(fundamental_part(&bi(-12)), Some((bi(-3), bi(2))));
        assert!(matches!(
            class_group_quadratic(&bi(-12)),
            Err(Error::NotFundamental(_, _))
        ));
    }

    #[test]
    fn small_groups() {
        let inv = |d: i64| class_group_quadratic(&bi(d)).unwrap().invariants;
        assert_eq!(inv(-23), vec![bi(3)]);
        assert_eq!(inv(-84), vec![bi(2), bi(2)]);
        assert!(inv(-4).is_empty());
        assert!(inv(-163).is_empty());
        assert_eq!(inv(40), vec![bi(2)]);
        assert!(inv(5).is_empty());
        // narrow class number 2, wide 1
        assert!(inv(12).is_empty());
    }

    #[test]
    fn generators_have_stated_order() {
        for d in [-23i64, -84, -56, 40, 229, -3299] {
            let cg = class_group_quadratic(&bi(d)).unwrap();
            for (g, n) in cg.generators.iter().zip(&cg.invariants) {
                let n: u64 = n.try_into().unwrap();
                assert!(is_principal(&g.pow(n), 0).is_principal());
                for q in 1..n {
                    if n % q == 0 {
                        assert!(is_principal(&g.pow(q), 0).is_nonprincipal());
                    }
                }
            }
        }
    }
}
