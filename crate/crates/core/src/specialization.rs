//! Fibers `Q[y]/(y^m - g(t))` of an integral model, split into number fields.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::poly::int_rat;
use crate::arith::zfactor::factor_over_q;
use crate::arith::Poly;
use crate::curve::{binomial_is_reducible, IntegralModel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedFiber {
    pub t: BigInt,
    pub m: u32,
    /// g(t)
    pub value: BigInt,
    /// Monic irreducible integer polynomials, sorted by (degree, coefficients).
    pub components: Vec<Poly>,
}

impl SpecializedFiber {
    /// The degree-m component, present iff the fiber is a field.
    pub fn full_component(&self) -> Option<&Poly> {
        self.components
            .iter()
            .find(|c| c.degree() == Some(self.m as usize))
    }

    pub fn defining_polynomial(&self) -> Poly {
        binomial(self.m, &self.value)
    }
}

/// `y^m - a`
pub fn binomial(m: u32, a: &BigInt) -> Poly {
    &Poly::monomial(int_rat(&BigInt::from(1)), m as usize) - &Poly::constant(int_rat(a))
}

pub fn specialize(model: &IntegralModel, t: &BigInt) -> Result<SpecializedFiber> {
    let value = model.value_at(t);
    if value.is_zero() {
        return Err(Error::DegenerateFiber(t.to_string()));
    }
    let f = binomial(model.m, &value);
    let components = if binomial_is_reducible(model.m, &value) {
        let factors = factor_over_q(&f)?;
        debug_assert!(factors.iter().all(|(_, e)| *e == 1));
        factors.into_iter().map(|(g, _)| g).collect()
    } else {
        vec![f]
    };
    Ok(SpecializedFiber {
        t: t.clone(),
        m: model.m,
        value,
        components,
    })
}
