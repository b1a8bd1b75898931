//! Ideal class groups: exact for quadratic fields, relation-based otherwise.

pub mod abelian;
pub mod generic;
pub mod quadratic;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ideal::FracIdeal;

pub use generic::{class_group_generic, RelationConfig};
pub use quadratic::{
    class_group_of_quadratic_field, class_group_quadratic, fundamental_part, is_fundamental,
    quadratic_field, quadratic_polynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Proven,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    /// Discriminant (quadratic engine) or defining polynomial text.
    pub key: String,
    /// `d1 | d2 | ...`, all greater than 1; empty for the trivial group.
    pub invariants: Vec<BigInt>,
    pub generators: Vec<FracIdeal>,
    pub certification: Certification,
}

impl ClassGroup {
    pub fn class_number(&self) -> BigInt {
        abelian::order_of(&self.invariants)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
}
