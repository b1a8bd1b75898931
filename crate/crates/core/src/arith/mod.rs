//! Exact integer, rational, polynomial and integer-matrix arithmetic.

pub mod fp;
pub mod integer;
pub mod matrix;
pub mod poly;
pub mod zfactor;

pub use fp::{factor_poly_mod_p, FpPoly};
pub use integer::{factor_integer, FactorEffort, FactorStatus, IntFactorization};
pub use matrix::{snf, HnfBasis, IntMatrix};
pub use poly::{sturm_signature, Poly};
