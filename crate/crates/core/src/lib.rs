//! Class-group torsion from specialized superelliptic curves.
//!
//! A curve `y^m = f(x)` over Q is specialized at integers `t`; each fiber
//! `Q[y]/(y^m - f(t))` splits into number fields whose maximal orders are
//! built by the Round-2 method. Primes `q` exactly dividing `f(t)` ramify
//! totally, and the classes of the primes above them are m-torsion in the
//! class group. The tracer certifies their exact orders where it can.

pub mod arith;
pub mod class_group;
pub mod curve;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod forms;
pub mod ideal;
pub mod serial;
pub mod report;
pub mod specialization;
pub mod torsion;

pub use error::{Error, Result};
