//! p-torsion invariants of hyperelliptic curves and of fibre products of
//! hyperelliptic curves with Galois group (Z/2)^n over finite fields.

pub mod error;
pub mod ff;
pub mod linalg;
pub mod poly;
pub mod cartier;
pub mod cover;
pub mod zeta;
pub mod search;
pub mod cli;

pub use error::{Error, Result};
pub use ff::{Fe, Field};
pub use poly::Poly;
