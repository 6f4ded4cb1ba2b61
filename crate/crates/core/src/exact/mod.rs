//! Exact arithmetic: integer polynomials, reduced rational functions and cyclotomic fields.

pub mod cyclotomic;
pub mod gcd;
mod modular;
pub mod parse;
pub mod poly;
pub mod ratfunc;

pub use cyclotomic::Cyclotomic;
pub use poly::{Mono, Poly};
pub use ratfunc::RatFunc;
