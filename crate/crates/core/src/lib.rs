//! Cluster-algebraic braiding operators.
//!
//! The crate covers exact classical cluster mutations and the braid
//! R-operator, the quantum-torus R^q-operator with matrix representations,
//! a rewrite calculus for quantum-dilogarithm words, root-of-unity R-matrices,
//! and numerics for the Faddeev quantum dilogarithm and hyperbolic volumes.

pub mod analytic;
pub mod braid;
pub mod cluster;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod opcalc;
pub mod qtorus;
pub mod rootunity;
pub mod scalar;

pub use cluster::{ClusterSeed, ExchangeMatrix, YSeed};
pub use error::{Error, Result};
pub use exact::{Cyclotomic, Poly, RatFunc};
pub use scalar::{Field, RootField};
pub use linalg::Matrix;
pub use scalar::Real;

/// Dense matrix over double-precision complex numbers.
pub type ComplexMatrix = Matrix<num_complex::Complex64>;
/// Dense matrix over single-precision complex numbers.
pub type ComplexMatrix32 = Matrix<num_complex::Complex32>;
/// Dense matrix over a cyclotomic field.
pub type CycloMatrix = Matrix<Cyclotomic>;
/// Dense matrix over the rationals.
pub type RationalMatrix = Matrix<num_rational::BigRational>;
pub type DilogParams64 = analytic::DilogParams<f64>;
pub type KappaParams64 = rootunity::KappaParams<f64>;
pub type ComplexRepresentation = qtorus::Representation<num_complex::Complex64>;
pub type CycloRepresentation = qtorus::Representation<Cyclotomic>;
