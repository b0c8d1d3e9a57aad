//! Exact decision procedures for depth-two and depth-three towers of
//! finite-dimensional algebras, with group-algebra towers as the main
//! source of examples.

pub mod algebra;
pub mod bimodule;
pub mod builders;
pub mod catalog;
pub mod depth;
pub mod error;
pub mod field;
pub mod galois;
pub mod groups;
pub mod grouptower;
pub mod linalg;
pub mod structures;
pub mod tensor;
pub mod towerfile;

pub use error::{Error, Result};
pub use field::{Field, Rational, Scalar};
pub use linalg::{LinMap, Matrix, Quotient, Subspace};
