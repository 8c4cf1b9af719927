//! Exact local factors for the Siegel Levi of GSpin groups.
//!
//! Every factor is a [`FactoredRF`]: a unit times a power of `Z = q^-s` times
//! a product of `(1 - cZ)^e`, with coefficients in a cyclotomic field extended
//! by formal powers of `q`. Inputs are principal-series data built from
//! characters of a truncated local ring `F_q[t]/(t^m)`.

pub mod arith;
pub mod error;
pub mod factors;
pub mod field;
pub mod galois;
pub mod par;
pub mod root;
pub mod selftest;
pub mod tate;

pub use arith::{Cyclo, FactoredRF, Lattice, QPower, Scalar};
pub use error::{Error, ErrorKind, Result};
