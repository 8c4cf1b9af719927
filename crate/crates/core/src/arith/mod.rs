//! Exact cyclotomic scalars with formal `q`-powers and factored rational functions of `Z = q^-s`.

mod cyclo;
mod rf;
mod scalar;
pub mod text;

pub use cyclo::Cyclo;
pub use rf::FactoredRF;
pub use scalar::{prime_power, Lattice, QPower, Scalar};
pub use text::{parse_rf, parse_scalar};
