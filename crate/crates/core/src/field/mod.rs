//! Finite-level model of a non-archimedean local field and its characters.
//!
//! Every field with residue field `F_q` is represented by `F_q[t]/(t^m)`;
//! all quantities computed from depth-bounded data only ever look at a
//! bounded number of coefficients, which the [`Tracker`] records.

mod assoc;
mod chars;
mod fq;
mod ring;
pub mod schema;
mod tracker;
mod units;

pub use assoc::{associate, depth_and_bounds, AssociationCertificate};
pub use chars::{characters_up_to, normalize, turn, turn_scalar, AddChar, MultChar, Turn};
pub use fq::Fq;
pub use ring::{TruncatedField, Units};
pub use tracker::{purity_check, Purity, Tracker};
pub use units::{GenKind, Generator, UnitGroup};
