//! Double-precision evaluation of Weierstrass, theta and lattice-sum identities.

pub mod checks;
pub mod error;
pub mod lattice;
pub mod theta;
pub mod weierstrass;

pub use error::{OracleError, Result};
pub use lattice::{Estimate, Lattice, TruncationPolicy};
