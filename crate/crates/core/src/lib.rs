//! Exact and p-adic arithmetic for regularized Eisenstein measures and their zeta functions.

pub mod bernoulli;
pub mod cyclotomic;
pub mod eisenstein;
pub mod error;
pub mod kl;
pub mod measure;
pub mod padic;
pub mod qseries;
pub mod report;
pub mod ring;
pub mod zeta;

pub use error::{Error, Result};
pub use padic::{PAdicApprox, PrimeContext};
