//! Riemann problems for the two-dimensional full compressible Euler system
//! with an ideal gas: wave-pattern classification, explicit admissible fan
//! subsolutions, their algebraic verification, and patched composites for
//! data whose one-dimensional solution contains a shock.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gas;
pub mod patching;
pub mod riemann1d;
pub mod subsolution;
pub mod verifier;

pub use error::{Error, Result};
pub use gas::{GasModel, PrimState};
