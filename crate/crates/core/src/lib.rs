#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exec;
pub mod field;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
pub mod tails;
pub mod transform;
pub mod verify;
pub mod wavecore;

pub use error::{Error, Result};
