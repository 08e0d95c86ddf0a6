// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod factorize;
pub mod functions;
pub mod hardy;
pub mod kernels;
pub mod measures;
pub mod parse;
pub mod point;
pub mod quadrature;

pub use error::{Error, Result};
pub use point::DiskPoint;
