//! Dimension theory for the three-map overlapping self-similar system
//! `S1(x) = a x`, `S2(x) = b x`, `S3(x) = c x + 1 - c` on the line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dim_formulas;
pub mod empirical;
pub mod error;
pub mod ifs;
pub mod interval;
pub mod par;
pub mod rng;
pub mod separation;

pub use error::{Error, Result};
pub use ifs::{IfsParams, ProbVector, Symbol, Word};
pub use interval::Interval;
