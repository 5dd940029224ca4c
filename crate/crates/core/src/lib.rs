//! Numerical toolkit for the von Neumann capacity of noisy quantum channels.
//!
//! - [`qmat`]: dense complex matrices, partial traces, Jacobi eigensolver.
//! - [`entropy`]: Shannon/von Neumann entropies and entropy Venn diagrams.
//! - [`channel`]: Kraus and dilation channels, transcripts, chaining.
//! - [`depolarizing`]: closed forms for the depolarizing and dephasing channels.
//! - [`analysis`]: capacity maximization, inequality audits, Hamming bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod depolarizing;
pub mod entropy;
pub mod error;
pub mod qmat;

pub use error::{Error, Result};
