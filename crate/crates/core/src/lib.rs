//! Directed graph convolutional networks built on first- and second-order
//! proximity operators, with the diagnostics and training protocol around
//! them.

pub mod cli;
pub mod error;
pub mod graph;
pub mod nn;
pub mod proximity;
pub mod smoothness;
pub mod synth;
pub mod train;

pub use error::{DgcnError, Result};
