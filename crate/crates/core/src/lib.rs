//! Sparse-graph code construction and analysis.

pub mod basecode;
pub mod decode;
pub mod ensemble;
pub mod error;
pub mod exit;
pub mod fraction;
pub mod gf2;
pub mod graphgen;
pub mod sim;
pub mod wt2graph;

pub use error::{Error, Result};
