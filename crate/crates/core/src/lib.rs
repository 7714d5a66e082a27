//! Hall–Littlewood processes and the singular numbers of products of
//! p-adic random matrices.

pub mod asym;
pub mod error;
pub mod exec;
pub mod harness;
pub mod hlproc;
pub mod padic;
pub mod rational;
pub mod rng;
pub mod stats;
pub mod symfunc;
pub mod trajectory;

pub use error::{Error, Result};
