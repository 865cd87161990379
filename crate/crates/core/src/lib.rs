pub mod arith;
pub mod cohomology;
pub mod engine;
pub mod error;
pub mod graphs;
pub mod identities;
pub mod oracles;
pub mod psi;
pub mod target;

pub use error::{Error, Result};
