pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod routing;
pub mod sparsify;

#[cfg(test)]
mod oracle;
#[cfg(test)]
mod oracle_tests;

pub use error::{Error, Result};
