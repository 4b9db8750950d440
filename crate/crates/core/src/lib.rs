pub mod baer_krull;
pub mod certificates;
pub mod cli;
pub mod error;
pub mod instances;
pub mod ovf;
pub mod probe;
pub mod ratfunc;
pub mod selftest;
pub mod valuations;

pub use error::{Error, Result};
