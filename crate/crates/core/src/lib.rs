pub mod eig;
pub mod experiment;
pub mod formal;
pub mod hermite;
pub mod polyad;
pub mod prep;
pub mod spectrum;
pub mod error;

pub use error::{Error, Result};
