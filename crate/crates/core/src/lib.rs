pub mod algebra;
pub mod amice;
pub mod checks;
pub mod cli;
pub mod corresp;
pub mod error;
pub mod laurent;
pub mod reps;
pub mod tower;

pub use error::{Error, Result};
