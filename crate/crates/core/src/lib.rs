pub mod bounded;
pub mod chase;
pub mod cli;
pub mod error;
pub mod io;
pub mod logic;
pub mod rules;

pub use error::{Error, Result};
