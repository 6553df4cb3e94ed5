pub mod cli;
pub mod error;
pub mod exact;
pub mod float;
pub mod geninv;
pub mod simlab;
pub mod verify;

pub use error::{Error, Result};
