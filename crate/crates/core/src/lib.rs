pub mod error;
pub mod modring;
pub mod sigterm;
pub mod algcore;
pub mod harness;
pub mod idealth;
pub mod structure;
pub mod variety;

pub use error::{Error, Result};
