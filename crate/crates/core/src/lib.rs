pub mod analysis;
pub mod cascade;
pub mod error;
pub mod polyrat;
pub mod symdesign;
pub mod synthesis;

pub use error::{Error, Result, SpecViolation};
