pub mod asymptotics;
pub mod domains;
pub mod error;
pub mod fefferman;
pub mod hermitian;
pub mod jets;
pub mod kahler;

pub use error::{Error, Result};
