pub mod abelian;
pub mod construct;
pub mod error;
pub mod families;
pub mod harmonic;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
