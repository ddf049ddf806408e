pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
