pub mod error;
pub mod gfq;
pub mod witt;
pub mod dlgroup;
pub mod xhvar;
pub mod cyclotomic;
pub mod chardual;
pub mod indexsets;
pub mod cohom;
pub mod cli;

pub use error::{Error, Result};
