pub mod cli;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod graph;
pub mod invariants;
pub mod semigroup;
pub mod series;

pub use error::{Error, Result};
