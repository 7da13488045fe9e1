pub mod ambient;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod format;
pub mod set;
pub mod sidon;
pub mod structure;
pub mod util;

pub use ambient::{AmbientSpec, CompositionMode, Element, Fraction, Value};
pub use error::{Error, Result};
pub use set::GroundSet;
