pub mod dynamics;
pub mod error;
pub mod fields;
pub mod grid;
pub mod minkowski;
pub mod numerics;
pub mod propagator;

pub use error::{Error, Result};
