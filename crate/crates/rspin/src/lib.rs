//! Spin structures, square-tiled surfaces and mapping class computations.

pub mod error;
pub mod johnson;
pub mod mcg_words;
pub mod origami;
pub mod spin;
pub mod suites;
pub mod symplectic;
pub mod thurston_veech;

pub use error::{Error, Result};
