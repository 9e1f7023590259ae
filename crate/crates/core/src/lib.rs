//! Structure, dimension formulas and empirical estimators for self-affine sponges.

pub mod dimension;
pub mod error;
pub mod estimate;
pub mod fixtures;
pub mod model;
pub mod numeric;
pub mod optimize;
pub mod structure;
pub mod subsystem;

pub use error::{Error, Result};
pub use model::{parse_template, parse_weights, BernoulliWeights, SpongeTemplate, Word};
