//! Inhomogeneous sub-self-similar sets: finite approximations, Moran-type
//! dimension computations, box counting, chaos-game sampling and products.

pub mod boxcount;
pub mod cli;
pub mod codespace;
pub mod construct;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod product;

pub use error::{IsssError, Result};
