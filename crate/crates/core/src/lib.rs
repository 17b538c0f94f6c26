pub mod bundle;
pub mod cech;
pub mod claims;
pub mod cli;
pub mod config;
pub mod deform;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod moduli;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
