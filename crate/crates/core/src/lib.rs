//! Directional total positivity checks for densities on finite lattices, and
//! dependence properties of order statistics.

pub mod cli;
pub mod error;
pub mod generate;
pub mod lattice;
pub mod montecarlo;
pub mod orderstats;
pub mod positivity;
pub mod verify;

mod text;

pub use error::{Error, Result};
