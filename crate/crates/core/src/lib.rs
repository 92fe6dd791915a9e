pub mod characters;
pub mod curves;
pub mod error;
pub mod fracint;
pub mod models;
pub mod multipliers;
pub mod ode;
pub mod opcalc;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod suites;
pub mod transforms;
pub mod waves;

pub use error::{Error, Result};
