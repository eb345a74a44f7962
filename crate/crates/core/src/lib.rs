//! Bergman kernels, diastasis functions and Calabi-criterion rigidity
//! diagnostics for the unit ball, Hartogs-type domains over the ball and
//! egg domains over the ball.

pub mod calabi;
pub mod cli;
pub mod diastasis;
pub mod error;
pub mod exact;
pub mod kernels;
pub mod oracle;
pub mod rigidity;
pub mod series;

pub use error::{Error, Result};
