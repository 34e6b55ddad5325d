//! Free vibrating plates under tension on d-dimensional balls.

pub mod bessel;
pub mod error;
pub mod modes;
pub mod quadrature;
pub mod spectrum;
pub mod verify;

pub use error::{PlateError, Result};
