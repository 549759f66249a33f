//! Exact p-adic linear algebra for special values of zeta functions of
//! F-gauges over finite fields.

pub mod error;
pub mod gauge;
pub mod isocrystal;
pub mod bockstein;
pub mod padic;
pub mod zeta;

pub use error::{Error, Result};
