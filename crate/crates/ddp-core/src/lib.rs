pub mod decimal;
pub mod error;
pub mod rational;
pub mod value;

pub use decimal::{HighPrecDecimal, DEFAULT_PRECISION, MIN_PRECISION};
pub use error::{Error, Result};
pub use rational::Rational;
pub use value::Value;
