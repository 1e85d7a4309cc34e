//! Univariate polynomial and rational-function arithmetic.
//!
//! Everything is generic over a [`Coeff`] backend: exact [`Rational`]s for
//! certifying identities, and `Complex64` for Bethe-root work. A single value
//! never mixes backends.

mod coeff;
mod function;
mod poly;

pub use coeff::{format_rational, parse_rational, q, Coeff, Rational};
pub use function::RatFun;
pub use poly::Poly;
