//! p-adic iterated integrals, multiple polylogarithms and multiple zeta
//! values on the projective line minus {0, 1, ∞}.
//!
//! Layers, bottom-up:
//! - [`padic`]: capped relative-precision p-adic numbers.
//! - [`shuffle`]: words and the shuffle Hopf algebra.
//! - [`series`]: weight-truncated noncommutative series.
//! - [`kz`]: the KZ fundamental solution as a table of polylogarithms.
//! - [`frobenius`]: the Frobenius-fixed associator and the two period maps.
//! - [`verify`]: invariant suites shared by the CLI and the tests.

pub mod error;
pub mod frobenius;
pub mod kz;
pub mod padic;
pub mod series;
pub mod shuffle;
pub mod verify;

pub use error::{Error, Result};
pub use padic::PadicNumber;
pub use series::{Coefficient, NCSeries};
pub use shuffle::{Alphabet, Letter, ShuffleElement, Word};
