//! Exact arithmetic for local class field theory at finite precision.
//!
//! Building blocks, bottom up: integer linear algebra ([`abgroup`]), finite
//! fields ([`ffield`]), truncated Witt vectors ([`witt`]), local fields
//! ([`localfield`]), finite extensions with their Galois groups
//! ([`extension`]), ramification filtrations ([`ramify`]), Tate cohomology
//! ([`tatecoh`]) and the verification harness tying them together
//! ([`lcft`]). The [`cli`] module backs the `lcft` binary.

pub mod abgroup;
pub mod cli;
pub mod error;
pub mod extension;
pub mod ffield;
pub mod lcft;
pub mod localfield;
pub mod ramify;
pub mod scalar;
pub mod tatecoh;
pub mod witt;

pub use error::{Error, Result};

use num_bigint::BigInt;

/// Integer matrix over arbitrary-precision integers.
pub type IntMatrix = abgroup::Matrix<BigInt>;
/// Integer matrix over machine integers, for the overflow-checked fast path.
pub type SmallMatrix = abgroup::Matrix<i64>;
/// Exact rationals used by the Herbrand functions.
pub type Rational = num_rational::BigRational;
