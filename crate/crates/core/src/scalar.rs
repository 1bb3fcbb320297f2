//! Integer scalars usable by the exact linear algebra in [`crate::abgroup`].
//!
//! Every kernel of the linear algebra is written once against [`IntScalar`]
//! and instantiated for machine integers (fast path, overflow-checked) and for
//! [`BigInt`] (never overflows). Callers that want speed run the `i64`
//! instantiation first and retry with `BigInt` on [`Overflow`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Raised by checked arithmetic when a machine integer would overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar")
    }

    fn to_big(&self) -> BigInt;

    fn from_big(v: &BigInt) -> Result<Self, Overflow>;

    fn add_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_add(o).ok_or(Overflow)
    }

    fn sub_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(o).ok_or(Overflow)
    }

    fn mul_c(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(o).ok_or(Overflow)
    }

    /// `self - q * o`, checked.
    fn sub_mul_c(&self, q: &Self, o: &Self) -> Result<Self, Overflow> {
        self.sub_c(&q.mul_c(o)?)
    }

    /// `self + q * o`, checked.
    fn add_mul_c(&self, q: &Self, o: &Self) -> Result<Self, Overflow> {
        self.add_c(&q.mul_c(o)?)
    }
}

impl IntScalar for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(v: &BigInt) -> Result<Self, Overflow> {
        v.to_i64().ok_or(Overflow)
    }
}

impl IntScalar for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(v: &BigInt) -> Result<Self, Overflow> {
        v.to_i128().ok_or(Overflow)
    }
}

impl IntScalar for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn from_big(v: &BigInt) -> Result<Self, Overflow> {
        Ok(v.clone())
    }

    fn add_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self + o)
    }

    fn sub_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }

    fn mul_c(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
}

/// Runs `f` with `i64` scalars and falls back to `BigInt` on overflow.
pub fn with_fallback<R>(fast: impl FnOnce() -> Result<R, Overflow>, exact: impl FnOnce() -> R) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => exact(),
    }
}
