//! The integer scalar that counts and generating-function coefficients are
//! carried in.
//!
//! Everything here is exact. Any unsigned primitive works, as does
//! [`num_bigint::BigUint`] for degrees whose factorial outgrows 128 bits.
//! Arithmetic goes through the checked operations so that a too-narrow
//! scalar reports [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, One, Zero};

use crate::error::{Error, Result};

pub trait Count:
    Clone
    + Debug
    + Display
    + Ord
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Count for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Zero
        + One
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + CheckedDiv
        + FromPrimitive
        + Send
        + Sync
{
}

pub(crate) fn lift<T: Count>(value: usize) -> Result<T> {
    T::from_usize(value).ok_or(Error::Overflow("integer conversion"))
}

pub(crate) fn add<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow("sum"))
}

pub(crate) fn mul<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow("product"))
}

/// Exact quotient; fails if `b` does not divide `a`.
pub(crate) fn div_exact<T: Count>(a: &T, b: &T) -> Result<T> {
    let q = a.checked_div(b).ok_or(Error::Overflow("quotient"))?;
    if mul(&q, b)? != *a {
        return Err(Error::Internal(format!("{b} does not divide {a}")));
    }
    Ok(q)
}

/// `n!` in the scalar `T`.
pub fn factorial<T: Count>(n: usize) -> Result<T> {
    let mut acc = T::one();
    for m in 2..=n {
        acc = acc
            .checked_mul(&lift(m)?)
            .ok_or(Error::Overflow("factorial"))?;
    }
    Ok(acc)
}
