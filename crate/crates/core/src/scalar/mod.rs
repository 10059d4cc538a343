//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: [`Rational`] (arbitrary precision ℚ) and [`ParamFraction`]
//! (ℚ(p₀, p₁, …), used for quantum-space parameters).

mod param;
mod poly;
mod rational;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use param::ParamFraction;
pub use poly::{Monomial, MPoly};
pub use rational::Rational;

use crate::error::{Error, Result};

/// An exact, canonically represented field.
///
/// Equality is structural: two values compare equal iff they denote the same
/// field element.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from(v))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.clone() * &inv)
    }
}
