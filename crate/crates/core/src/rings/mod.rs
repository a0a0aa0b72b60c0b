//! Exact coefficient rings.
//!
//! Every ring element knows its own descriptor (variables, truncation), so
//! the zero and unit of a ring are obtained from a witness element via
//! [`Ring::zero_like`] and [`Ring::one_like`].

mod laurent;
mod poly;
mod rational;

use std::fmt;

use thiserror::Error;

pub use laurent::{laurent_exp, rb_identity_check, LaurentSeries};
pub use poly::TruncatedPoly;
pub use rational::{format_rational, parse_rational, rat, rat_int, Rational};

/// Default ε truncation order.
pub const DEFAULT_EPS_HIGH: i32 = 6;
/// Default total-degree bound for polynomial coefficients.
pub const DEFAULT_X_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0}")]
    Mismatch(String),
    #[error("coefficient of exponent {requested} is outside the validity window (known up to {high})")]
    OutOfWindow { requested: i64, high: i64 },
    #[error("exponential of a pole is not a Laurent series")]
    EssentialSingularity,
    #[error("exponential of a non-nilpotent constant does not terminate")]
    NonTerminating,
    #[error("division by zero")]
    DivisionByZero,
}

/// Commutative-or-not exact ring with an element-carried descriptor.
pub trait Ring: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_add(&self, rhs: &Self) -> Result<Self, RingError>;
    fn try_mul(&self, rhs: &Self) -> Result<Self, RingError>;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// Equality on the window where both operands are known.
    fn agrees(&self, other: &Self) -> bool;
    fn compatible(&self, other: &Self) -> Result<(), RingError>;

    fn is_commutative(&self) -> bool {
        true
    }

    fn rational_like(&self, c: &Rational) -> Self {
        self.one_like().scale(c)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Which side of the minimal-subtraction splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    /// Pole part, exponents `< 0`.
    Minus,
    /// Regular part, exponents `>= 0`.
    Plus,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Minus => "minus",
            Split::Plus => "plus",
        }
    }
}

/// An idempotent Rota-Baxter algebra of weight -1, given by its two
/// complementary projections.
pub trait RotaBaxter: Ring {
    fn project(&self, side: Split) -> Self;

    fn p_minus(&self) -> Self {
        self.project(Split::Minus)
    }

    fn p_plus(&self) -> Self {
        self.project(Split::Plus)
    }

    /// Whether `project(side)` is known on its whole range, not just on a
    /// truncated part of it.
    fn determines(&self, side: Split) -> Result<(), RingError> {
        let _ = side;
        Ok(())
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        rat_int(0)
    }

    fn one_like(&self) -> Self {
        rat_int(1)
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        Ok(self + rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        Ok(self * rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, c: &Rational) -> Self {
        self * c
    }

    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }

    fn agrees(&self, other: &Self) -> bool {
        self == other
    }

    fn compatible(&self, _other: &Self) -> Result<(), RingError> {
        Ok(())
    }
}
