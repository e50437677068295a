//! Timing intervals with open/closed endpoint flags.
//!
//! The same type backs the intervals attached to temporal operators and the
//! effective intervals computed for subformulas. Operator intervals must be
//! nonsingular (`lower < upper`); effective intervals may collapse to a
//! point such as `[0,0]`.

use crate::rational::{format_rational, is_nonnegative, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval lower bound {0} is negative")]
    NegativeBound(String),
    #[error("interval bounds are out of order: {0} > {1}")]
    OutOfOrder(String, String),
    #[error("temporal operator interval must be nonsingular, got [{0},{0}]")]
    SingularOperator(String),
    #[error("empty interval: bounds {0} and {1} with an open endpoint")]
    EmptySingular(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
    lower_closed: bool,
    upper_closed: bool,
}

impl Interval {
    /// A general interval; singular `[c,c]` is allowed, `[c,c)`-style empty
    /// singletons are not.
    pub fn new(
        lower: Rational,
        upper: Rational,
        lower_closed: bool,
        upper_closed: bool,
    ) -> Result<Self, IntervalError> {
        if !is_nonnegative(&lower) {
            return Err(IntervalError::NegativeBound(format_rational(&lower)));
        }
        if lower > upper {
            return Err(IntervalError::OutOfOrder(
                format_rational(&lower),
                format_rational(&upper),
            ));
        }
        if lower == upper && !(lower_closed && upper_closed) {
            return Err(IntervalError::EmptySingular(
                format_rational(&lower),
                format_rational(&upper),
            ));
        }
        Ok(Interval {
            lower,
            upper,
            lower_closed,
            upper_closed,
        })
    }

    /// A closed interval `[lower, upper]`.
    pub fn closed(lower: Rational, upper: Rational) -> Result<Self, IntervalError> {
        Interval::new(lower, upper, true, true)
    }

    /// An interval for a temporal operator: additionally rejects singular
    /// intervals.
    pub fn operator(
        lower: Rational,
        upper: Rational,
        lower_closed: bool,
        upper_closed: bool,
    ) -> Result<Self, IntervalError> {
        let iv = Interval::new(lower, upper, lower_closed, upper_closed)?;
        if iv.is_singular() {
            return Err(IntervalError::SingularOperator(format_rational(&iv.lower)));
        }
        Ok(iv)
    }

    /// The singular point interval `[0,0]` used to seed effective-interval
    /// propagation.
    pub fn zero() -> Self {
        Interval {
            lower: Rational::zero(),
            upper: Rational::zero(),
            lower_closed: true,
            upper_closed: true,
        }
    }

    pub fn lower(&self) -> Rational {
        self.lower
    }

    pub fn upper(&self) -> Rational {
        self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_singular(&self) -> bool {
        self.lower == self.upper
    }

    pub fn is_closed(&self) -> bool {
        self.lower_closed && self.upper_closed
    }

    /// Component-wise interval addition. The sum is open on a side whenever
    /// either operand is open on that side.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
            lower_closed: self.lower_closed && other.lower_closed,
            upper_closed: self.upper_closed && other.upper_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lower_closed { '[' } else { '(' },
            format_rational(&self.lower),
            format_rational(&self.upper),
            if self.upper_closed { ']' } else { ')' },
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Interval addition as a free function.
pub fn interval_add(a: &Interval, b: &Interval) -> Interval {
    a.add(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn iv(l: i64, u: i64) -> Interval {
        Interval::closed(rat(l), rat(u)).unwrap()
    }

    #[test]
    fn addition_matches_worked_examples() {
        assert_eq!(Interval::zero().add(&iv(1, 2)), iv(1, 2));
        assert_eq!(iv(1, 2).add(&iv(4, 6)), iv(5, 8));
        assert_eq!(
            Interval::zero().add(&iv(1, 2)).add(&iv(4, 6)),
            iv(5, 8),
            "chained addition from [0,0]"
        );
    }

    #[test]
    fn addition_propagates_openness() {
        let half_open = Interval::new(rat(0), rat(2), false, true).unwrap();
        let sum = iv(0, 1).add(&half_open);
        assert_eq!(sum.lower(), rat(0));
        assert_eq!(sum.upper(), rat(3));
        assert!(!sum.lower_closed());
        assert!(sum.upper_closed());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Interval::closed(rat(5), rat(3)),
            Err(IntervalError::OutOfOrder(..))
        ));
        assert!(matches!(
            Interval::closed(rat(-1), rat(3)),
            Err(IntervalError::NegativeBound(..))
        ));
        assert!(matches!(
            Interval::operator(rat(3), rat(3), true, true),
            Err(IntervalError::SingularOperator(..))
        ));
        assert!(Interval::closed(rat(3), rat(3)).is_ok());
        assert!(Interval::new(rat(3), rat(3), false, true).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(iv(0, 30).to_string(), "[0,30]");
        let open = Interval::new(rat(0), ratio(1, 25), false, true).unwrap();
        assert_eq!(open.to_string(), "(0,0.04]");
    }
}
