//! Exact rational numbers and the elementary number functions used by every
//! other module: integral and fractional parts, distance to the nearest
//! integer, and mediants.
//!
//! All values are reduced with a positive denominator. The canonical text
//! form is `num/den`, e.g. `-1/3` or `0/1`, and it is what every CLI output
//! prints.

mod constants;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use constants::{named_constant, NamedConstant, DEFAULT_PRECISION};
pub use parse::parse_real;

/// An exact rational number, always stored reduced with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds the reduced representative of `num/den`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        reduce(num.into(), den.into())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `None` when `self` is zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        self.numer().div_ceil(self.denom())
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        integral_part(self)
    }

    /// `self^exp` for a non-negative exponent.
    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Checks the stored-form invariants (positive denominator, gcd 1).
    pub fn is_canonical(&self) -> bool {
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }
}

/// Reduces `num/den` to lowest terms with a positive denominator.
pub fn reduce(num: BigInt, den: BigInt) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational(BigRational::new(num, den)))
}

/// `(num(a)+num(b)) / (den(a)+den(b))`, reduced.
///
/// Strictly between `a` and `b` whenever they differ.
pub fn mediant(a: &Rational, b: &Rational) -> Rational {
    Rational(BigRational::new(
        a.numer() + b.numer(),
        a.denom() + b.denom(),
    ))
}

/// `floor(x)`.
pub fn integral_part(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn fractional_part(x: &Rational) -> Rational {
    let r = x.numer().mod_floor(x.denom());
    Rational(BigRational::new(r, x.denom().clone()))
}

/// Nearest integer to `x`; ties resolve to the smaller integer.
pub fn round_half_down(x: &Rational) -> BigInt {
    // ceil(x - 1/2) = ceil((2n - d) / 2d)
    let two = BigInt::from(2);
    let n = x.numer() * &two - x.denom();
    let d = x.denom() * &two;
    n.div_ceil(&d)
}

/// `||x||`, the distance from `x` to the nearest integer; in `[0, 1/2]`.
pub fn nearest_int_distance(x: &Rational) -> Rational {
    let frac = fractional_part(x);
    let other = Rational::one() - &frac;
    frac.min(other)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p/q`, an integer, or a decimal literal. Named constants are
/// handled by [`parse_real`], which needs a precision.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_exact(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational::from_integer(BigInt::from(n))
            }
        }
    )*};
}
from_prim!(i32, i64, u32, u64, usize);

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
// Panics on a zero divisor, like integer division. Use `checked_div` when
// the divisor is not known to be nonzero.
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl PartialEq<BigInt> for Rational {
    fn eq(&self, other: &BigInt) -> bool {
        self.is_integer() && self.numer() == other
    }
}

impl PartialOrd<BigInt> for Rational {
    fn partial_cmp(&self, other: &BigInt) -> Option<Ordering> {
        Some((self.numer()).cmp(&(other * self.denom())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(r(4, 6).to_string(), "2/3");
        assert_eq!(r(3, -9).to_string(), "-1/3");
        assert_eq!(r(0, 7).to_string(), "0/1");
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(mediant(&r(0, 1), &r(1, 1)), r(1, 2));
        assert_eq!(mediant(&r(1, 3), &r(1, 2)), r(2, 5));
        assert_eq!(mediant(&r(1, 2), &r(1, 2)), r(1, 2));
    }

    #[test]
    fn nearest_int_distance_examples() {
        assert_eq!(nearest_int_distance(&r(7, 3)), r(1, 3));
        assert_eq!(nearest_int_distance(&r(1, 2)), r(1, 2));
        assert_eq!(nearest_int_distance(&r(-5, 4)), r(1, 4));
    }

    #[test]
    fn integral_and_fractional_parts() {
        assert_eq!(integral_part(&r(7, 3)), BigInt::from(2));
        assert_eq!(fractional_part(&r(7, 3)), r(1, 3));
        assert_eq!(integral_part(&r(-1, 4)), BigInt::from(-1));
        assert_eq!(fractional_part(&r(-1, 4)), r(3, 4));
        assert_eq!(integral_part(&r(5, 1)), BigInt::from(5));
        assert_eq!(fractional_part(&r(5, 1)).to_string(), "0/1");
    }

    #[test]
    fn round_half_down_ties_to_smaller() {
        assert_eq!(round_half_down(&r(3, 2)), BigInt::from(1));
        assert_eq!(round_half_down(&r(-3, 2)), BigInt::from(-2));
        assert_eq!(round_half_down(&r(5, 3)), BigInt::from(2));
        assert_eq!(round_half_down(&r(-2, 3)), BigInt::from(-1));
    }

    #[test]
    fn ceil_and_floor() {
        assert_eq!(r(7, 3).ceil(), BigInt::from(3));
        assert_eq!(r(-7, 3).ceil(), BigInt::from(-2));
        assert_eq!(r(-7, 3).floor(), BigInt::from(-3));
        assert_eq!(r(6, 3).ceil(), BigInt::from(2));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn arithmetic_stays_canonical(a in arb_rational(), b in arb_rational()) {
            prop_assert!((&a + &b).is_canonical());
            prop_assert!((&a - &b).is_canonical());
            prop_assert!((&a * &b).is_canonical());
            if let Some(q) = a.checked_div(&b) {
                prop_assert!(q.is_canonical());
            }
            prop_assert!(mediant(&a, &b).is_canonical());
        }

        #[test]
        fn mediant_is_strictly_between(a in arb_rational(), b in arb_rational()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assume!(lo < hi);
            let m = mediant(&lo, &hi);
            prop_assert!(lo < m && m < hi);
        }

        #[test]
        fn nearest_int_distance_is_periodic(x in arb_rational(), m in -1000i64..1000) {
            let d = nearest_int_distance(&x);
            prop_assert!(!d.is_negative() && d <= r(1, 2));
            prop_assert_eq!(nearest_int_distance(&(&x + Rational::from(m))), d);
        }

        #[test]
        fn parts_sum_to_value(x in arb_rational()) {
            let f = fractional_part(&x);
            prop_assert!(!f.is_negative() && f < Rational::one());
            prop_assert_eq!(Rational::from_integer(integral_part(&x)) + f, x);
        }

        #[test]
        fn canonical_text_round_trips(x in arb_rational()) {
            let text = x.to_string();
            prop_assert_eq!(text.parse::<Rational>().unwrap(), x.clone());
            prop_assert_eq!(parse_real(&text, 10).unwrap().to_string(), text);
        }
    }
}
