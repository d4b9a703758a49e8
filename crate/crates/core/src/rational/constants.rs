//! Decimal truncations of a fixed set of irrational constants.
//!
//! Each constant c is returned as `floor(c * 10^d) / 10^d`. Square roots
//! come from exact integer square roots; `e` and `pi` come from fixed-point
//! series whose accumulated truncation error is tracked, adding guard digits
//! until the floor is certain.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{reduce, Rational};
use crate::error::Error;

/// Decimal digits used for named constants when no precision is given.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    Sqrt2,
    Sqrt3,
    Sqrt5,
    Phi,
    E,
    Pi,
}

impl NamedConstant {
    pub const ALL: [NamedConstant; 6] = [
        NamedConstant::Sqrt2,
        NamedConstant::Sqrt3,
        NamedConstant::Sqrt5,
        NamedConstant::Phi,
        NamedConstant::E,
        NamedConstant::Pi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedConstant::Sqrt2 => "sqrt2",
            NamedConstant::Sqrt3 => "sqrt3",
            NamedConstant::Sqrt5 => "sqrt5",
            NamedConstant::Phi => "phi",
            NamedConstant::E => "e",
            NamedConstant::Pi => "pi",
        }
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        NamedConstant::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

/// `constant` truncated toward zero to `precision` decimal digits.
pub fn named_constant(constant: NamedConstant, precision: u32) -> Rational {
    let scale = pow10(precision);
    let scaled = match constant {
        NamedConstant::Sqrt2 => isqrt_scaled(2, precision),
        NamedConstant::Sqrt3 => isqrt_scaled(3, precision),
        NamedConstant::Sqrt5 => isqrt_scaled(5, precision),
        // floor((10^d + floor(sqrt5 * 10^d)) / 2) = floor(phi * 10^d)
        NamedConstant::Phi => (&scale + isqrt_scaled(5, precision)) >> 1u32,
        NamedConstant::E => certified_floor(precision, e_fixed),
        NamedConstant::Pi => certified_floor(precision, pi_fixed),
    };
    reduce(scaled, scale).expect("10^d is nonzero")
}

fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// `floor(sqrt(n) * 10^d)`.
fn isqrt_scaled(n: u32, digits: u32) -> BigInt {
    (BigInt::from(n) * pow10(2 * digits)).sqrt()
}

/// Runs `approx(digits)`, which returns `(a, err)` with
/// `|a - c * 10^digits| <= err`, at increasing guard widths until
/// `floor(c * 10^precision)` is determined.
fn certified_floor(precision: u32, approx: fn(u32) -> (BigInt, BigInt)) -> BigInt {
    let mut guard = 12u32;
    loop {
        let (a, err) = approx(precision + guard);
        let g = pow10(guard);
        let lo = (&a - &err).div_floor(&g);
        let hi = (&a + &err).div_floor(&g);
        if lo == hi {
            return lo;
        }
        guard += 12;
    }
}

/// `e * 10^digits` from the series of 1/k!.
fn e_fixed(digits: u32) -> (BigInt, BigInt) {
    let scale = pow10(digits);
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term;
        k += 1;
        term /= k;
    }
    // Each computed term is off by less than 2 and the dropped tail is
    // below 2 once a computed term reaches zero.
    let err = BigInt::from(2 * k + 4);
    (sum, err)
}

/// `pi * 10^digits` by Machin's formula, pi = 16 atan(1/5) - 4 atan(1/239).
fn pi_fixed(digits: u32) -> (BigInt, BigInt) {
    let scale = pow10(digits);
    let (a5, n5) = atan_inv(5, &scale);
    let (a239, n239) = atan_inv(239, &scale);
    let value = a5 * 16 - a239 * 4;
    let err = BigInt::from(16 * (2 * n5 + 2) + 4 * (2 * n239 + 2));
    (value, err)
}

/// `atan(1/x) * scale` with the number of terms summed. Each summed term is
/// off by less than 2 and the dropped alternating tail is below 1.
fn atan_inv(x: u64, scale: &BigInt) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}
