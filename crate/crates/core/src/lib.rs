//! Exact simultaneous rational approximation under a joint error and
//! denominator constraint, with the Farey and mediant-chain machinery it
//! rests on.
//!
//! Every number is an exact [`Rational`]; irrational inputs enter as
//! truncated decimal stand-ins of a chosen precision.

pub mod cli;
pub mod error;
pub mod farey;
pub mod mediant_chain;
pub mod rational;
pub mod selftest;
pub mod simultaneous;

pub use error::{Error, Result};
pub use rational::Rational;
