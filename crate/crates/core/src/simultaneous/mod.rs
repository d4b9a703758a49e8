//! Simultaneous approximation `x_i ~ p_i / q` with a shared denominator under
//! the joint constraint
//!
//! ```text
//! |x_i - p_i/q| <= eps * t_i   for every i,      eps * q <= min_i t_i
//! ```
//!
//! The exhaustive smallest-`q` scan ([`brute_force_solve`]) is the ground
//! truth. [`compose_solve`] builds a common denominator stage by stage from
//! Farey brackets and is only a heuristic. [`dirichlet_solve`] is the
//! classical `1 <= q < T^n` baseline, [`epsilon_threshold`] sweeps a grid of
//! `eps` values and [`compare`] puts the constrained and Dirichlet
//! denominators side by side.

mod brute;
mod check;
mod compare;
mod compose;
mod dirichlet;
mod input;
mod threshold;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use brute::{brute_force_solve, brute_force_solve_with};
pub use check::{best_numerator, check_solution, check_solution_with, CheckReport, ItemCheck};
pub use compare::{compare, forced_dirichlet_t, ComparisonReport};
pub use compose::{
    compose_solve, compose_solve_with, ComposeOptions, ComposeOutcome, ComposeStage,
};
pub use dirichlet::{dirichlet_solve, dirichlet_solve_with};
pub use input::parse_constraints;
pub use threshold::{epsilon_threshold, geometric_grid, linear_grid, parse_grid, ThresholdReport};

/// Default cap on the number of denominators any scan may visit.
pub const DEFAULT_MAX_SCAN: u64 = 10_000_000;

/// Whether the per-item error inequality is `<=` (the default) or `<`.
/// The denominator condition `eps * q <= t` is always non-strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    NonStrict,
    Strict,
}

/// Options shared by the scanning solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Most denominators a scan may try before reporting
    /// [`Error::BudgetExceeded`].
    pub max_scan: u64,
    pub strictness: Strictness,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_scan: DEFAULT_MAX_SCAN,
            strictness: Strictness::NonStrict,
        }
    }
}

/// One target real with its positive tolerance weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub x: Rational,
    pub t: Rational,
}

/// The finite set `{(x_i, t_i)}`, non-empty, every `t_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSet {
    items: Vec<Constraint>,
    t_min: Rational,
}

impl ConstraintSet {
    pub fn new(items: Vec<Constraint>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid("constraint set is empty"));
        }
        if let Some(bad) = items.iter().find(|c| !c.t.is_positive()) {
            return Err(Error::invalid(format!(
                "tolerance weight must be positive, got {} for x = {}",
                bad.t, bad.x
            )));
        }
        let t_min = items.iter().map(|c| &c.t).min().expect("non-empty").clone();
        Ok(ConstraintSet { items, t_min })
    }

    /// Builds a set from `(x, t)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(x, t)| Constraint { x, t })
                .collect(),
        )
    }

    pub fn items(&self) -> &[Constraint] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn t_min(&self) -> &Rational {
        &self.t_min
    }

    pub fn xs(&self) -> Vec<Rational> {
        self.items.iter().map(|c| c.x.clone()).collect()
    }

    /// The common weight when every `t_i` is equal.
    pub fn uniform_t(&self) -> Option<&Rational> {
        let t = &self.items[0].t;
        self.items.iter().all(|c| &c.t == t).then_some(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Compose,
    Dirichlet,
}

/// A common denominator with its numerators and exact per-item errors
/// `|x_i - p_i/q|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub q: u64,
    #[serde(serialize_with = "serialize_bigints")]
    pub ps: Vec<BigInt>,
    pub errors: Vec<Rational>,
    /// The scale the solution was produced for; `None` for the Dirichlet
    /// baseline, whose bound is `1/(T q)` rather than `eps * t_i`.
    pub epsilon: Option<Rational>,
    pub method: Method,
}

impl Solution {
    /// Computes the exact errors of `ps / q` against `xs`.
    pub fn new(
        xs: &[Rational],
        q: u64,
        ps: Vec<BigInt>,
        epsilon: Option<Rational>,
        method: Method,
    ) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("denominator q must be at least 1"));
        }
        if xs.len() != ps.len() {
            return Err(Error::invalid(format!(
                "{} numerators for {} reals",
                ps.len(),
                xs.len()
            )));
        }
        let errors = xs
            .iter()
            .zip(&ps)
            .map(|(x, p)| (x - Rational::new(p.clone(), q).expect("q >= 1")).abs())
            .collect();
        Ok(Solution {
            q,
            ps,
            errors,
            epsilon,
            method,
        })
    }

    pub fn max_error(&self) -> Rational {
        self.errors
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// Outcome of the exact solvers. Infeasibility is a normal answer, not an
/// error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Feasibility {
    Feasible { solution: Solution },
    Infeasible { reason: String },
}

impl Feasibility {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Feasibility::Feasible { solution } => Some(solution),
            Feasibility::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn serialize_bigint<S: Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `x = a/b` and the bound `eps * t = c/d` as integers, so that a candidate
/// `p/q` passes when `|q a - p b| * d <= c * q * b`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledItem {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl ScaledItem {
    pub(crate) fn new(x: &Rational, bound: &Rational) -> Self {
        ScaledItem {
            a: x.numer().clone(),
            b: x.denom().clone(),
            c: bound.numer().clone(),
            d: bound.denom().clone(),
        }
    }

    /// Nearest numerator at `q` and `|q a - p b|`.
    fn deviation(&self, q: &BigInt) -> (BigInt, BigInt) {
        let qa = q * &self.a;
        let p = check::round_half_down_ratio(&qa, &self.b);
        let dev = BigInt::from((&qa - &p * &self.b).magnitude().clone());
        (p, dev)
    }

    /// Nearest numerator at `q` and whether `|x - p/q|` meets the bound.
    pub(crate) fn test(&self, q: &BigInt, strictness: Strictness) -> (BigInt, bool) {
        let (p, dev) = self.deviation(q);
        let lhs = dev * &self.d;
        let rhs = &self.c * q * &self.b;
        let ok = match strictness {
            Strictness::NonStrict => lhs <= rhs,
            Strictness::Strict => lhs < rhs,
        };
        (p, ok)
    }

    /// Nearest numerator at `q` and whether `||q x|| <= bound`.
    pub(crate) fn test_distance(&self, q: &BigInt) -> (BigInt, bool) {
        let (p, dev) = self.deviation(q);
        let ok = dev * &self.d <= &self.c * &self.b;
        (p, ok)
    }
}
