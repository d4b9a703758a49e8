//! Mediant chains grown from a consecutive Farey pair `h1/k1 < h2/k2`:
//!
//! ```text
//! U_i = (h2 + i h1) / (k2 + i k1)    decreasing from h2/k2 toward h1/k1
//! V_j = (h1 + j h2) / (k1 + j k2)    increasing from h1/k1 toward h2/k2
//! ```
//!
//! with the closed-form gaps
//!
//! ```text
//! U_i - U_{i+1} = 1 / ((k2 + i k1)(k2 + (i+1) k1))    U_i - h1/k1 = 1 / (k1 (k2 + i k1))
//! V_{j+1} - V_j = 1 / ((k1 + j k2)(k1 + (j+1) k2))    h2/k2 - V_j = 1 / (k2 (k1 + j k2))
//! ```
//!
//! and the subdivision of a pair's interval into irreducible points with
//! bounded gaps and bounded denominators by growing one chain toward the
//! smaller-denominator endpoint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{farey_pairs, FareyOrder, FareyPair};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainSide {
    #[serde(rename = "U_descending")]
    UDescending,
    #[serde(rename = "V_ascending")]
    VAscending,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MediantChain {
    pub terms: Vec<Rational>,
    pub side: ChainSide,
    pub base: FareyPair,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn unit_over(den: BigInt) -> Rational {
    Rational::new(1, den).expect("chain denominators are positive")
}

/// `U_i`.
pub fn u_term(base: &FareyPair, i: u64) -> Rational {
    let (h1, k1, h2, k2) = base.parts();
    let i = big(i);
    Rational::new(h2 + &i * h1, k2 + &i * k1).expect("positive denominator")
}

/// `V_j`.
pub fn v_term(base: &FareyPair, j: u64) -> Rational {
    let (h1, k1, h2, k2) = base.parts();
    let j = big(j);
    Rational::new(h1 + &j * h2, k1 + &j * k2).expect("positive denominator")
}

/// `[U_0, ..., U_count]`.
pub fn chain_u(base: &FareyPair, count: u64) -> MediantChain {
    MediantChain {
        terms: (0..=count).map(|i| u_term(base, i)).collect(),
        side: ChainSide::UDescending,
        base: base.clone(),
    }
}

/// `[V_0, ..., V_count]`.
pub fn chain_v(base: &FareyPair, count: u64) -> MediantChain {
    MediantChain {
        terms: (0..=count).map(|j| v_term(base, j)).collect(),
        side: ChainSide::VAscending,
        base: base.clone(),
    }
}

/// `U_i - U_{i+1}`.
pub fn gap_u(base: &FareyPair, i: u64) -> Rational {
    let (_, k1, _, k2) = base.parts();
    unit_over((k2 + big(i) * k1) * (k2 + big(i + 1) * k1))
}

/// `V_{j+1} - V_j`.
pub fn gap_v(base: &FareyPair, j: u64) -> Rational {
    let (_, k1, _, k2) = base.parts();
    unit_over((k1 + big(j) * k2) * (k1 + big(j + 1) * k2))
}

/// `U_i - h1/k1`.
pub fn tail_u(base: &FareyPair, i: u64) -> Rational {
    let (_, k1, _, k2) = base.parts();
    unit_over(k1 * (k2 + big(i) * k1))
}

/// `h2/k2 - V_j`.
pub fn tail_v(base: &FareyPair, j: u64) -> Rational {
    let (_, k1, _, k2) = base.parts();
    unit_over(k2 * (k1 + big(j) * k2))
}

/// How a pair's interval was refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// The pair's own gap already met the bound.
    None,
    /// `U_p, ..., U_1` inserted (right endpoint has the larger denominator,
    /// or both denominators are 1).
    GrowU { chain_index: u64 },
    /// `V_1, ..., V_p` inserted (left endpoint has the larger denominator).
    GrowV { chain_index: u64 },
}

/// Strictly increasing irreducible points from one endpoint to the other,
/// every gap at most `gap_bound` and every denominator at most
/// `denom_bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    pub points: Vec<Rational>,
    pub gap_bound: Rational,
    pub denom_bound: u64,
    pub refinements: Vec<Refinement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapStats {
    pub points: usize,
    pub max_gap: Rational,
    pub min_gap: Rational,
    pub max_denominator: String,
}

impl Subdivision {
    pub fn gaps(&self) -> impl Iterator<Item = Rational> + '_ {
        self.points.windows(2).map(|w| &w[1] - &w[0])
    }

    pub fn stats(&self) -> GapStats {
        let gaps: Vec<Rational> = self.gaps().collect();
        let max_den = self
            .points
            .iter()
            .map(|p| p.denom().clone())
            .max()
            .unwrap_or_else(BigInt::one);
        GapStats {
            points: self.points.len(),
            max_gap: gaps.iter().max().cloned().unwrap_or_else(Rational::zero),
            min_gap: gaps.iter().min().cloned().unwrap_or_else(Rational::zero),
            max_denominator: max_den.to_string(),
        }
    }
}

/// Smallest index `p >= 0` with `a * (b + p*a) >= c`, i.e. the shortest
/// chain whose final gap `1 / (a (b + p a))` is at most `1/c`.
fn minimal_chain_index(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    let needed = c.div_ceil(a); // b + p*a >= needed
    if &needed <= b {
        BigInt::zero()
    } else {
        (needed - b).div_ceil(a)
    }
}

/// Refines one consecutive pair.
///
/// When the pair's gap `1/(k1 k2)` exceeds `gap_bound`, a mediant chain is
/// grown from the larger-denominator endpoint toward the other: the U chain
/// when `k2 > k1` (and by convention when `k1 = k2`, which only happens for
/// `(0/1, 1/1)`), the V chain when `k1 > k2`. The chain index is the
/// smallest one making the last gap small enough; every earlier chain gap is
/// bounded by the first, so the answer is infeasible exactly when that first
/// gap is too large or the final denominator passes `denom_bound`.
pub fn subdivide(
    base: &FareyPair,
    gap_bound: &Rational,
    denom_bound: u64,
    max_points: usize,
) -> Result<Subdivision> {
    if !gap_bound.is_positive() {
        return Err(Error::invalid("gap bound must be positive"));
    }
    let (_, k1, _, k2) = base.parts();
    let dmax = big(denom_bound);
    let done = |points: Vec<Rational>, refinement| Subdivision {
        points,
        gap_bound: gap_bound.clone(),
        denom_bound,
        refinements: vec![refinement],
    };
    if k1 > &dmax || k2 > &dmax {
        return Err(Error::Infeasible(format!(
            "endpoint denominators of ({}, {}) exceed the denominator bound {denom_bound}",
            base.left(),
            base.right()
        )));
    }
    if &base.gap() <= gap_bound {
        return Ok(done(
            vec![base.left().clone(), base.right().clone()],
            Refinement::None,
        ));
    }

    // gap <= 1/c  <=>  1/gap >= c  for integer reciprocals
    let c = gap_bound.recip().expect("positive").ceil();
    let grow_u = k2 >= k1;
    let (far, near) = if grow_u { (k1, k2) } else { (k2, k1) };
    let index = minimal_chain_index(far, near, &c);
    debug_assert!(!index.is_zero());

    let first_gap_den = near * (near + far);
    if first_gap_den < c {
        return Err(Error::Infeasible(format!(
            "the first chain gap 1/{first_gap_den} of ({}, {}) already exceeds {gap_bound}",
            base.left(),
            base.right()
        )));
    }
    let top_den = near + &index * far;
    if top_den > dmax {
        return Err(Error::Infeasible(format!(
            "reaching gap {gap_bound} needs chain index {index} with denominator {top_den} > {denom_bound}"
        )));
    }
    let count = match index.to_usize().and_then(|i| i.checked_add(2)) {
        Some(n) if n <= max_points => n,
        _ => {
            return Err(Error::Overflow(format!(
                "subdivision needs {} points, limit is {max_points}",
                index + 2u32
            )))
        }
    };
    let p = index.to_u64().expect("fits usize");

    let mut points = Vec::with_capacity(count);
    if grow_u {
        points.push(base.left().clone());
        points.extend((0..=p).rev().map(|i| u_term(base, i)));
        Ok(done(points, Refinement::GrowU { chain_index: p }))
    } else {
        points.extend((0..=p).map(|j| v_term(base, j)));
        points.push(base.right().clone());
        Ok(done(points, Refinement::GrowV { chain_index: p }))
    }
}

/// Subdivides `[lo, hi]`, both elements of `F_N`, by refining every
/// consecutive pair of `F_N` inside it and concatenating the pieces in
/// ascending order with shared endpoints merged.
pub fn subdivide_interval(
    lo: &Rational,
    hi: &Rational,
    order: FareyOrder,
    gap_bound: &Rational,
    denom_bound: u64,
    max_points: usize,
) -> Result<Subdivision> {
    let n = big(order.get());
    for x in [lo, hi] {
        if x.is_negative() || x > &Rational::one() || x.denom() > &n {
            return Err(Error::invalid(format!(
                "{x} is not an element of F_{order}"
            )));
        }
    }
    if lo >= hi {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let mut points: Vec<Rational> = Vec::new();
    let mut refinements = Vec::new();
    for pair in farey_pairs(order)
        .skip_while(|p| p.left() < lo)
        .take_while(|p| p.right() <= hi)
    {
        let budget = max_points.saturating_sub(points.len()) + usize::from(!points.is_empty());
        let piece = subdivide(&pair, gap_bound, denom_bound, budget.max(2))?;
        let skip = usize::from(!points.is_empty());
        points.extend(piece.points.into_iter().skip(skip));
        refinements.extend(piece.refinements);
        if points.len() > max_points {
            return Err(Error::Overflow(format!(
                "subdivision needs more than {max_points} points"
            )));
        }
    }
    Ok(Subdivision {
        points,
        gap_bound: gap_bound.clone(),
        denom_bound,
        refinements,
    })
}
