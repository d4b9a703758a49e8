//! Farey sequences `F_N`: streaming generation, consecutive pairs, bracketing
//! of a value between neighbours, and a checker for the classical
//! neighbour properties.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{mediant, Rational};

/// Order `N >= 1` of a Farey sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FareyOrder(u64);

impl FareyOrder {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Farey order must be at least 1"));
        }
        Ok(FareyOrder(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FareyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Two consecutive elements `h1/k1 < h2/k2` of `F_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyPair {
    left: Rational,
    right: Rational,
    order: FareyOrder,
}

impl FareyPair {
    /// Validates that `left, right` are adjacent in `F_order`.
    ///
    /// A unimodular pair has no fraction strictly between with denominator
    /// below `k1 + k2`, so adjacency reduces to `k1 + k2 > N`.
    pub fn new(left: Rational, right: Rational, order: FareyOrder) -> Result<Self> {
        let n = BigInt::from(order.get());
        if left.is_negative() || right > Rational::one() || left >= right {
            return Err(Error::invalid(format!(
                "Farey pair needs 0 <= left < right <= 1, got ({left}, {right})"
            )));
        }
        if left.denom() > &n || right.denom() > &n {
            return Err(Error::invalid(format!(
                "({left}, {right}) has a denominator above the order {order}"
            )));
        }
        let det = left.denom() * right.numer() - left.numer() * right.denom();
        if !det.is_one() {
            return Err(Error::invalid(format!(
                "({left}, {right}) is not unimodular (determinant {det})"
            )));
        }
        if left.denom() + right.denom() <= n {
            return Err(Error::invalid(format!(
                "({left}, {right}) are not adjacent in F_{order}: their mediant has denominator <= {order}"
            )));
        }
        Ok(FareyPair { left, right, order })
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn order(&self) -> FareyOrder {
        self.order
    }

    /// Length of the interval, `1 / (k1 k2)`.
    pub fn gap(&self) -> Rational {
        &self.right - &self.left
    }

    /// `(h1, k1, h2, k2)`.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (
            self.left.numer(),
            self.left.denom(),
            self.right.numer(),
            self.right.denom(),
        )
    }
}

/// Streaming iterator over `F_N` in ascending order.
#[derive(Debug, Clone)]
pub struct FareySequence {
    n: u64,
    // current a/b and next c/d
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    done: bool,
}

impl Iterator for FareySequence {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if self.done {
            return None;
        }
        let out = Rational::new(self.a, self.b).expect("b >= 1");
        if self.a == 1 && self.b == 1 {
            self.done = true;
        } else {
            let k = (self.n + self.b) / self.d;
            let (e, f) = (k * self.c - self.a, k * self.d - self.b);
            (self.a, self.b, self.c, self.d) = (self.c, self.d, e, f);
        }
        Some(out)
    }
}

/// All reduced `h/k` with `0 <= h <= k <= N`, ascending, from the
/// next-term recurrence seeded with `(0/1, 1/N)`.
pub fn farey_sequence(order: FareyOrder) -> FareySequence {
    FareySequence {
        n: order.get(),
        a: 0,
        b: 1,
        c: 1,
        d: order.get(),
        done: false,
    }
}

/// Consecutive pairs of `F_N`, in order.
pub fn farey_pairs(order: FareyOrder) -> impl Iterator<Item = FareyPair> {
    let mut seq = farey_sequence(order);
    let mut prev = seq.next();
    seq.map(move |next| {
        let left = prev
            .replace(next.clone())
            .expect("F_N has at least two elements");
        FareyPair {
            left,
            right: next,
            order,
        }
    })
}

/// Element of `F_N` following `pair.right`, or `None` when `pair.right`
/// is `1/1`.
pub fn farey_next(pair: &FareyPair) -> Option<Rational> {
    if pair.right.is_one() {
        return None;
    }
    let n = BigInt::from(pair.order.get());
    let (a, b, c, d) = pair.parts();
    let k = (&n + b) / d;
    let next = Rational::new(&k * c - a, &k * d - b).expect("k*d - b >= 1");
    Some(next)
}

/// Result of locating a value in `F_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Bracket {
    /// The value is itself an element of `F_N`.
    Exact { value: Rational },
    /// The value lies strictly inside a consecutive pair.
    Pair {
        #[serde(flatten)]
        pair: FareyPair,
    },
}

/// Locates `x` in `F_N` by Stern-Brocot descent, clipping mediants at
/// denominator `N`. Runs of equal-direction steps are taken in one jump, so
/// the cost is logarithmic in `N`.
pub fn farey_neighbors(x: &Rational, order: FareyOrder) -> Result<Bracket> {
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::invalid(format!("{x} is outside [0, 1]")));
    }
    let n = BigInt::from(order.get());
    if x.denom() <= &n {
        return Ok(Bracket::Exact { value: x.clone() });
    }
    let (p, q) = (x.numer(), x.denom());
    let (mut lh, mut lk) = (BigInt::zero(), BigInt::one());
    let (mut rh, mut rk) = (BigInt::one(), BigInt::one());
    while &lk + &rk <= n {
        // Move right endpoint toward x: r + t*l stays above x while
        // t < (q*rh - p*rk) / (p*lk - q*lh).
        let above = q * &rh - p * &rk;
        let below = p * &lk - q * &lh;
        let t_val = (&above - 1u32) / &below;
        let t_den = (&n - &rk) / &lk;
        let t = t_val.min(t_den);
        if t.is_positive() {
            rh += &t * &lh;
            rk += &t * &lk;
        }
        if &lk + &rk > n {
            break;
        }
        let above = q * &rh - p * &rk;
        let below = p * &lk - q * &lh;
        let t_val = (&below - 1u32) / &above;
        let t_den = (&n - &lk) / &rk;
        let t = t_val.min(t_den);
        if t.is_positive() {
            lh += &t * &rh;
            lk += &t * &rk;
        }
    }
    let pair = FareyPair::new(Rational::new(lh, lk)?, Rational::new(rh, rk)?, order)?;
    debug_assert!(pair.left() < x && x < pair.right());
    Ok(Bracket::Pair { pair })
}

/// The neighbour properties of `F_N` that [`verify_farey_properties`]
/// checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FareyProperty {
    /// `k h' - h k' = 1` for adjacent `h/k < h'/k'`.
    Unimodular,
    /// Every interior element is the mediant of its two neighbours.
    MiddleIsMediant,
    /// `k + k' > N` and the mediant of adjacent elements lies strictly
    /// between them.
    DenominatorSumExceedsOrder,
    /// For `N > 1`, adjacent elements have different denominators.
    DistinctDenominators,
}

impl FareyProperty {
    pub const ALL: [FareyProperty; 4] = [
        FareyProperty::Unimodular,
        FareyProperty::MiddleIsMediant,
        FareyProperty::DenominatorSumExceedsOrder,
        FareyProperty::DistinctDenominators,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FareyProperty::Unimodular => "unimodular neighbours",
            FareyProperty::MiddleIsMediant => "middle term is the mediant",
            FareyProperty::DenominatorSumExceedsOrder => "k + k' > N, mediant strictly between",
            FareyProperty::DistinctDenominators => "neighbours have distinct denominators",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PropertyOutcome {
    Pass,
    Skipped { reason: String },
    Fail { counterexample: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub property: FareyProperty,
    pub checks: u64,
    pub outcome: PropertyOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub order: FareyOrder,
    pub elements: u64,
    pub results: Vec<PropertyResult>,
}

impl PropertyReport {
    /// True when no property failed; skipped properties count as passing.
    pub fn all_passed(&self) -> bool {
        self.results
            .iter()
            .all(|r| !matches!(r.outcome, PropertyOutcome::Fail { .. }))
    }

    pub fn result(&self, property: FareyProperty) -> &PropertyResult {
        self.results
            .iter()
            .find(|r| r.property == property)
            .expect("every property is reported")
    }
}

struct Tally {
    property: FareyProperty,
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(property: FareyProperty) -> Self {
        Tally {
            property,
            checks: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn finish(self, skip: Option<&str>) -> PropertyResult {
        let outcome = match (skip, self.failure) {
            (Some(reason), _) => PropertyOutcome::Skipped {
                reason: reason.to_string(),
            },
            (None, Some(counterexample)) => PropertyOutcome::Fail { counterexample },
            (None, None) => PropertyOutcome::Pass,
        };
        PropertyResult {
            property: self.property,
            checks: self.checks,
            outcome,
        }
    }
}

/// Checks the neighbour properties over the whole of `F_N`, reporting the
/// first counterexample of each. The distinct-denominator property only
/// holds for `N > 1` and is skipped for `N = 1`.
pub fn verify_farey_properties(order: FareyOrder) -> PropertyReport {
    verify_sequence(order, farey_sequence(order))
}

pub(crate) fn verify_sequence(
    order: FareyOrder,
    terms: impl IntoIterator<Item = Rational>,
) -> PropertyReport {
    let n = BigInt::from(order.get());
    let mut unimodular = Tally::new(FareyProperty::Unimodular);
    let mut middle = Tally::new(FareyProperty::MiddleIsMediant);
    let mut sum = Tally::new(FareyProperty::DenominatorSumExceedsOrder);
    let mut distinct = Tally::new(FareyProperty::DistinctDenominators);

    let mut elements = 0u64;
    let mut window: [Option<Rational>; 2] = [None, None];
    for cur in terms {
        elements += 1;
        if let Some(prev) = &window[1] {
            let (h, k, h2, k2) = (prev.numer(), prev.denom(), cur.numer(), cur.denom());
            unimodular.record((k * h2 - h * k2).is_one(), || format!("({prev}, {cur})"));
            let m = mediant(prev, &cur);
            sum.record((k + k2) > n && prev < &m && m < cur, || {
                format!("({prev}, {cur})")
            });
            distinct.record(k != k2, || format!("({prev}, {cur})"));
            if let Some(first) = &window[0] {
                middle.record(&mediant(first, &cur) == prev, || {
                    format!("({first}, {prev}, {cur})")
                });
            }
        }
        window = [window[1].take(), Some(cur)];
    }

    let skip_distinct = (order.get() == 1).then_some("property only stated for N > 1");
    PropertyReport {
        order,
        elements,
        results: vec![
            unimodular.finish(None),
            middle.finish(None),
            sum.finish(None),
            distinct.finish(skip_distinct),
        ],
    }
}

/// Euler's totient-based length of `F_N`, `1 + sum_{k<=N} phi(k)`, computed
/// with a sieve. Used by the self-test and for sizing.
pub fn farey_length(order: FareyOrder) -> u64 {
    let n = order.get() as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    1 + phi[1..].iter().sum::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn order(n: u64) -> FareyOrder {
        FareyOrder::new(n).unwrap()
    }

    /// Oracle: every reduced h/k with k <= n, sorted.
    fn enumerate_sorted(n: i64) -> Vec<Rational> {
        let mut v: Vec<Rational> = (1..=n)
            .flat_map(|k| (0..=k).map(move |h| (h, k)))
            .filter(|&(h, k)| num_integer::gcd(h, k) == 1)
            .map(|(h, k)| r(h, k))
            .collect();
        v.sort();
        v
    }

    fn totient_trial_division(k: u64) -> u64 {
        (1..=k).filter(|&j| num_integer::gcd(j, k) == 1).count() as u64
    }

    #[test]
    fn order_one() {
        let f: Vec<_> = farey_sequence(order(1)).collect();
        assert_eq!(f, vec![r(0, 1), r(1, 1)]);
        assert!(FareyOrder::new(0).is_err());
    }

    #[test]
    fn order_five() {
        let f: Vec<String> = farey_sequence(order(5)).map(|x| x.to_string()).collect();
        let expected: Vec<String> = enumerate_sorted(5).iter().map(|x| x.to_string()).collect();
        assert_eq!(f, expected);
        assert_eq!(
            f,
            ["0/1", "1/5", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "4/5", "1/1"]
        );
    }

    #[test]
    fn order_seven_length() {
        let expected = 1 + (1..=7).map(totient_trial_division).sum::<u64>();
        assert_eq!(expected, 19);
        assert_eq!(farey_sequence(order(7)).count(), 19);
        assert_eq!(farey_length(order(7)), 19);
    }

    #[test]
    fn matches_enumeration_up_to_40() {
        for n in 1..=40 {
            let f: Vec<_> = farey_sequence(order(n)).collect();
            assert_eq!(f, enumerate_sorted(n as i64), "N={n}");
        }
    }

    #[test]
    fn next_term() {
        let p = FareyPair::new(r(0, 1), r(1, 5), order(5)).unwrap();
        assert_eq!(farey_next(&p), Some(r(1, 4)));
        let p = FareyPair::new(r(3, 4), r(4, 5), order(5)).unwrap();
        assert_eq!(farey_next(&p), Some(r(1, 1)));
        let p = FareyPair::new(r(0, 1), r(1, 2), order(2)).unwrap();
        assert_eq!(farey_next(&p), Some(r(1, 1)));
        let p = FareyPair::new(r(4, 5), r(1, 1), order(5)).unwrap();
        assert_eq!(farey_next(&p), None);
    }

    #[test]
    fn pair_validation() {
        assert!(FareyPair::new(r(1, 3), r(1, 2), order(3)).is_ok());
        // not adjacent in F_5: 2/5 sits between
        assert!(FareyPair::new(r(1, 3), r(1, 2), order(5)).is_err());
        // not unimodular
        assert!(FareyPair::new(r(1, 5), r(1, 2), order(5)).is_err());
        // denominator above order
        assert!(FareyPair::new(r(1, 3), r(1, 2), order(2)).is_err());
        assert!(FareyPair::new(r(1, 2), r(1, 3), order(3)).is_err());
        assert!(FareyPair::new(r(-1, 1), r(0, 1), order(3)).is_err());
    }

    #[test]
    fn neighbors_examples() {
        match farey_neighbors(&r(5, 16), order(7)).unwrap() {
            Bracket::Pair { pair } => {
                assert_eq!((pair.left(), pair.right()), (&r(2, 7), &r(1, 3)));
            }
            other => panic!("expected a pair, got {other:?}"),
        }
        assert_eq!(
            farey_neighbors(&r(1, 3), order(7)).unwrap(),
            Bracket::Exact { value: r(1, 3) }
        );
        assert_eq!(
            farey_neighbors(&r(0, 1), order(3)).unwrap(),
            Bracket::Exact { value: r(0, 1) }
        );
        assert!(farey_neighbors(&r(3, 2), order(3)).is_err());
        assert!(farey_neighbors(&r(-1, 2), order(3)).is_err());
    }

    #[test]
    fn neighbors_agree_with_linear_scan() {
        // 1000-point grid k/1000 plus a few off-grid denominators, N <= 60.
        let grid: Vec<Rational> = (0..=1000).map(|k| r(k, 1000)).collect();
        for n in 1..=60u64 {
            let f: Vec<_> = farey_sequence(order(n)).collect();
            for x in &grid {
                let got = farey_neighbors(x, order(n)).unwrap();
                let expected = match f.binary_search(x) {
                    Ok(_) => Bracket::Exact { value: x.clone() },
                    Err(i) => Bracket::Pair {
                        pair: FareyPair::new(f[i - 1].clone(), f[i].clone(), order(n)).unwrap(),
                    },
                };
                assert_eq!(got, expected, "x={x} N={n}");
            }
        }
    }

    #[test]
    fn property_report() {
        let rep = verify_farey_properties(order(5));
        assert!(rep.all_passed());
        assert!(rep
            .results
            .iter()
            .all(|r| r.outcome == PropertyOutcome::Pass));
        assert_eq!(rep.elements, 11);

        let rep = verify_farey_properties(order(1));
        assert!(rep.all_passed());
        assert!(matches!(
            rep.result(FareyProperty::DistinctDenominators).outcome,
            PropertyOutcome::Skipped { .. }
        ));
        assert_eq!(
            rep.result(FareyProperty::Unimodular).outcome,
            PropertyOutcome::Pass
        );

        let rep = verify_farey_properties(order(50));
        assert!(rep
            .results
            .iter()
            .all(|r| r.outcome == PropertyOutcome::Pass));
    }

    #[test]
    fn property_report_catches_a_gap() {
        // dropping 2/5 keeps (1/3, 1/2) unimodular but 3 + 2 = 5 is not > 5
        let broken: Vec<_> = farey_sequence(order(5)).filter(|x| x != &r(2, 5)).collect();
        let rep = verify_sequence(order(5), broken);
        assert!(!rep.all_passed());
        assert_eq!(
            rep.result(FareyProperty::Unimodular).outcome,
            PropertyOutcome::Pass
        );
        assert_eq!(
            rep.result(FareyProperty::DenominatorSumExceedsOrder)
                .outcome,
            PropertyOutcome::Fail {
                counterexample: "(1/3, 1/2)".into()
            }
        );

        // dropping 1/4 leaves 5*1 - 1*3 = 2 between 1/5 and 1/3
        let broken: Vec<_> = farey_sequence(order(5)).filter(|x| x != &r(1, 4)).collect();
        let rep = verify_sequence(order(5), broken);
        assert_eq!(
            rep.result(FareyProperty::Unimodular).outcome,
            PropertyOutcome::Fail {
                counterexample: "(1/5, 1/3)".into()
            }
        );
    }

    #[test]
    fn pairs_iterator() {
        let pairs: Vec<_> = farey_pairs(order(3)).collect();
        assert_eq!(pairs.len(), 4);
        assert_eq!(pairs[1].left(), &r(1, 3));
        assert_eq!(pairs[1].right(), &r(1, 2));
    }

    proptest! {
        #[test]
        fn neighbors_bracket_large_inputs(num in 0u64..1_000_000_007, n in 1u64..100_000) {
            let x = Rational::new(num, 1_000_000_007u64).unwrap();
            match farey_neighbors(&x, order(n)).unwrap() {
                Bracket::Exact { value } => prop_assert_eq!(value, x),
                Bracket::Pair { pair } => {
                    prop_assert!(pair.left() < &x && &x < pair.right());
                    // the pair validated itself as adjacent in F_n
                    prop_assert!(pair.left().denom() + pair.right().denom() > BigInt::from(n));
                }
            }
        }
    }
}
