//! Closed forms and explicit configurations showing that `IoU_Y` and
//! `-IoU_Y` both fail submodularity.
//!
//! With `A ⊂ B`, `|A ∩ Y| = |B ∩ Y| = ab_n > 0`, `a_d = |A ∪ Y|` and
//! `b_d = |B ∪ Y|`, the second difference
//!
//! ```text
//! R = (IoU(A+x) - IoU(A)) - (IoU(B+x) - IoU(B))
//! ```
//!
//! equals `ab_n · (1/((b_d+1) b_d) - 1/((a_d+1) a_d)) < 0` when `x ∉ Y ∪ B`
//! and `1/a_d - 1/b_d > 0` when `x ∈ Y \ B`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::check::{CheckMode, ViolationCertificate};
use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::ground::{GroundSet, SubsetMask};
use crate::rational::Rational;

/// Smallest ground set admitting either configuration: one element of
/// `A ∩ Y`, one of `B \ A`, and `x`.
pub const MIN_ENUMERATION_M: u32 = 3;
pub const MAX_ENUMERATION_M: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutsideParams {
    pub ab_n: u32,
    pub a_d: u32,
    pub b_d: u32,
}

impl OutsideParams {
    /// Requires `0 < ab_n <= a_d < b_d`.
    pub fn new(ab_n: u32, a_d: u32, b_d: u32) -> Result<OutsideParams> {
        if ab_n == 0 || ab_n > a_d || a_d >= b_d {
            return Err(Error::InvalidParams(format!(
                "need 0 < ab_n <= a_d < b_d, got ab_n = {ab_n}, a_d = {a_d}, b_d = {b_d}"
            )));
        }
        Ok(OutsideParams { ab_n, a_d, b_d })
    }
}

fn recip_pronic(n: u32) -> Rational {
    let n = n as i64;
    Rational::new(1, (n + 1) * n)
}

/// `R` for `x ∉ Y ∪ B`; always negative.
pub fn closed_form_r_outside(p: OutsideParams) -> Rational {
    let ab_n = Rational::from(p.ab_n);
    &ab_n * &(&recip_pronic(p.b_d) - &recip_pronic(p.a_d))
}

/// `R = 1/a_d - 1/b_d` for `x ∈ Y \ B`; always positive.
pub fn closed_form_r_inside(a_d: u32, b_d: u32) -> Result<Rational> {
    if a_d == 0 || a_d >= b_d {
        return Err(Error::InvalidParams(format!("need 0 < a_d < b_d, got a_d = {a_d}, b_d = {b_d}")));
    }
    Ok(&Rational::new(1, a_d as i64) - &Rational::new(1, b_d as i64))
}

/// `R` by four direct IoU evaluations. Requires `A ⊆ B`, `x ∉ B`.
pub fn direct_r(y: SubsetMask, a: SubsetMask, b: SubsetMask, x: u32) -> Result<Rational> {
    if b.contains(x) {
        return Err(Error::InvalidParams(format!("x = {x} belongs to B")));
    }
    direct_r_literal(y, a, b, x)
}

/// As [`direct_r`] but only requires `x ∉ A`, matching the literal
/// quantifier of the marginal-gain definition.
pub fn direct_r_literal(y: SubsetMask, a: SubsetMask, b: SubsetMask, x: u32) -> Result<Rational> {
    let f = SetFunction::iou(y)?;
    f.check_mask(a)?;
    f.check_mask(b)?;
    if !a.is_subset_of(b) {
        return Err(Error::InvalidParams("A is not a subset of B".into()));
    }
    let gain_a = f.marginal_gain(a, x)?;
    let gain_b = &f.value(b.with(x)) - &f.value(b);
    Ok(&gain_a - &gain_b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CounterexampleCase {
    /// `x ∉ Y ∪ B`: `R < 0`, so `IoU_Y` is not submodular.
    #[serde(rename = "outside-yb")]
    OutsideYB,
    /// `x ∈ Y \ B`: `R > 0`, so `-IoU_Y` is not submodular.
    #[serde(rename = "inside-y")]
    InsideY,
}

impl fmt::Display for CounterexampleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CounterexampleCase::OutsideYB => "outside-yb",
            CounterexampleCase::InsideY => "inside-y",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleConfig {
    pub case: CounterexampleCase,
    pub y: SubsetMask,
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub x: u32,
    pub r: Rational,
}

impl CounterexampleConfig {
    pub fn m(&self) -> u32 {
        self.y.m()
    }

    pub fn ab_n(&self) -> u32 {
        self.a.intersection(self.y).len()
    }

    pub fn a_d(&self) -> u32 {
        self.a.union(self.y).len()
    }

    pub fn b_d(&self) -> u32 {
        self.b.union(self.y).len()
    }

    pub fn closed_form(&self) -> Result<Rational> {
        match self.case {
            CounterexampleCase::OutsideYB => {
                Ok(closed_form_r_outside(OutsideParams::new(self.ab_n(), self.a_d(), self.b_d())?))
            }
            CounterexampleCase::InsideY => closed_form_r_inside(self.a_d(), self.b_d()),
        }
    }

    /// `IoU_Y` for the outside case, `-IoU_Y` for the inside case.
    pub fn function(&self) -> SetFunction {
        match self.case {
            CounterexampleCase::OutsideYB => SetFunction::iou(self.y),
            CounterexampleCase::InsideY => SetFunction::neg_iou(self.y),
        }
        .expect("configurations have nonempty Y")
    }

    /// The configuration as a standard-mode certificate against
    /// [`CounterexampleConfig::function`].
    pub fn certificate(&self) -> ViolationCertificate {
        let f = self.function();
        let lhs = &f.value(self.a.with(self.x)) - &f.value(self.a);
        let rhs = &f.value(self.b.with(self.x)) - &f.value(self.b);
        let gap = &lhs - &rhs;
        ViolationCertificate { mode: CheckMode::Standard, a: self.a, b: self.b, x: Some(self.x), lhs, rhs, gap }
    }
}

/// Every `(Y, A, B, x)` on `{1..m}` with `A ⊂ B`, `|A ∩ Y| = |B ∩ Y| > 0`
/// and `x` placed according to `case`, ordered by `Y`, then `B`, then `A`,
/// then `x` (all ascending by mask).
pub fn enumerate_counterexamples(
    m: u32,
    case: CounterexampleCase,
) -> Result<impl Iterator<Item = CounterexampleConfig>> {
    if !(MIN_ENUMERATION_M..=MAX_ENUMERATION_M).contains(&m) {
        return Err(Error::InvalidParams(format!(
            "enumeration needs {MIN_ENUMERATION_M} <= m <= {MAX_ENUMERATION_M}, got {m}"
        )));
    }
    let ground = GroundSet::new(m)?;
    let n = ground.subset_count();
    Ok((1..n).flat_map(move |y| {
        (0..n).filter(move |b| b & y != 0).flat_map(move |b| {
            let core = b & y;
            let b_mask = ground.mask_unchecked(b);
            b_mask.submasks().filter(move |a| a.bits() & core == core && a.bits() != b).flat_map(move |a| {
                let y_mask = ground.mask_unchecked(y);
                (1..=m)
                    .filter(move |&x| {
                        let bit = 1u64 << (x - 1);
                        match case {
                            CounterexampleCase::OutsideYB => (y | b) & bit == 0,
                            CounterexampleCase::InsideY => y & bit != 0 && b & bit == 0,
                        }
                    })
                    .map(move |x| CounterexampleConfig {
                        case,
                        y: y_mask,
                        a,
                        b: b_mask,
                        x,
                        r: direct_r(y_mask, a, b_mask, x).expect("valid configuration"),
                    })
            })
        })
    }))
}

/// A canonical configuration realizing `p` on `m` elements, if one fits:
/// `Y = {1..ab_n}`, `A = {1..a_d}`, `B = {1..b_d}`, `x = b_d + 1`.
/// Any realization uses `b_d + 1` distinct elements.
pub fn realize_outside(m: u32, p: OutsideParams) -> Option<CounterexampleConfig> {
    if p.b_d + 1 > m {
        return None;
    }
    let ground = GroundSet::new(m).ok()?;
    let y = ground.subset(1..=p.ab_n).ok()?;
    let a = ground.subset(1..=p.a_d).ok()?;
    let b = ground.subset(1..=p.b_d).ok()?;
    let x = p.b_d + 1;
    let r = direct_r(y, a, b, x).ok()?;
    Some(CounterexampleConfig { case: CounterexampleCase::OutsideYB, y, a, b, x, r })
}

/// A canonical inside-case configuration with the given `a_d < b_d`:
/// `Y = {1,2}`, `A = {1} ∪ {3..a_d}`, `B = A ∪ {a_d+1..b_d}`, `x = 2`.
/// Realizable iff `2 <= a_d < b_d <= m`.
pub fn realize_inside(m: u32, a_d: u32, b_d: u32) -> Option<CounterexampleConfig> {
    if a_d < 2 || a_d >= b_d || b_d > m {
        return None;
    }
    let ground = GroundSet::new(m).ok()?;
    let y = ground.subset([1, 2]).ok()?;
    let a = ground.subset(std::iter::once(1).chain(3..=a_d)).ok()?;
    let b = a.union(ground.subset(a_d + 1..=b_d).ok()?);
    let r = direct_r(y, a, b, 2).ok()?;
    Some(CounterexampleConfig { case: CounterexampleCase::InsideY, y, a, b, x: 2, r })
}

/// A configuration with `B ⊂ A` where `n_B = |Y \ B|` exceeds
/// `n_A = |Y \ A|`, i.e. a counterexample to "`B ⊂ A` implies `n_B < n_A`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Property11Witness {
    pub y: SubsetMask,
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub n_a: u32,
    pub n_b: u32,
}

/// The smallest witness in `(Y, B, A)` mask order.
pub fn refute_property11(m: u32) -> Result<Property11Witness> {
    let ground = GroundSet::new(m)?;
    ground
        .subsets()
        .flat_map(|y| ground.subsets().map(move |b| (y, b)))
        .flat_map(|(y, b)| ground.subsets().map(move |a| (y, b, a)))
        .filter(|&(_, b, a)| b.is_proper_subset_of(a))
        .map(|(y, b, a)| Property11Witness { y, a, b, n_a: y.difference(a).len(), n_b: y.difference(b).len() })
        .find(|w| w.n_b > w.n_a)
        .ok_or_else(|| Error::InvalidParams("no witness exists".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: u32) -> GroundSet {
        GroundSet::new(m).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(m: u32, e: &[u32]) -> SubsetMask {
        g(m).subset(e.iter().copied()).unwrap()
    }

    #[test]
    fn outside_closed_form_examples() {
        assert_eq!(closed_form_r_outside(OutsideParams::new(1, 1, 2).unwrap()), q("-1/3"));
        assert_eq!(closed_form_r_outside(OutsideParams::new(2, 3, 5).unwrap()), q("-1/10"));
        assert!(OutsideParams::new(1, 2, 2).is_err());
        assert!(OutsideParams::new(0, 2, 3).is_err());
        assert!(OutsideParams::new(3, 2, 4).is_err());
    }

    #[test]
    fn inside_closed_form_examples() {
        assert_eq!(closed_form_r_inside(2, 3).unwrap(), q("1/6"));
        assert_eq!(closed_form_r_inside(1, 2).unwrap(), q("1/2"));
        assert!(closed_form_r_inside(3, 3).is_err());
        assert!(closed_form_r_inside(0, 3).is_err());
    }

    #[test]
    fn direct_examples() {
        assert_eq!(direct_r(set(3, &[1]), set(3, &[1]), set(3, &[1, 2]), 3).unwrap(), q("-1/3"));
        assert_eq!(direct_r(set(3, &[1, 2]), set(3, &[1]), set(3, &[1, 3]), 2).unwrap(), q("1/6"));
        let a = set(4, &[1, 2]);
        assert_eq!(direct_r(set(4, &[2, 3]), a, a, 4).unwrap(), Rational::ZERO);
    }

    #[test]
    fn direct_preconditions() {
        let y = set(3, &[1]);
        assert!(direct_r(y, set(3, &[2]), set(3, &[1]), 3).is_err());
        assert!(direct_r(y, set(3, &[1]), set(3, &[1, 2]), 1).is_err());
        assert!(direct_r(y, set(3, &[1]), set(3, &[1, 2]), 2).is_err());
        assert!(direct_r_literal(y, set(3, &[1]), set(3, &[1, 2]), 2).is_ok());
        assert!(direct_r(g(3).empty(), set(3, &[1]), set(3, &[1, 2]), 3).is_err());
    }

    #[test]
    fn m3_outside_contains_the_minimal_example() {
        let configs: Vec<_> = enumerate_counterexamples(3, CounterexampleCase::OutsideYB).unwrap().collect();
        assert!(configs.iter().any(|c| c.y == set(3, &[1])
            && c.a == set(3, &[1])
            && c.b == set(3, &[1, 2])
            && c.x == 3
            && c.r == q("-1/3")));
        assert!(configs.iter().all(|c| c.r.is_negative()));
    }

    #[test]
    fn enumeration_bounds() {
        assert!(enumerate_counterexamples(2, CounterexampleCase::OutsideYB).is_err());
        assert!(enumerate_counterexamples(2, CounterexampleCase::InsideY).is_err());
        assert!(enumerate_counterexamples(13, CounterexampleCase::OutsideYB).is_err());
    }

    /// Independent count: each element of the ground set is in A∩Y, Y\A,
    /// A\Y, (B\A), or outside Y∪B, with B\A disjoint from Y.
    #[test]
    fn enumeration_count_matches_brute_force() {
        for m in 3..=5 {
            for case in [CounterexampleCase::OutsideYB, CounterexampleCase::InsideY] {
                let ground = g(m);
                let mut expected = 0;
                for y in ground.subsets() {
                    for b in ground.subsets() {
                        for a in ground.subsets() {
                            if !a.is_proper_subset_of(b) {
                                continue;
                            }
                            let (ai, bi) = (a.intersection(y).len(), b.intersection(y).len());
                            if ai != bi || ai == 0 {
                                continue;
                            }
                            expected += ground
                                .elements()
                                .filter(|&x| match case {
                                    CounterexampleCase::OutsideYB => !y.union(b).contains(x),
                                    CounterexampleCase::InsideY => y.contains(x) && !b.contains(x),
                                })
                                .count();
                        }
                    }
                }
                assert_eq!(enumerate_counterexamples(m, case).unwrap().count(), expected);
            }
        }
    }

    #[test]
    fn enumeration_is_ordered() {
        let keys: Vec<_> = enumerate_counterexamples(4, CounterexampleCase::InsideY)
            .unwrap()
            .map(|c| (c.y.bits(), c.b.bits(), c.a.bits(), c.x))
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn realizers() {
        let c = realize_outside(3, OutsideParams::new(1, 1, 2).unwrap()).unwrap();
        assert_eq!(c.r, q("-1/3"));
        assert!(realize_outside(2, OutsideParams::new(1, 1, 2).unwrap()).is_none());
        let c = realize_inside(3, 2, 3).unwrap();
        assert_eq!(c.r, q("1/6"));
        assert!(realize_inside(3, 1, 2).is_none());
        assert!(realize_inside(3, 2, 4).is_none());
    }

    #[test]
    fn realizability_matches_enumeration() {
        use std::collections::BTreeSet;
        for m in 3..=7 {
            let seen: BTreeSet<_> = enumerate_counterexamples(m, CounterexampleCase::OutsideYB)
                .unwrap()
                .map(|c| (c.ab_n(), c.a_d(), c.b_d()))
                .collect();
            let mut predicted = BTreeSet::new();
            for b_d in 1..=m {
                for a_d in 1..b_d {
                    for ab_n in 1..=a_d {
                        let p = OutsideParams::new(ab_n, a_d, b_d).unwrap();
                        if let Some(c) = realize_outside(m, p) {
                            assert_eq!(c.r, closed_form_r_outside(p));
                            predicted.insert((ab_n, a_d, b_d));
                        }
                    }
                }
            }
            assert_eq!(seen, predicted, "m = {m}");

            let seen: BTreeSet<_> = enumerate_counterexamples(m, CounterexampleCase::InsideY)
                .unwrap()
                .map(|c| (c.a_d(), c.b_d()))
                .collect();
            let predicted: BTreeSet<_> = (1..=m)
                .flat_map(|b_d| (1..b_d).map(move |a_d| (a_d, b_d)))
                .filter(|&(a_d, b_d)| realize_inside(m, a_d, b_d).is_some())
                .collect();
            assert_eq!(seen, predicted, "m = {m}");
        }
    }

    #[test]
    fn property11_examples() {
        let w = refute_property11(1).unwrap();
        assert_eq!((w.y, w.b, w.a), (set(1, &[1]), g(1).empty(), set(1, &[1])));
        assert_eq!((w.n_b, w.n_a), (1, 0));

        let w = refute_property11(2).unwrap();
        assert_eq!((w.y, w.b, w.a), (set(2, &[1]), g(2).empty(), set(2, &[1])));
        for m in 1..=5 {
            let w = refute_property11(m).unwrap();
            assert!(w.b.is_proper_subset_of(w.a));
            assert!(w.n_b > w.n_a);
            assert_eq!(w.n_a + w.a.intersection(w.y).len(), w.y.len());
            assert_eq!(w.n_b + w.b.intersection(w.y).len(), w.y.len());
        }
        assert!(refute_property11(0).is_err());
    }
}
