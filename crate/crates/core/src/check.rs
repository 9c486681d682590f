//! Exhaustive submodularity and monotonicity checks with certificates.
//!
//! Three readings of submodularity are supported:
//!
//! * `Standard`: `f(A+x) - f(A) >= f(B+x) - f(B)` for all `A ⊆ B`, `x ∉ B`.
//! * `PaperLiteral`: the same inequality with `x` ranging over everything
//!   outside `A`. For `x ∈ B \ A` the right side is zero, so this mode is
//!   equivalent to `Standard` plus monotonicity.
//! * `Lattice`: `f(A ∪ B) + f(A ∩ B) <= f(A) + f(B)` for all pairs.
//!
//! The search is partitioned over the outer mask `B` and the reported
//! violation is always the smallest in `(B, A, x)` order, independent of
//! the number of workers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::ground::SubsetMask;
use crate::parallel::with_workers;
use crate::rational::Rational;

/// Largest `m` accepted by the exhaustive searches.
pub const EXHAUSTIVE_CAP: u32 = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    #[default]
    Standard,
    PaperLiteral,
    Lattice,
}

impl CheckMode {
    pub const ALL: [CheckMode; 3] = [CheckMode::Standard, CheckMode::PaperLiteral, CheckMode::Lattice];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Standard => "standard",
            CheckMode::PaperLiteral => "paper-literal",
            CheckMode::Lattice => "lattice",
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckMode> {
        CheckMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown check mode {s:?}")))
    }
}

/// A concrete falsification of one of the submodularity inequalities.
///
/// For the marginal modes `lhs = f(A+x) - f(A)`, `rhs = f(B+x) - f(B)` and
/// `gap = lhs - rhs < 0`. For `Lattice`, `lhs = f(A∪B) + f(A∩B)`,
/// `rhs = f(A) + f(B)`, `x` is absent and `gap > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationCertificate {
    pub mode: CheckMode,
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub x: Option<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub gap: Rational,
}

impl ViolationCertificate {
    pub fn m(&self) -> u32 {
        self.a.m()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // returned once per search
pub enum Verdict {
    Submodular,
    Violated(ViolationCertificate),
}

impl Verdict {
    pub fn is_submodular(&self) -> bool {
        matches!(self, Verdict::Submodular)
    }

    pub fn certificate(&self) -> Option<&ViolationCertificate> {
        match self {
            Verdict::Submodular => None,
            Verdict::Violated(c) => Some(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneVerdict {
    Monotone,
    /// `gap = f(A+x) - f(A) < 0`.
    Violated {
        a: SubsetMask,
        x: u32,
        gap: Rational,
    },
}

impl MonotoneVerdict {
    pub fn is_monotone(&self) -> bool {
        matches!(self, MonotoneVerdict::Monotone)
    }
}

/// Function values laid out for the inner loops. Tables whose values share
/// a small common denominator are scaled to integers.
enum Table {
    Scaled(Vec<i128>),
    Exact(Vec<Rational>),
}

impl Table {
    fn new(values: Vec<Rational>) -> Table {
        Self::scale(&values).map(Table::Scaled).unwrap_or(Table::Exact(values))
    }

    fn scale(values: &[Rational]) -> Option<Vec<i128>> {
        const LIMIT: i128 = 1 << 120;
        let mut lcm: i128 = 1;
        for v in values {
            let d = i128::try_from(v.denom()).ok()?;
            lcm = (lcm / lcm.gcd(&d)).checked_mul(d)?;
            if lcm > LIMIT {
                return None;
            }
        }
        values
            .iter()
            .map(|v| {
                let n = i128::try_from(v.numer()).ok()?;
                let d = i128::try_from(v.denom()).ok()?;
                let s = n.checked_mul(lcm / d)?;
                (s.abs() < LIMIT).then_some(s)
            })
            .collect()
    }

    /// Compares `t[i] + t[j]` with `t[k] + t[l]`.
    #[inline]
    fn cmp_sums(&self, i: u64, j: u64, k: u64, l: u64) -> Ordering {
        match self {
            Table::Scaled(t) => {
                let (i, j, k, l) = (i as usize, j as usize, k as usize, l as usize);
                (t[i] + t[j]).cmp(&(t[k] + t[l]))
            }
            Table::Exact(t) => {
                let (i, j, k, l) = (i as usize, j as usize, k as usize, l as usize);
                (&t[i] + &t[j]).cmp(&(&t[k] + &t[l]))
            }
        }
    }

    #[inline]
    fn cmp(&self, i: u64, j: u64) -> Ordering {
        match self {
            Table::Scaled(t) => t[i as usize].cmp(&t[j as usize]),
            Table::Exact(t) => t[i as usize].cmp(&t[j as usize]),
        }
    }
}

fn check_cap(f: &SetFunction) -> Result<()> {
    if f.m() > EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCap { m: f.m(), cap: EXHAUSTIVE_CAP });
    }
    Ok(())
}

pub fn check_submodular(f: &SetFunction, mode: CheckMode) -> Result<Verdict> {
    check_submodular_with(f, mode, None)
}

/// As [`check_submodular`], on a pool of `workers` threads.
pub fn check_submodular_with(f: &SetFunction, mode: CheckMode, workers: Option<usize>) -> Result<Verdict> {
    check_cap(f)?;
    let ground = f.ground();
    let m = f.m();
    let found = with_workers(workers, || {
        let table = Table::new(f.values().expect("m within cap"));
        (0..ground.subset_count()).into_par_iter().find_map_first(|b| match mode {
            CheckMode::Lattice => scan_lattice(&table, b),
            _ => scan_marginal(&table, m, b, mode == CheckMode::PaperLiteral),
        })
    });
    Ok(match found {
        None => Verdict::Submodular,
        Some((a, b, x)) => {
            let (a, b) = (ground.mask_unchecked(a), ground.mask_unchecked(b));
            let (lhs, rhs) = sides(f, mode, a, b, x);
            let gap = &lhs - &rhs;
            Verdict::Violated(ViolationCertificate { mode, a, b, x, lhs, rhs, gap })
        }
    })
}

/// First `(A, x)` violating the marginal inequality for a fixed `B`.
fn scan_marginal(table: &Table, m: u32, b: u64, literal: bool) -> Option<(u64, u64, Option<u32>)> {
    let mut a = 0u64;
    loop {
        for x in 1..=m {
            let bit = 1u64 << (x - 1);
            if a & bit != 0 {
                continue;
            }
            let violated = if b & bit == 0 {
                // f(A+x) + f(B) < f(B+x) + f(A)
                table.cmp_sums(a | bit, b, b | bit, a) == Ordering::Less
            } else {
                literal && table.cmp(a | bit, a) == Ordering::Less
            };
            if violated {
                return Some((a, b, Some(x)));
            }
        }
        a = a.wrapping_sub(b) & b;
        if a == 0 {
            return None;
        }
    }
}

/// First `A < B` (as masks) with `f(A∪B) + f(A∩B) > f(A) + f(B)`.
/// Comparable pairs satisfy the inequality with equality and are skipped.
fn scan_lattice(table: &Table, b: u64) -> Option<(u64, u64, Option<u32>)> {
    (0..b)
        .filter(|&a| a & !b != 0 && b & !a != 0)
        .find(|&a| table.cmp_sums(a | b, a & b, a, b) == Ordering::Greater)
        .map(|a| (a, b, None))
}

fn sides(f: &SetFunction, mode: CheckMode, a: SubsetMask, b: SubsetMask, x: Option<u32>) -> (Rational, Rational) {
    match (mode, x) {
        (CheckMode::Lattice, _) | (_, None) => {
            (&f.value(a.union(b)) + &f.value(a.intersection(b)), &f.value(a) + &f.value(b))
        }
        (_, Some(x)) => (&f.value(a.with(x)) - &f.value(a), &f.value(b.with(x)) - &f.value(b)),
    }
}

/// Recomputes the certificate from `f`. `Ok(true)` iff the stored values
/// are reproduced exactly and the mode's inequality is violated.
pub fn verify_certificate(f: &SetFunction, cert: &ViolationCertificate) -> Result<bool> {
    f.check_mask(cert.a)?;
    f.check_mask(cert.b)?;
    match (cert.mode, cert.x) {
        (CheckMode::Lattice, Some(_)) => {
            return Err(Error::MalformedCertificate("lattice certificates carry no x".into()))
        }
        (CheckMode::Lattice, None) => {}
        (_, None) => return Err(Error::MalformedCertificate("missing element x".into())),
        (mode, Some(x)) => {
            f.ground().check_element(x)?;
            if !cert.a.is_subset_of(cert.b) {
                return Err(Error::MalformedCertificate("A is not a subset of B".into()));
            }
            if cert.a.contains(x) {
                return Err(Error::MalformedCertificate(format!("x = {x} belongs to A")));
            }
            if mode == CheckMode::Standard && cert.b.contains(x) {
                return Err(Error::MalformedCertificate(format!("x = {x} belongs to B")));
            }
        }
    }
    let (lhs, rhs) = sides(f, cert.mode, cert.a, cert.b, cert.x);
    let gap = &lhs - &rhs;
    if lhs != cert.lhs || rhs != cert.rhs || gap != cert.gap {
        return Ok(false);
    }
    Ok(match cert.mode {
        CheckMode::Lattice => gap.is_positive(),
        _ => gap.is_negative(),
    })
}

pub fn check_monotone(f: &SetFunction) -> Result<MonotoneVerdict> {
    check_monotone_with(f, None)
}

pub fn check_monotone_with(f: &SetFunction, workers: Option<usize>) -> Result<MonotoneVerdict> {
    check_cap(f)?;
    let ground = f.ground();
    let m = f.m();
    let found = with_workers(workers, || {
        let table = Table::new(f.values().expect("m within cap"));
        (0..ground.subset_count()).into_par_iter().find_map_first(|a| {
            (1..=m)
                .map(|x| (x, 1u64 << (x - 1)))
                .find(|&(_, bit)| a & bit == 0 && table.cmp(a | bit, a) == Ordering::Less)
                .map(|(x, _)| (a, x))
        })
    });
    Ok(match found {
        None => MonotoneVerdict::Monotone,
        Some((a, x)) => {
            let a = ground.mask_unchecked(a);
            let gap = &f.value(a.with(x)) - &f.value(a);
            MonotoneVerdict::Violated { a, x, gap }
        }
    })
}
