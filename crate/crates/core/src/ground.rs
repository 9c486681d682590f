//! Ground sets `{1..m}` and bitmask-encoded subsets.
//!
//! Element `i` lives at bit `i - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GROUND: u32 = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroundSet {
    m: u32,
}

impl GroundSet {
    pub fn new(m: u32) -> Result<GroundSet> {
        if m == 0 || m > MAX_GROUND {
            return Err(Error::GroundSize(m));
        }
        Ok(GroundSet { m })
    }

    pub fn m(self) -> u32 {
        self.m
    }

    /// Number of subsets, `2^m`.
    pub fn subset_count(self) -> u64 {
        1u64 << self.m
    }

    pub fn empty(self) -> SubsetMask {
        SubsetMask { bits: 0, m: self.m }
    }

    pub fn full(self) -> SubsetMask {
        SubsetMask { bits: (1u64 << self.m) - 1, m: self.m }
    }

    pub fn mask(self, bits: u64) -> Result<SubsetMask> {
        if bits >> self.m != 0 {
            return Err(Error::ElementOutOfRange { element: 64 - bits.leading_zeros(), m: self.m });
        }
        Ok(SubsetMask { bits, m: self.m })
    }

    /// Mask without the range check; callers guarantee `bits < 2^m`.
    pub(crate) fn mask_unchecked(self, bits: u64) -> SubsetMask {
        debug_assert!(bits >> self.m == 0);
        SubsetMask { bits, m: self.m }
    }

    pub fn subset<I: IntoIterator<Item = u32>>(self, elements: I) -> Result<SubsetMask> {
        let mut bits = 0u64;
        for e in elements {
            self.check_element(e)?;
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask { bits, m: self.m })
    }

    pub fn check_element(self, element: u32) -> Result<()> {
        if element == 0 || element > self.m {
            return Err(Error::ElementOutOfRange { element, m: self.m });
        }
        Ok(())
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        1..=self.m
    }

    /// All `2^m` subsets in ascending mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let m = self.m;
        (0..self.subset_count()).map(move |bits| SubsetMask { bits, m })
    }
}

impl TryFrom<u32> for GroundSet {
    type Error = Error;

    fn try_from(m: u32) -> Result<Self> {
        GroundSet::new(m)
    }
}

impl From<GroundSet> for u32 {
    fn from(g: GroundSet) -> u32 {
        g.m
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u64,
    m: u32,
}

impl SubsetMask {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn m(self) -> u32 {
        self.m
    }

    pub fn ground(self) -> GroundSet {
        GroundSet { m: self.m }
    }

    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= self.m && self.bits >> (element - 1) & 1 == 1
    }

    pub fn with(self, element: u32) -> SubsetMask {
        debug_assert!(element >= 1 && element <= self.m);
        SubsetMask { bits: self.bits | 1 << (element - 1), m: self.m }
    }

    pub fn without(self, element: u32) -> SubsetMask {
        debug_assert!(element >= 1 && element <= self.m);
        SubsetMask { bits: self.bits & !(1 << (element - 1)), m: self.m }
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.m, other.m);
        SubsetMask { bits: self.bits | other.bits, m: self.m }
    }

    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.m, other.m);
        SubsetMask { bits: self.bits & other.bits, m: self.m }
    }

    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.m, other.m);
        SubsetMask { bits: self.bits & !other.bits, m: self.m }
    }

    pub fn complement(self) -> SubsetMask {
        SubsetMask { bits: !self.bits & ((1u64 << self.m) - 1), m: self.m }
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset_of(self, other: SubsetMask) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let e = rest.trailing_zeros() + 1;
            rest &= rest - 1;
            Some(e)
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.elements().collect()
    }

    /// All submasks in ascending order.
    pub fn submasks(self) -> Submasks {
        Submasks { set: self.bits, next: Some(0), m: self.m }
    }

    /// The 0/1 indicator vector.
    pub fn indicator(self) -> Vec<f64> {
        (0..self.m).map(|i| (self.bits >> i & 1) as f64).collect()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Ascending submask iterator (`next = (next - set) & set`).
#[derive(Clone, Debug)]
pub struct Submasks {
    set: u64,
    next: Option<u64>,
    m: u32,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        let following = cur.wrapping_sub(self.set) & self.set;
        self.next = (following != 0).then_some(following);
        Some(SubsetMask { bits: cur, m: self.m })
    }
}
