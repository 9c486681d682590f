//! Lovász extension evaluation and midpoint-convexity probing.
//!
//! For `f(∅) = 0` and a point `w`, order the elements by decreasing
//! coordinate (ties by ascending element), let `S_i` be the first `i`
//! elements of that order, and take
//!
//! ```text
//! LE(w) = Σ_i w_{π(i)} · (f(S_i) - f(S_{i-1}))
//! ```
//!
//! The increments are computed exactly; only the final dot product is in
//! floating point.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{verify_certificate, CheckMode, ViolationCertificate};
use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::ground::SubsetMask;
use crate::parallel::with_workers;
use crate::rational::Rational;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest `m` for which probes include every pair of indicator vectors.
pub const INDICATOR_SWEEP_MAX_M: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionPoint(Vec<f64>);

impl ExtensionPoint {
    pub fn new(coords: Vec<f64>) -> Result<ExtensionPoint> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ExtensionPoint(coords))
    }

    pub fn indicator(set: SubsetMask) -> ExtensionPoint {
        ExtensionPoint(set.indicator())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn midpoint(&self, other: &ExtensionPoint) -> ExtensionPoint {
        ExtensionPoint(self.0.iter().zip(&other.0).map(|(a, b)| 0.5 * (a + b)).collect())
    }

    pub fn scaled(&self, factor: f64) -> ExtensionPoint {
        ExtensionPoint(self.0.iter().map(|c| c * factor).collect())
    }

    fn is_binary(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0 || c == 1.0)
    }
}

/// One step of the sorted chain: `element` joins to form `prefix`, whose
/// exact value is `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub element: u32,
    pub prefix: SubsetMask,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionEvaluation {
    pub value: f64,
    pub chain: Vec<ChainStep>,
}

impl ExtensionEvaluation {
    /// Re-derives the value from the chain by the telescoping sum.
    pub fn telescoped(&self, w: &ExtensionPoint) -> f64 {
        let mut previous = Rational::ZERO;
        let mut total = 0.0;
        for step in &self.chain {
            total += w.0[step.element as usize - 1] * (&step.value - &previous).to_f64();
            previous = step.value.clone();
        }
        total
    }
}

fn check_point(f: &SetFunction, w: &ExtensionPoint) -> Result<()> {
    if w.len() != f.m() as usize {
        return Err(Error::PointLength { expected: f.m() as usize, found: w.len() });
    }
    if let Some(index) = w.0.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

fn check_vanishes_at_empty(f: &SetFunction) -> Result<()> {
    let at_empty = f.value(f.ground().empty());
    if !at_empty.is_zero() {
        return Err(Error::NonZeroAtEmpty(at_empty.to_string()));
    }
    Ok(())
}

/// Elements sorted by decreasing coordinate, ties by ascending element.
pub fn descending_order(w: &ExtensionPoint) -> Vec<u32> {
    let mut order: Vec<u32> = (1..=w.len() as u32).collect();
    order.sort_by(|&i, &j| w.0[j as usize - 1].partial_cmp(&w.0[i as usize - 1]).unwrap_or(Ordering::Equal));
    order
}

pub fn lovasz_evaluate(f: &SetFunction, w: &ExtensionPoint) -> Result<ExtensionEvaluation> {
    check_point(f, w)?;
    check_vanishes_at_empty(f)?;
    Ok(evaluate_in_order(f, w, &descending_order(w)))
}

/// Evaluates along an explicit processing order, which must be a
/// permutation of the elements with non-increasing coordinates. Any such
/// order gives the same value; ties only change the trace.
pub fn lovasz_evaluate_ordered(f: &SetFunction, w: &ExtensionPoint, order: &[u32]) -> Result<ExtensionEvaluation> {
    check_point(f, w)?;
    check_vanishes_at_empty(f)?;
    let mut seen = f.ground().empty();
    for &e in order {
        f.ground().check_element(e)?;
        if seen.contains(e) {
            return Err(Error::InvalidParams(format!("element {e} repeated in order")));
        }
        seen = seen.with(e);
    }
    if seen != f.ground().full() {
        return Err(Error::InvalidParams("order is not a permutation".into()));
    }
    if order.windows(2).any(|p| w.0[p[0] as usize - 1] < w.0[p[1] as usize - 1]) {
        return Err(Error::InvalidParams("order is not sorted by decreasing coordinate".into()));
    }
    Ok(evaluate_in_order(f, w, order))
}

fn evaluate_in_order(f: &SetFunction, w: &ExtensionPoint, order: &[u32]) -> ExtensionEvaluation {
    let mut prefix = f.ground().empty();
    let mut previous = Rational::ZERO;
    let mut value = 0.0;
    let mut chain = Vec::with_capacity(order.len());
    for &element in order {
        prefix = prefix.with(element);
        let current = f.value(prefix);
        value += w.0[element as usize - 1] * (&current - &previous).to_f64();
        chain.push(ChainStep { element, prefix, value: current.clone() });
        previous = current;
    }
    ExtensionEvaluation { value, chain }
}

/// Value only, skipping validation and the trace.
fn extension_value(f: &SetFunction, w: &ExtensionPoint) -> f64 {
    let mut prefix = f.ground().empty();
    let mut previous = Rational::ZERO;
    let mut value = 0.0;
    for element in descending_order(w) {
        prefix = prefix.with(element);
        let current = f.value(prefix);
        value += w.0[element as usize - 1] * (&current - &previous).to_f64();
        previous = current;
    }
    value
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    Random,
    IndicatorSweep,
    LatticeBridge,
}

/// Points where the extension fails midpoint convexity:
/// `deficit = le_mid - (le_u + le_v) / 2 > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityWitness {
    pub u: ExtensionPoint,
    pub v: ExtensionPoint,
    pub le_u: f64,
    pub le_v: f64,
    pub le_mid: f64,
    pub deficit: f64,
    pub source: WitnessSource,
}

impl ConvexityWitness {
    fn measure(f: &SetFunction, u: ExtensionPoint, v: ExtensionPoint, source: WitnessSource) -> Self {
        let le_u = extension_value(f, &u);
        let le_v = extension_value(f, &v);
        let le_mid = extension_value(f, &u.midpoint(&v));
        let deficit = le_mid - 0.5 * (le_u + le_v);
        ConvexityWitness { u, v, le_u, le_v, le_mid, deficit, source }
    }

    pub fn chord_mean(&self) -> f64 {
        0.5 * (self.le_u + self.le_v)
    }
}

/// Returns a witness iff `LE((u+v)/2) > (LE(u) + LE(v))/2 + tol`.
pub fn midpoint_probe(
    f: &SetFunction,
    u: &ExtensionPoint,
    v: &ExtensionPoint,
    tol: f64,
) -> Result<Option<ConvexityWitness>> {
    check_point(f, u)?;
    check_point(f, v)?;
    check_vanishes_at_empty(f)?;
    let source = if u.is_binary() && v.is_binary() { WitnessSource::IndicatorSweep } else { WitnessSource::Random };
    let witness = ConvexityWitness::measure(f, u.clone(), v.clone(), source);
    Ok((witness.deficit > tol).then_some(witness))
}

pub fn probe_convexity(f: &SetFunction, samples: usize, seed: u64, tol: f64) -> Result<Option<ConvexityWitness>> {
    probe_convexity_with(f, samples, seed, tol, None)
}

/// Probes midpoint convexity on every pair of distinct indicator vectors
/// (for `m <= 8`) followed by `samples` random pairs in `[0,1]^m`.
///
/// Sample `i` draws from ChaCha stream `i` of `seed`, so the points do not
/// depend on scheduling. The result is the largest deficit, ties going to
/// the earliest candidate.
pub fn probe_convexity_with(
    f: &SetFunction,
    samples: usize,
    seed: u64,
    tol: f64,
    workers: Option<usize>,
) -> Result<Option<ConvexityWitness>> {
    check_vanishes_at_empty(f)?;
    let tabulated;
    let f = if f.m() <= 16 {
        tabulated = f.tabulate()?;
        &tabulated
    } else {
        f
    };
    let ground = f.ground();
    let m = f.m() as usize;
    let sweep: Vec<(u64, u64)> = if f.m() <= INDICATOR_SWEEP_MAX_M {
        let n = ground.subset_count();
        (0..n).flat_map(|t| (0..t).map(move |s| (s, t))).collect()
    } else {
        Vec::new()
    };

    let candidate = |index: usize| -> ConvexityWitness {
        if let Some(&(s, t)) = sweep.get(index) {
            let u = ExtensionPoint::indicator(ground.mask_unchecked(s));
            let v = ExtensionPoint::indicator(ground.mask_unchecked(t));
            ConvexityWitness::measure(f, u, v, WitnessSource::IndicatorSweep)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((index - sweep.len()) as u64);
            let u = ExtensionPoint((0..m).map(|_| rng.random::<f64>()).collect());
            let v = ExtensionPoint((0..m).map(|_| rng.random::<f64>()).collect());
            ConvexityWitness::measure(f, u, v, WitnessSource::Random)
        }
    };

    let best = with_workers(workers, || {
        (0..sweep.len() + samples)
            .into_par_iter()
            .filter_map(|index| {
                let w = candidate(index);
                (w.deficit > tol).then_some((index, w))
            })
            .reduce_with(|a, b| match a.1.deficit.total_cmp(&b.1.deficit) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal if a.0 <= b.0 => a,
                Ordering::Equal => b,
            })
    });
    Ok(best.map(|(_, w)| w))
}

/// Turns a verified lattice violation `(A, B)` into a convexity witness at
/// the indicator vectors of `A` and `B`. The midpoint has level sets
/// `A ∩ B` and `A ∪ B`, so `deficit = gap / 2`.
pub fn witness_from_lattice_violation(f: &SetFunction, cert: &ViolationCertificate) -> Result<ConvexityWitness> {
    if cert.mode != CheckMode::Lattice {
        return Err(Error::MalformedCertificate(format!("expected a lattice certificate, got {}", cert.mode)));
    }
    if !verify_certificate(f, cert)? {
        return Err(Error::CertificateRejected);
    }
    check_vanishes_at_empty(f)?;
    Ok(ConvexityWitness::measure(
        f,
        ExtensionPoint::indicator(cert.a),
        ExtensionPoint::indicator(cert.b),
        WitnessSource::LatticeBridge,
    ))
}
