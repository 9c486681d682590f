//! Exact set functions over small ground sets: exhaustive submodularity
//! certificates, Lovász extension evaluation and convexity probes, and
//! explicit counterexamples showing that intersection-over-union (the
//! Jaccard index) and its negation are not submodular.
//!
//! ```
//! use setfn_core::{check_submodular, CheckMode, GroundSet, SetFunction, Verdict};
//!
//! let ground = GroundSet::new(3).unwrap();
//! let iou = SetFunction::iou(ground.subset([1]).unwrap()).unwrap();
//! let Verdict::Violated(cert) = check_submodular(&iou, CheckMode::Standard).unwrap() else {
//!     unreachable!()
//! };
//! assert_eq!(cert.gap.to_string(), "-1/3");
//! ```

pub mod check;
pub mod cli;
pub mod document;
pub mod error;
pub mod function;
pub mod ground;
pub mod iou;
pub mod lovasz;
mod parallel;
pub mod rational;
pub mod report;

pub use check::{
    check_monotone, check_monotone_with, check_submodular, check_submodular_with, verify_certificate, CheckMode,
    MonotoneVerdict, Verdict, ViolationCertificate, EXHAUSTIVE_CAP,
};
pub use document::{parse_function, parse_function_with, FunctionDocument, ParseOptions};
pub use error::{Error, Result};
pub use function::{FunctionKind, SetFunction};
pub use ground::{GroundSet, SubsetMask};
pub use iou::{
    closed_form_r_inside, closed_form_r_outside, direct_r, direct_r_literal, enumerate_counterexamples,
    refute_property11, CounterexampleCase, CounterexampleConfig, OutsideParams, Property11Witness,
};
pub use lovasz::{
    lovasz_evaluate, lovasz_evaluate_ordered, midpoint_probe, probe_convexity, probe_convexity_with,
    witness_from_lattice_violation, ConvexityWitness, ExtensionEvaluation, ExtensionPoint, WitnessSource,
};
pub use rational::Rational;
