//! Set functions `f : 2^{1..m} -> Q` with exact values.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, SubsetMask};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// One value per mask, indexed by the mask bits.
    DenseTable(Vec<Rational>),
    /// `|A ∩ Y| / |A ∪ Y|` for a fixed nonempty `Y`.
    Iou(SubsetMask),
    /// `-IoU_Y`.
    NegIou(SubsetMask),
    Cardinality,
    /// `min(|A|, cap)`.
    Truncation(u32),
    /// `|⋃_{i ∈ A} covers[i]|`; `covers[i - 1]` is the item set of element `i`.
    Coverage(Vec<BTreeSet<u32>>),
    /// Number of undirected edges with exactly one endpoint in `A`.
    GraphCut(Vec<(u32, u32)>),
    Scaled(Box<SetFunction>, Rational),
    Negated(Box<SetFunction>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    ground: GroundSet,
    kind: FunctionKind,
}

impl SetFunction {
    pub fn table(ground: GroundSet, values: Vec<Rational>) -> Result<SetFunction> {
        let expected = ground.subset_count() as usize;
        if ground.m() > 30 || values.len() != expected {
            return Err(Error::TableLength { m: ground.m(), expected, found: values.len() });
        }
        Ok(SetFunction { ground, kind: FunctionKind::DenseTable(values) })
    }

    pub fn iou(y: SubsetMask) -> Result<SetFunction> {
        if y.is_empty() {
            return Err(Error::EmptyReference);
        }
        Ok(SetFunction { ground: y.ground(), kind: FunctionKind::Iou(y) })
    }

    pub fn neg_iou(y: SubsetMask) -> Result<SetFunction> {
        if y.is_empty() {
            return Err(Error::EmptyReference);
        }
        Ok(SetFunction { ground: y.ground(), kind: FunctionKind::NegIou(y) })
    }

    pub fn cardinality(ground: GroundSet) -> SetFunction {
        SetFunction { ground, kind: FunctionKind::Cardinality }
    }

    pub fn truncation(ground: GroundSet, cap: u32) -> SetFunction {
        SetFunction { ground, kind: FunctionKind::Truncation(cap) }
    }

    pub fn coverage(ground: GroundSet, covers: Vec<Vec<u32>>) -> Result<SetFunction> {
        if covers.len() != ground.m() as usize {
            return Err(Error::InvalidParams(format!(
                "coverage needs one item list per element: got {}, m = {}",
                covers.len(),
                ground.m()
            )));
        }
        let covers = covers.into_iter().map(|c| c.into_iter().collect()).collect();
        Ok(SetFunction { ground, kind: FunctionKind::Coverage(covers) })
    }

    pub fn graph_cut(ground: GroundSet, edges: Vec<(u32, u32)>) -> Result<SetFunction> {
        for &(u, v) in &edges {
            ground.check_element(u)?;
            ground.check_element(v)?;
        }
        Ok(SetFunction { ground, kind: FunctionKind::GraphCut(edges) })
    }

    pub fn scaled(inner: SetFunction, factor: Rational) -> SetFunction {
        SetFunction { ground: inner.ground, kind: FunctionKind::Scaled(Box::new(inner), factor) }
    }

    pub fn negated(inner: SetFunction) -> SetFunction {
        SetFunction { ground: inner.ground, kind: FunctionKind::Negated(Box::new(inner)) }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn m(&self) -> u32 {
        self.ground.m()
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn check_mask(&self, a: SubsetMask) -> Result<()> {
        if a.m() != self.m() {
            return Err(Error::GroundMismatch { expected: self.m(), found: a.m() });
        }
        Ok(())
    }

    pub fn evaluate(&self, a: SubsetMask) -> Result<Rational> {
        self.check_mask(a)?;
        Ok(self.value(a))
    }

    /// Evaluation without the ground-set check.
    pub(crate) fn value(&self, a: SubsetMask) -> Rational {
        match &self.kind {
            FunctionKind::DenseTable(values) => values[a.bits() as usize].clone(),
            FunctionKind::Iou(y) => iou_ratio(*y, a),
            FunctionKind::NegIou(y) => -iou_ratio(*y, a),
            FunctionKind::Cardinality => Rational::from(a.len()),
            FunctionKind::Truncation(cap) => Rational::from(a.len().min(*cap)),
            FunctionKind::Coverage(covers) => {
                let covered: BTreeSet<u32> =
                    a.elements().flat_map(|e| covers[e as usize - 1].iter().copied()).collect();
                Rational::from(covered.len() as u32)
            }
            FunctionKind::GraphCut(edges) => {
                let cut = edges.iter().filter(|&&(u, v)| a.contains(u) != a.contains(v)).count();
                Rational::from(cut as u32)
            }
            FunctionKind::Scaled(inner, factor) => &inner.value(a) * factor,
            FunctionKind::Negated(inner) => -inner.value(a),
        }
    }

    /// `f(A ∪ {x}) - f(A)` for `x ∉ A`.
    pub fn marginal_gain(&self, a: SubsetMask, x: u32) -> Result<Rational> {
        self.check_mask(a)?;
        self.ground.check_element(x)?;
        if a.contains(x) {
            return Err(Error::ElementPresent(x));
        }
        Ok(&self.value(a.with(x)) - &self.value(a))
    }

    /// All `2^m` values indexed by mask.
    pub fn values(&self) -> Result<Vec<Rational>> {
        if self.m() > 30 {
            return Err(Error::ExhaustiveCap { m: self.m(), cap: 30 });
        }
        Ok(self.ground.subsets().map(|a| self.value(a)).collect())
    }

    /// Same function backed by a dense table.
    pub fn tabulate(&self) -> Result<SetFunction> {
        if let FunctionKind::DenseTable(_) = self.kind {
            return Ok(self.clone());
        }
        SetFunction::table(self.ground, self.values()?)
    }

    /// `f - f(∅)`, so the result vanishes on the empty set.
    pub fn normalized(self) -> SetFunction {
        let offset = self.value(self.ground.empty());
        if offset.is_zero() {
            return self;
        }
        match self.kind {
            FunctionKind::DenseTable(values) => SetFunction {
                ground: self.ground,
                kind: FunctionKind::DenseTable(values.iter().map(|v| v - &offset).collect()),
            },
            _ => {
                let values = self.ground.subsets().map(|a| &self.value(a) - &offset).collect();
                SetFunction { ground: self.ground, kind: FunctionKind::DenseTable(values) }
            }
        }
    }

    /// Descriptor echoed in reports. File-format kinds produce a parseable document.
    pub fn describe(&self) -> Value {
        let m = self.m();
        match &self.kind {
            FunctionKind::DenseTable(values) => json!({
                "kind": "table",
                "m": m,
                "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }),
            FunctionKind::Iou(y) => json!({ "kind": "iou", "m": m, "y": y.to_vec() }),
            FunctionKind::NegIou(y) => json!({ "kind": "neg_iou", "m": m, "y": y.to_vec() }),
            FunctionKind::Cardinality => json!({ "kind": "cardinality", "m": m }),
            FunctionKind::Truncation(cap) => json!({ "kind": "truncation", "m": m, "cap": cap }),
            FunctionKind::Coverage(covers) => json!({ "kind": "coverage", "m": m, "covers": covers }),
            FunctionKind::GraphCut(edges) => json!({
                "kind": "graph_cut",
                "m": m,
                "edges": edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
            }),
            FunctionKind::Scaled(inner, factor) => json!({
                "kind": "scaled",
                "factor": factor.to_string(),
                "inner": inner.describe(),
            }),
            FunctionKind::Negated(inner) => json!({ "kind": "negated", "inner": inner.describe() }),
        }
    }
}

fn iou_ratio(y: SubsetMask, a: SubsetMask) -> Rational {
    let inter = (a.bits() & y.bits()).count_ones();
    let union = (a.bits() | y.bits()).count_ones();
    Rational::new(inter as i64, union as i64)
}
