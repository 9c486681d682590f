//! The JSON function document:
//!
//! ```json
//! {"kind": "iou", "m": 3, "y": [1]}
//! {"kind": "table", "m": 1, "values": ["0", "1/2"]}
//! ```
//!
//! Kind-specific fields are `values`, `y`, `cap`, `covers` and `edges`.
//! Unknown fields, and known fields that do not belong to the kind, are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::ground::GroundSet;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Table,
    Iou,
    NegIou,
    Cardinality,
    Truncation,
    Coverage,
    GraphCut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub kind: DocumentKind,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 2]>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Subtract `f(∅)` from every value.
    pub normalize: bool,
}

pub fn parse_function(document: &str) -> Result<SetFunction> {
    parse_function_with(document, ParseOptions::default())
}

pub fn parse_function_with(document: &str, options: ParseOptions) -> Result<SetFunction> {
    let doc: FunctionDocument = serde_json::from_str(document)?;
    let f = doc.build()?;
    Ok(if options.normalize { f.normalized() } else { f })
}

impl FunctionDocument {
    pub fn build(&self) -> Result<SetFunction> {
        let ground = GroundSet::new(self.m)?;
        let present = [
            ("values", self.values.is_some()),
            ("y", self.y.is_some()),
            ("cap", self.cap.is_some()),
            ("covers", self.covers.is_some()),
            ("edges", self.edges.is_some()),
        ];
        let wanted: &[&str] = match self.kind {
            DocumentKind::Table => &["values"],
            DocumentKind::Iou | DocumentKind::NegIou => &["y"],
            DocumentKind::Cardinality => &[],
            DocumentKind::Truncation => &["cap"],
            DocumentKind::Coverage => &["covers"],
            DocumentKind::GraphCut => &["edges"],
        };
        for (name, is_present) in present {
            if is_present != wanted.contains(&name) {
                let why = if is_present { "not allowed" } else { "required" };
                return Err(Error::Document(format!("field `{name}` {why} for kind {:?}", self.kind)));
            }
        }

        match self.kind {
            DocumentKind::Table => SetFunction::table(ground, self.values.clone().unwrap_or_default()),
            DocumentKind::Iou => SetFunction::iou(ground.subset(self.y.clone().unwrap_or_default())?),
            DocumentKind::NegIou => SetFunction::neg_iou(ground.subset(self.y.clone().unwrap_or_default())?),
            DocumentKind::Cardinality => Ok(SetFunction::cardinality(ground)),
            DocumentKind::Truncation => Ok(SetFunction::truncation(ground, self.cap.unwrap_or(0))),
            DocumentKind::Coverage => SetFunction::coverage(ground, self.covers.clone().unwrap_or_default()),
            DocumentKind::GraphCut => {
                let edges = self.edges.as_deref().unwrap_or_default();
                SetFunction::graph_cut(ground, edges.iter().map(|&[u, v]| (u, v)).collect())
            }
        }
    }
}
