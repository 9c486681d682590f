//! Serializable report records. Sets are sorted element lists and exact
//! values are `"p/q"` strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::check::{CheckMode, ViolationCertificate};
use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::ground::GroundSet;
use crate::iou::{CounterexampleCase, CounterexampleConfig, Property11Witness};
use crate::lovasz::{ConvexityWitness, WitnessSource};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateReport {
    pub mode: CheckMode,
    pub m: u32,
    pub function: Value,
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    pub x: Option<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub gap: Rational,
}

impl CertificateReport {
    pub fn new(f: &SetFunction, cert: &ViolationCertificate) -> CertificateReport {
        CertificateReport {
            mode: cert.mode,
            m: cert.m(),
            function: f.describe(),
            a: cert.a.to_vec(),
            b: cert.b.to_vec(),
            x: cert.x,
            lhs: cert.lhs.clone(),
            rhs: cert.rhs.clone(),
            gap: cert.gap.clone(),
        }
    }

    pub fn certificate(&self) -> Result<ViolationCertificate> {
        let ground = GroundSet::new(self.m)?;
        Ok(ViolationCertificate {
            mode: self.mode,
            a: ground.subset(self.a.iter().copied())?,
            b: ground.subset(self.b.iter().copied())?,
            x: self.x,
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
            gap: self.gap.clone(),
        })
    }

    /// Rebuilds the function from the echoed descriptor (file-format kinds only).
    pub fn function(&self) -> Result<SetFunction> {
        let doc: crate::document::FunctionDocument =
            serde_json::from_value(self.function.clone()).map_err(|e| Error::Document(e.to_string()))?;
        doc.build()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub le_u: String,
    pub le_v: String,
    pub le_mid: String,
    pub deficit: String,
    pub source: WitnessSource,
}

impl From<&ConvexityWitness> for WitnessReport {
    fn from(w: &ConvexityWitness) -> Self {
        WitnessReport {
            u: w.u.coords().to_vec(),
            v: w.v.coords().to_vec(),
            le_u: w.le_u.to_string(),
            le_v: w.le_v.to_string(),
            le_mid: w.le_mid.to_string(),
            deficit: w.deficit.to_string(),
            source: w.source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub case: CounterexampleCase,
    pub m: u32,
    #[serde(rename = "Y")]
    pub y: Vec<u32>,
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    pub x: u32,
    pub r: Rational,
}

impl From<&CounterexampleConfig> for ConfigRecord {
    fn from(c: &CounterexampleConfig) -> Self {
        ConfigRecord {
            case: c.case,
            m: c.m(),
            y: c.y.to_vec(),
            a: c.a.to_vec(),
            b: c.b.to_vec(),
            x: c.x,
            r: c.r.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: CounterexampleCase,
    pub m: u32,
    pub count: u64,
    /// Configurations whose `r` has the sign the closed form predicts.
    pub sign_ok: u64,
    /// Configurations where direct evaluation equals the closed form.
    pub closed_form_ok: u64,
    pub min_r: Option<Rational>,
    pub max_r: Option<Rational>,
}

impl CaseSummary {
    pub fn from_configs<I>(m: u32, case: CounterexampleCase, configs: I) -> Result<CaseSummary>
    where
        I: IntoIterator<Item = CounterexampleConfig>,
    {
        let mut s = CaseSummary { case, m, count: 0, sign_ok: 0, closed_form_ok: 0, min_r: None, max_r: None };
        for c in configs {
            s.count += 1;
            let sign_ok = match case {
                CounterexampleCase::OutsideYB => c.r.is_negative(),
                CounterexampleCase::InsideY => c.r.is_positive(),
            };
            s.sign_ok += sign_ok as u64;
            s.closed_form_ok += (c.closed_form()? == c.r) as u64;
            if s.min_r.as_ref().is_none_or(|v| c.r < *v) {
                s.min_r = Some(c.r.clone());
            }
            if s.max_r.as_ref().is_none_or(|v| c.r > *v) {
                s.max_r = Some(c.r.clone());
            }
        }
        Ok(s)
    }

    pub fn all_ok(&self) -> bool {
        self.sign_ok == self.count && self.closed_form_ok == self.count
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub configs: Vec<ConfigRecord>,
    pub summary: Vec<CaseSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property11Report {
    pub m: u32,
    #[serde(rename = "Y")]
    pub y: Vec<u32>,
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    #[serde(rename = "n_A")]
    pub n_a: u32,
    #[serde(rename = "n_B")]
    pub n_b: u32,
}

impl From<&Property11Witness> for Property11Report {
    fn from(w: &Property11Witness) -> Self {
        Property11Report { m: w.y.m(), y: w.y.to_vec(), a: w.a.to_vec(), b: w.b.to_vec(), n_a: w.n_a, n_b: w.n_b }
    }
}
