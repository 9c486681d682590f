//! Python bindings for `setfn-core`.
//!
//! Exact values cross the boundary as `"p/q"` strings (feed them to
//! `fractions.Fraction`); sets are lists of 1-based elements; reports are
//! plain dicts with the same fields as the CLI's JSON output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::Value;

use setfn_core::report::{CertificateReport, ConfigRecord, Property11Report, WitnessReport};
use setfn_core::{
    CheckMode, CounterexampleCase, ExtensionPoint, GroundSet, MonotoneVerdict, OutsideParams, ParseOptions, Rational,
    SubsetMask, Verdict,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py, T: serde::Serialize>(py: Python<'py>, report: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(report).map_err(value_error)?)
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let json = obj.py().import("json")?;
    let text: String = json.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(value_error)
}

fn subset(m: u32, elements: Vec<u32>) -> PyResult<SubsetMask> {
    GroundSet::new(m).and_then(|g| g.subset(elements)).map_err(value_error)
}

fn parse_mode(mode: &str) -> PyResult<CheckMode> {
    mode.parse().map_err(value_error)
}

fn parse_case(case: &str) -> PyResult<CounterexampleCase> {
    match case {
        "outside-yb" | "outside" => Ok(CounterexampleCase::OutsideYB),
        "inside-y" | "inside" => Ok(CounterexampleCase::InsideY),
        other => Err(PyValueError::new_err(format!("unknown case {other:?}"))),
    }
}

/// A set function over the ground set {1..m} with exact rational values.
#[pyclass(name = "SetFunction", frozen)]
struct PySetFunction {
    inner: setfn_core::SetFunction,
}

#[pymethods]
impl PySetFunction {
    #[staticmethod]
    fn iou(m: u32, y: Vec<u32>) -> PyResult<Self> {
        let inner = setfn_core::SetFunction::iou(subset(m, y)?).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn neg_iou(m: u32, y: Vec<u32>) -> PyResult<Self> {
        let inner = setfn_core::SetFunction::neg_iou(subset(m, y)?).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn cardinality(m: u32) -> PyResult<Self> {
        let ground = GroundSet::new(m).map_err(value_error)?;
        Ok(Self { inner: setfn_core::SetFunction::cardinality(ground) })
    }

    #[staticmethod]
    fn truncation(m: u32, cap: u32) -> PyResult<Self> {
        let ground = GroundSet::new(m).map_err(value_error)?;
        Ok(Self { inner: setfn_core::SetFunction::truncation(ground, cap) })
    }

    #[staticmethod]
    fn coverage(m: u32, covers: Vec<Vec<u32>>) -> PyResult<Self> {
        let ground = GroundSet::new(m).map_err(value_error)?;
        let inner = setfn_core::SetFunction::coverage(ground, covers).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn graph_cut(m: u32, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        let ground = GroundSet::new(m).map_err(value_error)?;
        let inner = setfn_core::SetFunction::graph_cut(ground, edges).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Dense table; `values[mask]` as `"p/q"` or integer strings.
    #[staticmethod]
    fn table(m: u32, values: Vec<String>) -> PyResult<Self> {
        let ground = GroundSet::new(m).map_err(value_error)?;
        let values =
            values.iter().map(|s| s.parse::<Rational>()).collect::<Result<Vec<_>, _>>().map_err(value_error)?;
        let inner = setfn_core::SetFunction::table(ground, values).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Parses a JSON function document.
    #[staticmethod]
    #[pyo3(signature = (document, normalize = false))]
    fn from_json(document: &str, normalize: bool) -> PyResult<Self> {
        let inner = setfn_core::parse_function_with(document, ParseOptions { normalize }).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    fn negated(&self) -> Self {
        Self { inner: setfn_core::SetFunction::negated(self.inner.clone()) }
    }

    fn scaled(&self, factor: &str) -> PyResult<Self> {
        let factor: Rational = factor.parse().map_err(value_error)?;
        Ok(Self { inner: setfn_core::SetFunction::scaled(self.inner.clone(), factor) })
    }

    fn evaluate(&self, elements: Vec<u32>) -> PyResult<String> {
        let a = subset(self.inner.m(), elements)?;
        Ok(self.inner.evaluate(a).map_err(value_error)?.to_string())
    }

    fn marginal_gain(&self, elements: Vec<u32>, x: u32) -> PyResult<String> {
        let a = subset(self.inner.m(), elements)?;
        Ok(self.inner.marginal_gain(a, x).map_err(value_error)?.to_string())
    }

    /// JSON descriptor of the function.
    fn describe(&self) -> String {
        self.inner.describe().to_string()
    }

    fn __repr__(&self) -> String {
        format!("SetFunction({})", self.inner.describe())
    }
}

/// Returns `None` when submodular, otherwise the minimal certificate.
#[pyfunction]
#[pyo3(signature = (f, mode = "standard", workers = None))]
fn check_submodular<'py>(
    py: Python<'py>,
    f: &PySetFunction,
    mode: &str,
    workers: Option<usize>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let mode = parse_mode(mode)?;
    let verdict = py.detach(|| setfn_core::check_submodular_with(&f.inner, mode, workers)).map_err(value_error)?;
    match verdict {
        Verdict::Submodular => Ok(None),
        Verdict::Violated(cert) => report_to_py(py, &CertificateReport::new(&f.inner, &cert)).map(Some),
    }
}

#[pyfunction]
fn verify_certificate(f: &PySetFunction, certificate: &Bound<'_, PyAny>) -> PyResult<bool> {
    let report: CertificateReport = from_py(certificate)?;
    let cert = report.certificate().map_err(value_error)?;
    setfn_core::verify_certificate(&f.inner, &cert).map_err(value_error)
}

/// Returns `None` when monotone, otherwise `{"A", "x", "gap"}`.
#[pyfunction]
fn check_monotone<'py>(py: Python<'py>, f: &PySetFunction) -> PyResult<Option<Bound<'py, PyAny>>> {
    match setfn_core::check_monotone(&f.inner).map_err(value_error)? {
        MonotoneVerdict::Monotone => Ok(None),
        MonotoneVerdict::Violated { a, x, gap } => {
            let v = serde_json::json!({ "A": a.to_vec(), "x": x, "gap": gap.to_string() });
            to_py(py, &v).map(Some)
        }
    }
}

#[pyfunction]
fn lovasz_evaluate(f: &PySetFunction, point: Vec<f64>) -> PyResult<f64> {
    let w = ExtensionPoint::new(point).map_err(value_error)?;
    Ok(setfn_core::lovasz_evaluate(&f.inner, &w).map_err(value_error)?.value)
}

/// The sorted chain as `(element, prefix, prefix value)` triples.
#[pyfunction]
fn lovasz_trace(f: &PySetFunction, point: Vec<f64>) -> PyResult<Vec<(u32, Vec<u32>, String)>> {
    let w = ExtensionPoint::new(point).map_err(value_error)?;
    let eval = setfn_core::lovasz_evaluate(&f.inner, &w).map_err(value_error)?;
    Ok(eval.chain.iter().map(|s| (s.element, s.prefix.to_vec(), s.value.to_string())).collect())
}

#[pyfunction]
#[pyo3(signature = (f, samples = 10_000, seed = 0, tol = 1e-9, workers = None))]
fn probe_convexity<'py>(
    py: Python<'py>,
    f: &PySetFunction,
    samples: usize,
    seed: u64,
    tol: f64,
    workers: Option<usize>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let witness =
        py.detach(|| setfn_core::probe_convexity_with(&f.inner, samples, seed, tol, workers)).map_err(value_error)?;
    witness.map(|w| report_to_py(py, &WitnessReport::from(&w))).transpose()
}

#[pyfunction]
fn witness_from_lattice_violation<'py>(
    py: Python<'py>,
    f: &PySetFunction,
    certificate: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let report: CertificateReport = from_py(certificate)?;
    let cert = report.certificate().map_err(value_error)?;
    let w = setfn_core::witness_from_lattice_violation(&f.inner, &cert).map_err(value_error)?;
    report_to_py(py, &WitnessReport::from(&w))
}

#[pyfunction]
fn closed_form_r_outside(ab_n: u32, a_d: u32, b_d: u32) -> PyResult<String> {
    let p = OutsideParams::new(ab_n, a_d, b_d).map_err(value_error)?;
    Ok(setfn_core::closed_form_r_outside(p).to_string())
}

#[pyfunction]
fn closed_form_r_inside(a_d: u32, b_d: u32) -> PyResult<String> {
    Ok(setfn_core::closed_form_r_inside(a_d, b_d).map_err(value_error)?.to_string())
}

#[pyfunction]
fn direct_r(m: u32, y: Vec<u32>, a: Vec<u32>, b: Vec<u32>, x: u32) -> PyResult<String> {
    let r = setfn_core::direct_r(subset(m, y)?, subset(m, a)?, subset(m, b)?, x).map_err(value_error)?;
    Ok(r.to_string())
}

/// All configurations for `case` in `"outside-yb"` / `"inside-y"`.
#[pyfunction]
fn enumerate_counterexamples<'py>(py: Python<'py>, m: u32, case: &str) -> PyResult<Bound<'py, PyList>> {
    let case = parse_case(case)?;
    let configs = setfn_core::enumerate_counterexamples(m, case).map_err(value_error)?;
    let list = PyList::empty(py);
    for c in configs {
        list.append(report_to_py(py, &ConfigRecord::from(&c))?)?;
    }
    Ok(list)
}

#[pyfunction]
fn refute_property11<'py>(py: Python<'py>, m: u32) -> PyResult<Bound<'py, PyAny>> {
    let w = setfn_core::refute_property11(m).map_err(value_error)?;
    report_to_py(py, &Property11Report::from(&w))
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("setfn".to_string()).chain(args);
    let code = setfn_core::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
fn setfn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySetFunction>()?;
    m.add_function(wrap_pyfunction!(check_submodular, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(check_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(lovasz_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(lovasz_trace, m)?)?;
    m.add_function(wrap_pyfunction!(probe_convexity, m)?)?;
    m.add_function(wrap_pyfunction!(witness_from_lattice_violation, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_r_outside, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_r_inside, m)?)?;
    m.add_function(wrap_pyfunction!(direct_r, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_counterexamples, m)?)?;
    m.add_function(wrap_pyfunction!(refute_property11, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_convert_to_python() {
        Python::initialize();
        Python::attach(|py| {
            let v = serde_json::json!({ "A": [1, 2], "x": null, "gap": "-1/3", "ok": true, "d": 0.5 });
            let obj = to_py(py, &v).unwrap();
            let dict = obj.cast::<PyDict>().unwrap();
            let a: Vec<u32> = dict.get_item("A").unwrap().unwrap().extract().unwrap();
            assert_eq!(a, vec![1, 2]);
            assert!(dict.get_item("x").unwrap().unwrap().is_none());
            let back: Value = from_py(&obj).unwrap();
            assert_eq!(back, v);
        });
    }

    #[test]
    fn certificate_round_trips_through_python() {
        Python::initialize();
        Python::attach(|py| {
            let f = PySetFunction::iou(3, vec![1]).unwrap();
            let cert = check_submodular(py, &f, "standard", Some(1)).unwrap().unwrap();
            assert!(verify_certificate(&f, &cert).unwrap());
            let card = PySetFunction::cardinality(3).unwrap();
            assert!(check_submodular(py, &card, "lattice", None).unwrap().is_none());
        });
    }
}
