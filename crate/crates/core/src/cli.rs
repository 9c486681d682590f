//! Command-line front end.
//!
//! Exit codes: 0 when the property holds or an evaluation succeeded, 1 when
//! a violation or witness is reported, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::check::{check_monotone_with, check_submodular_with, CheckMode, MonotoneVerdict, Verdict};
use crate::document::{parse_function_with, ParseOptions};
use crate::error::Error;
use crate::function::SetFunction;
use crate::ground::GroundSet;
use crate::iou::{enumerate_counterexamples, refute_property11, CounterexampleCase, OutsideParams};
use crate::lovasz::{
    lovasz_evaluate, probe_convexity_with, witness_from_lattice_violation, ExtensionPoint, DEFAULT_TOLERANCE,
};
use crate::report::{
    CaseSummary, CertificateReport, ConfigRecord, CounterexampleReport, Property11Report, WitnessReport,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Largest `m` accepted by `scan`.
pub const SCAN_MAX_M: u32 = 12;

#[derive(Debug, Parser)]
#[command(name = "setfn", version, about = "Exhaustive submodularity certificates and Lovász extension probes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide submodularity by exhaustive search.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Decide monotonicity by exhaustive search.
    Monotone {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the Lovász extension at a point.
    Extension {
        #[command(flatten)]
        source: Source,
        /// Comma-separated coordinates, one per element.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        /// Include the sorted prefix chain.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for midpoint-convexity violations of the Lovász extension.
    Probe {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild the IoU / -IoU non-submodularity results.
    Reproduce {
        #[arg(value_enum)]
        target: ReproduceTarget,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal certificates for every (m, |Y|) with Y = {1..|Y|}.
    Scan {
        #[arg(long, value_enum)]
        builtin: ScanFamily,
        #[arg(long)]
        max_m: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Counterexample to "B ⊂ A implies |Y \ B| < |Y \ A|".
    #[command(name = "refute-p11")]
    RefuteP11 {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// JSON function document.
    #[arg(long, conflicts_with = "builtin")]
    function: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, requires = "builtin")]
    m: Option<u32>,
    /// Comma-separated reference set for iou / neg_iou.
    #[arg(long, value_delimiter = ',', requires = "builtin")]
    y: Option<Vec<u32>>,
    #[arg(long, requires = "builtin")]
    cap: Option<u32>,
    /// Subtract f(∅) from a loaded table.
    #[arg(long)]
    normalize: bool,
    /// Negate the function.
    #[arg(long)]
    negate: bool,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    json: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    Iou,
    #[value(name = "neg_iou", alias = "neg-iou")]
    NegIou,
    Cardinality,
    Truncation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanFamily {
    Iou,
    #[value(name = "neg_iou", alias = "neg-iou")]
    NegIou,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Standard,
    PaperLiteral,
    Lattice,
}

impl From<ModeArg> for CheckMode {
    fn from(m: ModeArg) -> CheckMode {
        match m {
            ModeArg::Standard => CheckMode::Standard,
            ModeArg::PaperLiteral => CheckMode::PaperLiteral,
            ModeArg::Lattice => CheckMode::Lattice,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReproduceTarget {
    Paper,
}

#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Self {
        Failure(s.to_string())
    }
}

/// A finished command: exit code plus report.
struct Outcome {
    code: i32,
    report: Value,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_HOLDS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let json = match &cli.command {
        Command::Check { common, .. }
        | Command::Monotone { common, .. }
        | Command::Probe { common, .. }
        | Command::Reproduce { common, .. }
        | Command::Scan { common, .. } => common.json,
        Command::Extension { json, .. } | Command::RefuteP11 { json, .. } => *json,
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let text = if json {
                let mut s = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
                s.push('\n');
                s
            } else {
                render_human(&outcome.report)
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            outcome.code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Check { source, mode, common } => {
            let f = load(&source)?;
            let verdict = check_submodular_with(&f, mode.into(), common.workers)?;
            Ok(check_outcome(&f, mode.into(), &verdict))
        }
        Command::Monotone { source, common } => {
            let f = load(&source)?;
            let report = match check_monotone_with(&f, common.workers)? {
                MonotoneVerdict::Monotone => Outcome {
                    code: EXIT_HOLDS,
                    report: json!({ "verdict": "monotone", "m": f.m(), "function": f.describe() }),
                },
                MonotoneVerdict::Violated { a, x, gap } => Outcome {
                    code: EXIT_VIOLATED,
                    report: json!({
                        "verdict": "violated",
                        "m": f.m(),
                        "function": f.describe(),
                        "A": a.to_vec(),
                        "x": x,
                        "gap": gap.to_string(),
                    }),
                },
            };
            Ok(report)
        }
        Command::Extension { source, point, trace, .. } => {
            let f = load(&source)?;
            let w = ExtensionPoint::new(point)?;
            let eval = lovasz_evaluate(&f, &w)?;
            let mut report = json!({
                "function": f.describe(),
                "point": w.coords(),
                "value": eval.value.to_string(),
            });
            if trace {
                let chain: Vec<Value> = eval
                    .chain
                    .iter()
                    .map(|s| json!({ "element": s.element, "prefix": s.prefix.to_vec(), "value": s.value.to_string() }))
                    .collect();
                report["chain"] = Value::Array(chain);
            }
            Ok(Outcome { code: EXIT_HOLDS, report })
        }
        Command::Probe { source, samples, seed, tol, common } => {
            let f = load(&source)?;
            if !tol.is_finite() || tol < 0.0 {
                return Err("tolerance must be finite and non-negative".into());
            }
            let witness = probe_convexity_with(&f, samples, seed, tol, common.workers)?;
            let mut report = json!({
                "verdict": if witness.is_some() { "witness" } else { "none" },
                "function": f.describe(),
                "samples": samples,
                "seed": seed,
                "tol": tol.to_string(),
            });
            let code = match witness {
                Some(w) => {
                    report["witness"] = serde_json::to_value(WitnessReport::from(&w)).expect("serializes");
                    EXIT_VIOLATED
                }
                None => EXIT_HOLDS,
            };
            Ok(Outcome { code, report })
        }
        Command::Reproduce { target: ReproduceTarget::Paper, m, common } => reproduce(m, common.workers),
        Command::Scan { builtin, max_m, common } => scan(builtin, max_m, common.workers),
        Command::RefuteP11 { m, .. } => {
            let w = refute_property11(m)?;
            let mut report = serde_json::to_value(Property11Report::from(&w)).expect("serializes");
            report["holds"] = Value::Bool(false);
            Ok(Outcome { code: EXIT_VIOLATED, report })
        }
    }
}

fn load(source: &Source) -> Result<SetFunction, Failure> {
    let f = match (&source.function, source.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_function_with(&text, ParseOptions { normalize: source.normalize })?
        }
        (None, Some(builtin)) => {
            let m = source.m.ok_or("--builtin requires --m")?;
            let ground = GroundSet::new(m)?;
            let wants_y = matches!(builtin, Builtin::Iou | Builtin::NegIou);
            let wants_cap = matches!(builtin, Builtin::Truncation);
            if source.y.is_some() != wants_y {
                return Err(if wants_y {
                    "--y is required for this builtin"
                } else {
                    "--y only applies to iou and neg_iou"
                }
                .into());
            }
            if source.cap.is_some() != wants_cap {
                return Err(if wants_cap {
                    "--cap is required for truncation"
                } else {
                    "--cap only applies to truncation"
                }
                .into());
            }
            let y = || ground.subset(source.y.clone().unwrap_or_default());
            let f = match builtin {
                Builtin::Iou => SetFunction::iou(y()?)?,
                Builtin::NegIou => SetFunction::neg_iou(y()?)?,
                Builtin::Cardinality => SetFunction::cardinality(ground),
                Builtin::Truncation => SetFunction::truncation(ground, source.cap.unwrap_or(0)),
            };
            if source.normalize {
                f.normalized()
            } else {
                f
            }
        }
        _ => return Err("exactly one of --function or --builtin is required".into()),
    };
    Ok(if source.negate { SetFunction::negated(f) } else { f })
}

fn check_outcome(f: &SetFunction, mode: CheckMode, verdict: &Verdict) -> Outcome {
    match verdict {
        Verdict::Submodular => Outcome {
            code: EXIT_HOLDS,
            report: json!({ "verdict": "submodular", "mode": mode, "m": f.m(), "function": f.describe() }),
        },
        Verdict::Violated(cert) => Outcome {
            code: EXIT_VIOLATED,
            report: json!({ "verdict": "violated", "certificate": CertificateReport::new(f, cert) }),
        },
    }
}

fn reproduce(m: u32, workers: Option<usize>) -> Result<Outcome, Failure> {
    let outside: Vec<_> = enumerate_counterexamples(m, CounterexampleCase::OutsideYB)?.collect();
    let inside: Vec<_> = enumerate_counterexamples(m, CounterexampleCase::InsideY)?.collect();
    let first_outside = outside.first().ok_or("no outside configuration")?;
    let first_inside = inside.first().ok_or("no inside configuration")?;

    let summaries = vec![
        CaseSummary::from_configs(m, CounterexampleCase::OutsideYB, outside.iter().cloned())?,
        CaseSummary::from_configs(m, CounterexampleCase::InsideY, inside.iter().cloned())?,
    ];
    if let Some(bad) = summaries.iter().find(|s| !s.all_ok()) {
        return Err(format!("{} configurations disagree with the closed form", bad.case).into());
    }
    let counterexamples = CounterexampleReport {
        configs: vec![ConfigRecord::from(first_outside), ConfigRecord::from(first_inside)],
        summary: summaries,
    };

    let params = OutsideParams::new(first_outside.ab_n(), first_outside.a_d(), first_outside.b_d())?;
    let closed_forms = json!([
        {
            "case": CounterexampleCase::OutsideYB,
            "ab_n": params.ab_n,
            "a_d": params.a_d,
            "b_d": params.b_d,
            "r": first_outside.closed_form()?.to_string(),
        },
        {
            "case": CounterexampleCase::InsideY,
            "a_d": first_inside.a_d(),
            "b_d": first_inside.b_d(),
            "r": first_inside.closed_form()?.to_string(),
        },
    ]);

    let ground = GroundSet::new(m)?;
    let iou = SetFunction::iou(ground.subset([1])?)?;
    let neg_iou = SetFunction::neg_iou(ground.subset([1, 2])?)?;
    let mut checks = Vec::new();
    for (f, mode) in [(&iou, CheckMode::Standard), (&neg_iou, CheckMode::Standard), (&iou, CheckMode::Lattice)] {
        match check_submodular_with(f, mode, workers)? {
            Verdict::Violated(cert) => checks.push((f, cert)),
            Verdict::Submodular => return Err(format!("expected a violation for {}", f.describe()).into()),
        }
    }
    let (lattice_f, lattice_cert) = &checks[2];
    let witness = witness_from_lattice_violation(lattice_f, lattice_cert)?;

    let property11 = Property11Report::from(&refute_property11(m)?);

    let report = json!({
        "m": m,
        "iou_submodular": false,
        "neg_iou_submodular": false,
        "counterexamples": counterexamples,
        "closed_forms": closed_forms,
        "certificates": checks.iter().map(|(f, c)| CertificateReport::new(f, c)).collect::<Vec<_>>(),
        "convexity": WitnessReport::from(&witness),
        "property11": property11,
    });
    Ok(Outcome { code: EXIT_VIOLATED, report })
}

fn scan(family: ScanFamily, max_m: u32, workers: Option<usize>) -> Result<Outcome, Failure> {
    if !(3..=SCAN_MAX_M).contains(&max_m) {
        return Err(format!("--max-m must lie in 3..={SCAN_MAX_M}, got {max_m}").into());
    }
    let mut rows = Vec::new();
    let mut any_violation = false;
    for m in 3..=max_m {
        let ground = GroundSet::new(m)?;
        for k in 1..=m {
            let y = ground.subset(1..=k)?;
            let f = match family {
                ScanFamily::Iou => SetFunction::iou(y)?,
                ScanFamily::NegIou => SetFunction::neg_iou(y)?,
            };
            let verdict = check_submodular_with(&f, CheckMode::Standard, workers)?;
            let mut row = Map::new();
            row.insert("m".into(), json!(m));
            row.insert("y_size".into(), json!(k));
            match &verdict {
                Verdict::Submodular => {
                    row.insert("verdict".into(), json!("submodular"));
                }
                Verdict::Violated(cert) => {
                    any_violation = true;
                    row.insert("verdict".into(), json!("violated"));
                    row.insert("A".into(), json!(cert.a.to_vec()));
                    row.insert("B".into(), json!(cert.b.to_vec()));
                    row.insert("x".into(), json!(cert.x));
                    row.insert("gap".into(), json!(cert.gap.to_string()));
                }
            }
            rows.push(Value::Object(row));
        }
    }
    let family = match family {
        ScanFamily::Iou => "iou",
        ScanFamily::NegIou => "neg_iou",
    };
    Ok(Outcome {
        code: if any_violation { EXIT_VIOLATED } else { EXIT_HOLDS },
        report: json!({ "family": family, "mode": CheckMode::Standard, "max_m": max_m, "rows": rows }),
    })
}

/// `key: value` lines. Nested objects become dotted keys, except function
/// descriptors, which are kept as compact JSON; arrays of objects are
/// indexed. Strings print without quotes.
pub fn render_human(report: &Value) -> String {
    let mut out = String::new();
    flatten_into(&mut out, "", report);
    out
}

fn flatten_into(out: &mut String, prefix: &str, value: &Value) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if k == "function" || !(v.is_object() || is_object_array(v)) {
                    out.push_str(&format!("{}: {}\n", key(k), scalar(v)));
                } else {
                    flatten_into(out, &key(k), v);
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(out, &key(&i.to_string()), v);
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
    }
}

fn is_object_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
