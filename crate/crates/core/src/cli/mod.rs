//! The `qfps` command line.

pub mod latex;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::expr::{parse, Expr};
use crate::field::Rat;
use crate::qde::{delta2, find_qde, nu, Qde, DEFAULT_MAX_INDEX};
use crate::qre::qde_to_qre;
use crate::rep::{fps_with, prove, qtaylor, Certificate, SeriesRep, Verdict};
use crate::series::{series_of, TruncSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUAL: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "qfps", version, about = "Quadratic differential equations and normal-form power series")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Search {
    /// Largest leading derivative index tried.
    #[arg(long, env = "QFPS_MAX_INDEX", default_value_t = DEFAULT_MAX_INDEX)]
    max_index: usize,
    /// Symbol treated as a constant parameter (repeatable).
    #[arg(long = "param", value_name = "SYM")]
    params: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Least-order quadratic differential equation.
    Qde {
        expr: String,
        #[command(flatten)]
        search: Search,
    },
    /// Quadratic recurrence for the power series coefficients.
    Qre {
        expr: String,
        #[command(flatten)]
        search: Search,
    },
    /// Normal-form series representation.
    Fps {
        expr: String,
        #[arg(long, env = "QFPS_MAX_INDEX", default_value_t = DEFAULT_MAX_INDEX)]
        max_index: usize,
        /// State the representation with this many initial values.
        #[arg(long, value_name = "N")]
        initial_values: Option<usize>,
    },
    /// Truncated expansion through z^T.
    Taylor {
        expr: String,
        #[arg(long, value_name = "T")]
        order: i64,
        /// Also show the direct series expansion.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide whether two expressions are equal near 0.
    Prove { left: String, right: String },
    /// The k-th second-order derivative monomial.
    Delta2 {
        expr: String,
        k: usize,
        #[arg(long = "param", value_name = "SYM")]
        params: Vec<String>,
    },
}

struct Output {
    text: String,
    json: Value,
    latex: String,
    code: i32,
}

impl Output {
    fn ok(text: String, json: Value, latex: String) -> Output {
        Output { text, json, latex, code: EXIT_OK }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
}

fn expression(text: &str, params: &[String]) -> Result<Expr, Failure> {
    let set: BTreeSet<String> = params.iter().cloned().collect();
    parse(text, &set).map_err(|e| Failure::Usage(format!("cannot parse '{}': {}", text, e)))
}

fn failed<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Failed(e.to_string())
}

fn rat_text(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn qde_json(f: &Expr, q: &Qde) -> Value {
    let names = q.var_names("z");
    let terms: Vec<Value> = q
        .terms()
        .iter()
        .map(|(m, c)| json!({ "index": m.index(), "orders": orders(m.index()), "coefficient": c.display_with(&names) }))
        .collect();
    json!({
        "expr": f.to_string(),
        "params": q.params(),
        "order": q.order(),
        "leading_index": q.leading_index(),
        "terms": terms,
        "text": q.to_string(),
    })
}

/// Derivative orders of the factors of the monomial with index `k`.
fn orders(k: usize) -> Vec<i64> {
    let (i, j) = nu(k);
    let mut v: Vec<i64> = [i, j].iter().filter(|&&x| x >= 2).map(|&x| x as i64 - 2).collect();
    v.sort_unstable();
    v
}

fn series_json(f: &Expr, s: &TruncSeries) -> Value {
    let t = s.precision() - 1;
    let lo = s.valuation().unwrap_or(t + 1);
    let coeffs: Vec<Value> = (lo..=t)
        .filter_map(|e| s.coeff(e).filter(|c| !c.is_zero()).map(|c| (e, c)))
        .map(|(e, c)| json!({ "exponent": e, "value": rat_text(&c) }))
        .collect();
    json!({
        "expr": f.to_string(),
        "order": t,
        "valuation": s.valuation(),
        "coefficients": coeffs,
        "text": s.to_string(),
    })
}

fn rep_latex(r: &SeriesRep) -> String {
    let rec = r.recurrence_text();
    let (eq, from) = rec.rsplit_once(", n >= ").expect("recurrence text ends with its range");
    let ivals: Vec<String> = r
        .initial_values
        .iter()
        .enumerate()
        .map(|(i, v)| format!("a_{{{}}} = {}", i, latex::from_text(&rat_text(v))))
        .collect();
    let mut lines = vec![
        latex::from_text(&r.series_text()),
        format!("{}, \\quad n \\geq {}", latex::from_text(eq), from),
    ];
    if !ivals.is_empty() {
        lines.push(ivals.join(", "));
    }
    lines.join(" \\\\\n")
}

fn verdict_output(v: &Verdict) -> Output {
    match v {
        Verdict::Equal(c) => {
            let (name, detail) = match c {
                Certificate::CanonicalZero => ("canonical-zero", json!({})),
                Certificate::ProvenZero { initial_values, valid_from } => {
                    ("proven-zero", json!({ "initial_values": initial_values, "valid_from": valid_from }))
                }
                Certificate::SameNormalForm => ("same-normal-form", json!({})),
            };
            let text = format!("equal ({})", name);
            let json = json!({ "verdict": "equal", "certificate": name, "detail": detail });
            Output::ok(text, json, format!("\\text{{equal ({})}}", name))
        }
        Verdict::NotEqual { exponent, left, right } => {
            let show = |x: &Option<Rat>| x.as_ref().map(rat_text).unwrap_or_else(|| "?".into());
            let text = format!("not equal: coefficients of z^{} are {} and {}", exponent, show(left), show(right));
            let json = json!({
                "verdict": "not-equal",
                "witness": { "exponent": exponent, "left": left.as_ref().map(rat_text), "right": right.as_ref().map(rat_text) },
            });
            let latex = format!(
                "\\text{{not equal: }} [z^{{{}}}]\\colon {} \\neq {}",
                exponent,
                latex::from_text(&show(left)),
                latex::from_text(&show(right))
            );
            Output { text, json, latex, code: EXIT_NOT_EQUAL }
        }
        Verdict::Undecided(why) => Output {
            text: format!("undecided: {}", why),
            json: json!({ "verdict": "undecided", "reason": why }),
            latex: "\\text{undecided}".into(),
            code: EXIT_FAILURE,
        },
    }
}

fn execute(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Qde { expr, search } => {
            let f = expression(&expr, &search.params)?;
            let q = find_qde(&f, search.max_index).map_err(failed)?;
            let text = q.to_string();
            Ok(Output::ok(text.clone(), qde_json(&f, &q), latex::from_text(&text)))
        }
        Command::Qre { expr, search } => {
            let f = expression(&expr, &search.params)?;
            let q = find_qde(&f, search.max_index).map_err(failed)?;
            let r = qde_to_qre(&q);
            let names = r.var_names();
            let linear: Vec<Value> = r
                .linear()
                .iter()
                .map(|t| json!({ "coefficient": t.coeff.display_with(&names), "index_offset": t.shift }))
                .collect();
            let conv: Vec<Value> = r
                .convolutions()
                .iter()
                .map(|t| json!({ "scalar": t.c.display_with(&names), "i": t.i, "j": t.j, "offset": -(t.p as i64) }))
                .collect();
            let text = r.to_string();
            let json = json!({
                "expr": f.to_string(),
                "params": r.params(),
                "qde": q.to_string(),
                "linear_terms": linear,
                "convolution_terms": conv,
                "text": text,
            });
            Ok(Output::ok(text.clone(), json, latex::from_text(&text)))
        }
        Command::Fps { expr, max_index, initial_values } => {
            let f = expression(&expr, &[])?;
            let mut r = fps_with(&f, max_index).map_err(failed)?;
            if let Some(n) = initial_values {
                r = r.rebased(n).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            Ok(Output::ok(r.to_string(), r.to_json(), rep_latex(&r)))
        }
        Command::Taylor { expr, order, oracle } => {
            if order < 0 {
                return Err(Failure::Usage("--order must be non-negative".into()));
            }
            let f = expression(&expr, &[])?;
            let s = qtaylor(&f, order).map_err(failed)?;
            let mut text = s.to_string();
            let mut json = series_json(&f, &s);
            let mut latex = latex::from_text(&text);
            if oracle {
                let o = series_of(&f, order).map_err(failed)?;
                let agree = o == s;
                text = format!("{}\noracle: {}\nagree: {}", text, o, agree);
                json["oracle"] = json!({ "text": o.to_string(), "agree": agree });
                latex = format!("{} \\\\\n{}", latex, latex::from_text(&o.to_string()));
            }
            Ok(Output::ok(text, json, latex))
        }
        Command::Prove { left, right } => {
            let a = expression(&left, &[])?;
            let b = expression(&right, &[])?;
            Ok(verdict_output(&prove(&a, &b)))
        }
        Command::Delta2 { expr, k, params } => {
            let f = expression(&expr, &params)?;
            let d = delta2(&f, k);
            let (i, j) = nu(k);
            let text = d.to_string();
            let json = json!({ "expr": f.to_string(), "k": k, "pair": [i, j], "result": text });
            Ok(Output::ok(text.clone(), json, latex::from_text(&text)))
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let rendered = e.render().to_string();
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{}", rendered);
                EXIT_OK
            } else {
                let _ = write!(err, "{}", rendered);
                EXIT_USAGE
            };
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(o) => {
            let body = match format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable"),
                Format::Latex => o.latex,
            };
            let _ = writeln!(out, "{}", body);
            o.code
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {}", m);
            EXIT_USAGE
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "error: {}", m);
            EXIT_FAILURE
        }
    }
}
