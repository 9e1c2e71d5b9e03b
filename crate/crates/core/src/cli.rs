//! Command-line front end. Every command prints one JSON document.
//!
//! Exit codes: 0 on success, 2 for malformed input, 3 when a computation
//! fails. Failures print `{"schema": "1", "error": {"code", "message"}}`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rug::Rational;
use serde_json::{json, Value};

use crate::binomial::{solve_wedge, BinomialSystem};
use crate::bounds::compare_bounds;
use crate::error::Error;
use crate::json::{integer_number, rational_value, SCHEMA_VERSION};
use crate::lattice::{determinant, smith_normal_form, IntMatrix};
use crate::parse::{parse_ksum, parse_matrix, parse_real_literal};
use crate::polytope::{convex_hull, Point};
use crate::roots1d::{count_roots, oracle_budget, solve_one_alternation, SolveRequest};
use crate::system::SparseSystem;

#[derive(Debug, Parser)]
#[command(
    name = "sparsereal",
    version,
    about = "Component bounds and certified sparse solvers"
)]
pub struct Cli {
    /// Starting working precision for the solvers, in bits.
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Print an indented `key: value` report instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every component bound for a polynomial system.
    Bound(BoundArgs),
    /// Approximate the positive root of a k-sum with one sign alternation.
    SolveKsum(SolveKsumArgs),
    /// Approximate the positive root of a binomial system in the orthant wedge.
    SolveBinomial(SolveBinomialArgs),
    /// Smith normal form of a square integer matrix.
    Snf(SnfArgs),
    /// Convex hull and normalized volume of a point set.
    Volume(VolumeArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// JSON file `{"n", "equations", "inequalities"}`.
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub system: Option<PathBuf>,
    /// Several system files, evaluated concurrently.
    #[arg(long, num_args = 1..)]
    pub batch: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveKsumArgs {
    /// The k-sum, e.g. "x^1000 - 2".
    #[arg(long = "f")]
    pub f: String,
    /// Right end of the search interval (0, R).
    #[arg(long = "R", visible_alias = "r")]
    pub r: String,
    /// Absolute accuracy.
    #[arg(long)]
    pub eps: String,
    /// Fail when the oracle-call budget is exceeded.
    #[arg(long)]
    pub budget_check: bool,
}

#[derive(Debug, Args)]
pub struct SolveBinomialArgs {
    /// JSON file `{"D", "c", "R", "epsilon"}`, or "-" for stdin.
    #[arg(value_name = "FILE")]
    pub input: String,
}

#[derive(Debug, Args)]
pub struct SnfArgs {
    /// Inline matrix, rows separated by ';', e.g. "2 0; 0 3".
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub matrix: Option<String>,
    /// File with one row per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    /// Points, rows separated by ';', e.g. "0 0; 5 0; 0 3".
    #[arg(long)]
    pub points: String,
}

/// A failed invocation: stable code, message and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.code(),
            message: e.to_string(),
            exit_code: if e.is_input_error() { 2 } else { 3 },
        }
    }
}

impl Failure {
    fn input(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            exit_code: 2,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"schema": SCHEMA_VERSION, "error": {"code": self.code, "message": self.message}})
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input("io_error", format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::input("io_error", format!("{}: {e}", path.display())))
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_source(path)?)
        .map_err(|e| Failure::input("invalid_json", format!("{}: {e}", path.display())))
}

fn literal(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_real_literal(text.trim())
        .ok_or_else(|| Failure::input("parse_error", format!("{what}: '{text}' is not a number")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn bound_one(path: &Path) -> Result<Value, Failure> {
    let sys = SparseSystem::from_json(&read_json(path)?)?;
    Ok(to_value(&compare_bounds(&sys)?))
}

fn run_bound(args: &BoundArgs) -> Result<Value, Failure> {
    if let Some(path) = &args.system {
        return bound_one(path);
    }
    let results: Vec<Value> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .batch
            .iter()
            .map(|p| scope.spawn(move || bound_one(p)))
            .collect();
        handles
            .into_iter()
            .zip(&args.batch)
            .map(|(h, p)| {
                let entry = h
                    .join()
                    .expect("bound evaluation does not panic")
                    .unwrap_or_else(|f| f.to_json());
                json!({"file": p.display().to_string(), "result": entry})
            })
            .collect()
    });
    Ok(json!({"schema": SCHEMA_VERSION, "reports": results}))
}

fn run_solve_ksum(args: &SolveKsumArgs, precision_bits: Option<u32>) -> Result<Value, Failure> {
    let f = parse_ksum(&args.f).map_err(Error::from)?;
    let r = literal(&args.r, "R")?;
    let eps = literal(&args.eps, "eps")?;
    let mut req = SolveRequest::new(f.clone(), r.clone(), eps.clone());
    req.budget_check = args.budget_check;
    req.precision_bits = precision_bits;
    let root = solve_one_alternation(&req)?;
    let count = count_roots(&f, &r)?;
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "f": f.to_string(),
        "R": rational_value(&r),
        "epsilon": rational_value(&eps),
        "degree": rational_value(&f.degree()),
        "sign_alternations": f.sign_alternations(),
        "root_count": count,
        "oracle_budget": oracle_budget(&f, &r, &eps),
        "root": root.as_ref().map(to_value),
    }))
}

fn run_solve_binomial(
    args: &SolveBinomialArgs,
    precision_bits: Option<u32>,
) -> Result<Value, Failure> {
    let sys = BinomialSystem::from_json(&read_json(Path::new(&args.input))?)?;
    Ok(to_value(&solve_wedge(&sys, precision_bits)?))
}

fn run_snf(args: &SnfArgs) -> Result<Value, Failure> {
    let text = match (&args.matrix, &args.file) {
        (Some(m), _) => m.clone(),
        (None, Some(path)) => read_source(path)?,
        (None, None) => {
            return Err(Failure::input(
                "invalid_input",
                "one of --matrix or --file is required",
            ))
        }
    };
    let a = IntMatrix::new(parse_matrix(&text).map_err(Error::from)?)?;
    let snf = smith_normal_form(&a)?;
    let mut out = to_value(&snf);
    let obj = out
        .as_object_mut()
        .expect("decomposition serializes to an object");
    obj.insert("schema".into(), SCHEMA_VERSION.into());
    obj.insert("A".into(), to_value(&a));
    obj.insert(
        "determinant".into(),
        Value::Number(integer_number(&determinant(&a)?)),
    );
    Ok(out)
}

fn parse_points(text: &str) -> Result<Vec<Point>, Failure> {
    let mut pts = Vec::new();
    for row in text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
    {
        let coords = row
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| literal(t, "coordinate"))
            .collect::<Result<Vec<_>, _>>()?;
        pts.push(Point::new(coords));
    }
    if pts.is_empty() {
        return Err(Error::Empty("point set").into());
    }
    Ok(pts)
}

fn run_volume(args: &VolumeArgs) -> Result<Value, Failure> {
    let pts = parse_points(&args.points)?;
    let n = pts[0].dim();
    let hull = convex_hull(&pts, n)?;
    let vertices: Vec<Vec<Value>> = hull
        .vertices()
        .iter()
        .map(|p| p.coords().iter().map(rational_value).collect())
        .collect();
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "n": n,
        "affine_dim": hull.affine_dim(),
        "vertices": vertices,
        "normalized_volume": rational_value(hull.volume().value()),
    }))
}

/// Executes a parsed command.
pub fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Bound(a) => run_bound(a),
        Command::SolveKsum(a) => run_solve_ksum(a, cli.precision_bits),
        Command::SolveBinomial(a) => run_solve_binomial(a, cli.precision_bits),
        Command::Snf(a) => run_snf(a),
        Command::Volume(a) => run_volume(a),
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
            Some(if m["den"] == 1 {
                m["num"].to_string()
            } else {
                format!("{}/{}", m["num"], m["den"])
            })
        }
        Value::String(s) => Some(s.clone()),
        Value::Object(_) => None,
        Value::Array(items) if items.iter().all(|x| scalar_text(x).is_some()) => Some(format!(
            "[{}]",
            items
                .iter()
                .filter_map(scalar_text)
                .collect::<Vec<_>>()
                .join(", ")
        )),
        Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

/// Human-readable rendering: one `key: value` line per leaf, rationals as `p/q`.
fn render_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!(
            "{pad}{}\n",
            scalar_text(other).unwrap_or_default()
        )),
    }
}

/// Parses `args`, runs, writes JSON to `out` and returns the exit code.
pub fn main_with_args<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (doc, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(f) => (f.to_json(), f.exit_code),
    };
    let text = if cli.text {
        let mut buf = String::new();
        render_text(&doc, 0, &mut buf);
        buf
    } else {
        serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 3;
    }
    code
}
