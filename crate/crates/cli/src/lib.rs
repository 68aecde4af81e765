//! Batch front end for `tropav-core`: one JSON document in, one JSON or text
//! document out. Exit codes are 0 on success, 1 on a domain error and 2 on
//! malformed input or options.

mod commands;

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

/// Version tag of the shipped document schemas.
pub const SCHEMA_VERSION: &str = "v1";

/// Required and optional keys of every input and output document.
pub const SCHEMA: &str = include_str!("../schemas/v1.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "tropav", version, about = "Exact computations for degenerating polarized abelian varieties")]
pub struct Cli {
    /// Search window for lattice enumerations
    #[arg(long, global = true, default_value_t = 4)]
    pub window: u32,
    /// Numerical tolerance for Siegel computations
    #[arg(long, global = true, default_value_t = 1e-10, allow_negative_numbers = true)]
    pub tol: f64,
    /// Largest degree enumerated by monoid checks
    #[arg(long = "degree-bound", global = true, default_value_t = 3)]
    pub degree_bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Input file, `-` for standard input
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Job {
    /// Inline JSON input, used instead of --input
    pub json: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hermite normal form of an integer matrix
    Hnf(Job),
    /// Smith normal form of an integer matrix
    Snf(Job),
    /// Symplectic basis of an alternating form
    Symplectic(Job),
    /// Polarization type of a map of lattices
    Poltype(Job),
    /// Action of GL(X, Y) on a quadratic form
    Glxy(Job),
    /// Delaunay paving of a positive definite form
    Delaunay(Job),
    /// Membership of a form in the cone of a paving
    VoronoiCone(Job),
    /// Bending parameters and convexity of a piecewise-affine function
    Bend(Job),
    /// Quadratic plus periodic decomposition of samples
    QpDecompose(Job),
    /// Membership in the cone of a triangulation
    CyCone(Job),
    /// Linear section of a form over its Delaunay paving
    Sigma(Job),
    /// Discrete Legendre transform
    Legendre(Job),
    /// Addition in the twisted graded monoid
    MonoidAdd(Job),
    /// Fourier index set of a lattice map
    Fourier(Job),
    /// Central fiber complex of a paving
    Fiber(Job),
    /// Quotient data attached to a face
    Face(Job),
    /// Action of the paramodular group on Siegel space
    Gamma(Job),
    /// Cayley transform to the bounded domain
    Cayley(Job),
    /// Tropicalization at a standard cusp
    Trop(Job),
    /// Finite Heisenberg group operations
    Heis(Job),
    /// Eigenspace decomposition of the Schrödinger model
    Kw(Job),
    /// Balanced theta sections
    Balanced(Job),
    /// Degeneration exponents
    Degen(Job),
    /// Sign twist exponents
    Twist(Job),
    /// Valuation profile of a section
    Profile(Job),
}

impl Command {
    fn job(&self) -> &Job {
        use Command::*;
        match self {
            Hnf(j) | Snf(j) | Symplectic(j) | Poltype(j) | Glxy(j) | Delaunay(j) | VoronoiCone(j) | Bend(j)
            | QpDecompose(j) | CyCone(j) | Sigma(j) | Legendre(j) | MonoidAdd(j) | Fourier(j) | Fiber(j)
            | Face(j) | Gamma(j) | Cayley(j) | Trop(j) | Heis(j) | Kw(j) | Balanced(j) | Degen(j) | Twist(j)
            | Profile(j) => j,
        }
    }
}

/// Validated global options.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub window: u32,
    pub tol: f64,
    pub degree_bound: u32,
}

/// A failed job: exit code plus the fields of the error document.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub exit: i32,
    pub code: String,
    pub message: String,
    pub field: Option<String>,
}

impl Failure {
    pub fn malformed(code: &str, message: impl Into<String>, field: Option<&str>) -> Self {
        Failure { exit: EXIT_MALFORMED, code: code.into(), message: message.into(), field: field.map(str::to_owned) }
    }

    pub fn domain(err: impl Into<tropav_core::Error>, field: &str) -> Self {
        let err = err.into();
        Failure { exit: EXIT_DOMAIN, code: err.code().into(), message: err.to_string(), field: Some(field.into()) }
    }

    pub fn document(&self) -> Value {
        json!({"kind": "error", "code": self.code, "message": self.message, "field": self.field})
    }
}

/// Maps a domain error to a failure blamed on `field`.
pub(crate) fn at<E: Into<tropav_core::Error>>(field: &'static str) -> impl FnOnce(E) -> Failure {
    move |e| Failure::domain(e, field)
}

/// Typed view of an input document; the failing path becomes the field.
pub(crate) fn parse<T: DeserializeOwned>(v: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { None } else { Some(path) };
        Failure { exit: EXIT_MALFORMED, code: "MalformedInput".into(), message: e.inner().to_string(), field }
    })
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one job. `stdin` is read only when the input comes from there.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { exit: EXIT_OK, stdout: text, stderr: String::new() },
                _ => {
                    let f = Failure::malformed("Usage", text.trim_end(), None);
                    Outcome { exit: EXIT_MALFORMED, stdout: render(&f.document(), Format::Json), stderr: text }
                }
            };
        }
    };
    let format = cli.format;
    match execute(&cli, stdin) {
        Ok(doc) => Outcome { exit: EXIT_OK, stdout: render(&doc, format), stderr: String::new() },
        Err(f) => Outcome { exit: f.exit, stdout: render(&f.document(), format), stderr: format!("{}\n", f.message) },
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, Failure> {
    if !cli.tol.is_finite() || cli.tol <= 0.0 {
        return Err(Failure::malformed("BadOption", "tolerance must be positive and finite", Some("--tol")));
    }
    if cli.window == 0 {
        return Err(Failure::malformed("BadOption", "window must be at least 1", Some("--window")));
    }
    let opts = Options { window: cli.window, tol: cli.tol, degree_bound: cli.degree_bound };
    let text = read_input(cli.command.job(), cli.input.as_deref(), stdin)?;
    let input: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::malformed("MalformedInput", format!("invalid JSON: {e}"), None))?;
    commands::dispatch(&cli.command, input, &opts)
}

fn read_input(job: &Job, input: Option<&str>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match (&job.json, input) {
        (Some(_), Some(_)) => {
            Err(Failure::malformed("BadOption", "give either inline JSON or --input, not both", Some("--input")))
        }
        (Some(j), None) => Ok(j.clone()),
        (None, Some(path)) if path != "-" => std::fs::read_to_string(path)
            .map_err(|e| Failure::malformed("InputUnreadable", format!("{path}: {e}"), Some("--input"))),
        (None, _) => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::malformed("InputUnreadable", e.to_string(), Some("--input")))?;
            Ok(s)
        }
    }
}

/// Pretty JSON, or `key: value` lines with `kind` first.
pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("documents serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(map) = doc {
                let kind = map.get("kind").and_then(Value::as_str).unwrap_or("");
                out.push_str(&format!("kind: {kind}\n"));
                for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "kind") {
                    let shown = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {shown}\n"));
                }
            } else {
                out.push_str(&doc.to_string());
                out.push('\n');
            }
            out
        }
    }
}
