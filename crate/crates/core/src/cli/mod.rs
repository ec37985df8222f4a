//! The `ftc` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 expression parse error, 3 numeric or
//! domain error, 4 a requested check failed.

mod args;
mod commands;
mod format;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::expression::ParseError;

pub use format::sig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ftc",
    version,
    about = "Integrals as alternating vertex sums of antiderivatives"
)]
pub struct Cli {
    /// Emit one JSON object on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct QuadArgs {
    /// Gauss–Legendre points per panel.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// Panels per axis.
    #[arg(long, default_value_t = 4)]
    pub panels: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate over a box, from an integrand or an antiderivative.
    Integrate {
        #[arg(long)]
        dim: Option<usize>,
        /// Box as "a1:b1,a2:b2,...".
        #[arg(long = "box", value_name = "BOX")]
        box_spec: String,
        /// Integrand.
        #[arg(
            long,
            value_name = "EXPR",
            required_unless_present = "big_f",
            conflicts_with = "big_f"
        )]
        f: Option<String>,
        /// Antiderivative; the vertex sum is taken directly.
        #[arg(long = "F", value_name = "EXPR")]
        big_f: Option<String>,
        /// Exact rational arithmetic for polynomial input.
        #[arg(long)]
        exact: bool,
        /// Compare with the Gauss–Legendre oracle (needs --f).
        #[arg(long, requires = "f")]
        verify: bool,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Check ∂₁⋯∂ₙF = f by central differences on an interior grid.
    CheckAntiderivative {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long = "box", value_name = "BOX")]
        box_spec: String,
        #[arg(long, value_name = "EXPR")]
        f: String,
        #[arg(long = "F", value_name = "EXPR")]
        big_f: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Difference steps, one per axis or a single value for all axes;
        /// defaults to 1e-3 of each extent.
        #[arg(long)]
        h: Option<String>,
        /// Relative tolerance.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Integrate over the parallelotope origin + T·[0,1]ⁿ.
    Parallelotope {
        #[arg(long)]
        origin: String,
        /// Columns of T as "c11,c21;c12,c22;...".
        #[arg(long)]
        edges: String,
        #[arg(long, value_name = "EXPR")]
        f: String,
        /// Compare with seeded Monte Carlo.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Integrate over triangle PQR for f symmetric on QR.
    Triangle {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: String,
        #[arg(long, value_name = "EXPR")]
        f: String,
        #[arg(long, default_value_t = 1e-9)]
        sym_tol: f64,
        #[arg(long, default_value_t = 17)]
        sym_samples: usize,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Compare the vertex sum over a box with the sum over an equal grid.
    SubdivideCheck {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long = "F", value_name = "EXPR")]
        big_f: String,
        #[arg(long = "box", value_name = "BOX")]
        box_spec: String,
        /// Pieces per axis, "k1,k2,...".
        #[arg(long)]
        grid: String,
        /// Fails when |lhs − rhs| > tol · max(1, |lhs|).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Search all ±1 labelings of two triangles for the rectangle pattern.
    Impossibility,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Parse {
        flag: &'static str,
        source: String,
        error: ParseError,
    },
    Lib(Error),
}

impl CliError {
    fn parse(flag: &'static str, source: &str, error: ParseError) -> Self {
        CliError::Parse {
            flag,
            source: source.to_string(),
            error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Lib(e) => match e {
                Error::Parse(_) => EXIT_PARSE,
                Error::DimensionMismatch { .. }
                | Error::InvalidDimension { .. }
                | Error::InvertedAxis { .. }
                | Error::InvalidCut { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidStep { .. }
                | Error::StencilEscapes { .. } => EXIT_USAGE,
                Error::Asymmetric { .. } => EXIT_CHECK,
                _ => EXIT_NUMERIC,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Parse { flag, error, .. } => format!("--{flag}: {error}"),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
        }
    }
}

/// Everything a command reports, in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    pub status: Status,
    pub human: Vec<String>,
}

impl CommandOutput {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            result: Map::new(),
            diagnostics: Map::new(),
            status: Status::Ok,
            human: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), self.command.into());
        obj.insert("inputs".into(), Value::Object(self.inputs.clone()));
        obj.insert("result".into(), Value::Object(self.result.clone()));
        obj.insert(
            "diagnostics".into(),
            Value::Object(self.diagnostics.clone()),
        );
        obj.insert("status".into(), self.status.name().into());
        Value::Object(obj)
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => EXIT_OK,
            Status::Fail => EXIT_CHECK,
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Integrate { .. } => "integrate",
            Command::CheckAntiderivative { .. } => "check-antiderivative",
            Command::Parallelotope { .. } => "parallelotope",
            Command::Triangle { .. } => "triangle",
            Command::SubdivideCheck { .. } => "subdivide-check",
            Command::Impossibility => "impossibility",
        }
    }
}

pub fn execute(command: &Command) -> Result<CommandOutput, CliError> {
    commands::dispatch(command)
}

/// Parse `args` (program name first), run, print, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli.command) {
        Ok(output) => {
            if cli.json {
                let _ = writeln!(out, "{}", output.to_json());
            } else {
                for line in &output.human {
                    let _ = writeln!(out, "{line}");
                }
            }
            output.exit_code()
        }
        Err(err) => {
            let code = err.exit_code();
            if cli.json {
                let mut o = CommandOutput::new(cli.command.name());
                o.status = Status::Fail;
                let mut e = Map::new();
                e.insert("exit_code".into(), code.into());
                e.insert("message".into(), err.message().into());
                if let CliError::Parse { error, .. } = &err {
                    e.insert("offset".into(), error.offset.into());
                }
                o.diagnostics.insert("error".into(), Value::Object(e));
                let _ = writeln!(out, "{}", o.to_json());
            }
            let mut stderr = std::io::stderr().lock();
            let _ = writeln!(stderr, "error: {}", err.message());
            if let CliError::Parse { source, error, .. } = &err {
                let _ = writeln!(stderr, "{}", error.underline(source));
            }
            code
        }
    }
}
