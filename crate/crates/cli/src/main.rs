mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pzeta_core::error::Error;

use commands::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "pzeta", version, about = "p-adic local zeta functions and operators with symbol |f|^beta")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level masses, closed form and poles of Z(s, f).
    Zeta(ZetaArgs),
    /// Fundamental solution of f(D, beta) with its admissibility checks.
    Solve(SolveArgs),
    /// Green-function pairings and their expansion in 1/lambda.
    Green(GreenArgs),
    /// Runs the identity suite for a form.
    Verify(VerifyArgs),
    /// Lists the anisotropic quadratic forms.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Odd or even prime p.
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Homogeneous form in x1..xn, e.g. "x1^2 + x2^2"; defaults to the first catalog form.
    #[arg(long)]
    pub form: Option<String>,
    /// Numerator coefficients of a user zeta in t = p^-s, comma separated, lowest degree first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub zeta_num: Option<Vec<String>>,
    /// Denominator coefficients of a user zeta in t = p^-s.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub zeta_den: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Truncation depth M of the level-mass series.
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Order beta > 0, rational ("3/2") or decimal.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    /// Levels for the holomorphy check.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2", allow_hyphen_values = true)]
    pub level: Vec<i64>,
    /// Use the closed formula for elliptic quadratic forms instead of the zeta of a form.
    #[arg(long)]
    pub elliptic: bool,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    /// lambda > 0.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub lambda: String,
    /// Ball level l of the pairing with W[-l].
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub level: i64,
    /// Expansion order M.
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    /// Certified precision of the exact pairing.
    #[arg(long, default_value_t = 1e-30)]
    pub eps: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Depth to which the zeta is checked against counted masses.
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
    /// Tolerance for residuals at complex samples.
    #[arg(long, default_value_t = 1e-25)]
    pub eps: f64,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    /// Restrict to one dimension in 2..=4.
    #[arg(long)]
    pub n: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) => 1,
        Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::Homogeneity { .. }
        | Error::Undefined(_)
        | Error::Unsupported(_)
        | Error::Precondition(_) => 2,
        Error::Inadmissible(_) | Error::Pole { .. } | Error::Divergent(_) | Error::Domain(_) => 3,
        Error::Budget { .. } | Error::Precision(_) => 4,
    }
}

fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
    } else {
        print!("{}", report.text);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Zeta(a) => commands::zeta(a),
        Command::Solve(a) => commands::solve(a),
        Command::Green(a) => commands::green(a),
        Command::Verify(a) => commands::verify(a),
        Command::Catalog(a) => commands::catalog(a),
    };
    match result {
        Ok(report) => {
            emit(&report, cli.json);
            ExitCode::from(report.exit)
        }
        Err(Failure { error, json }) => {
            let code = exit_code(&error);
            if cli.json {
                let mut body = json.unwrap_or_else(|| serde_json::json!({}));
                body["error"] = serde_json::Value::String(error.to_string());
                body["exit"] = serde_json::Value::from(code);
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            } else {
                eprintln!("error: {error}");
            }
            ExitCode::from(code)
        }
    }
}
