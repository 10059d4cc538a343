//! `nkoszul`: command-line front end to `nkoszul-core`.
//!
//! Exit codes: 0 when the checked identity or certificate holds, 1 when it is
//! violated, 2 on usage, input or feasibility errors.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "nkoszul", version, about = "Exact checks for N-homogeneous algebras and their Koszul duals")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Dimensions of the graded components A_0 … A_D.
    Hilbert(DegreeArgs),
    /// Dimensions of A^!_m (through the spaces J_m); compared with the closed
    /// form for antisymmetrizer algebras.
    DualDims(DegreeArgs),
    /// Admissible-word counts against the inverted alternating binomial polynomial.
    Admissible(AdmissibleArgs),
    /// Exactness of the Koszul complex up to total degree D.
    KoszulCheck(DegreeArgs),
    /// Hilbert-series duality H_A(t)·Σ(-1)^ℓ dim A^!_{ν(ℓ)} t^{ν(ℓ)} = 1.
    DvpCheck(DegreeArgs),
    /// Koszul Master Theorem in end(A).
    KmtCheck(KmtArgs),
    /// MacMahon Master Theorem for a rational matrix.
    Mmt(MatrixArgs),
    /// N-analog of the Master Theorem for antisym(n, N).
    Nmt(MatrixArgs),
    /// Binomial identity Σ(-1)^k C(n+k-1,k) C(n,ℓ) = 0 for 1 ≤ m ≤ D.
    Eq1(Eq1Args),
    /// Summary of a presentation and its dual.
    Info(InfoArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AlgebraArgs {
    /// poly, antisym, qspace, free or file:<path>.
    #[arg(long, default_value = "poly")]
    pub algebra: String,
    /// Number of generators.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Relation degree (antisym and free).
    #[arg(long = "N", default_value_t = 2)]
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Numeric q for qspace (all q_ij equal); generic parameters when absent.
    #[arg(long)]
    pub q: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DegreeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub algebra: AlgebraArgs,
    /// Truncation degree D.
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KmtArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub degree: DegreeArgs,
    /// Skip the n^{2D} size guardrail.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AdmissibleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: usize,
    #[arg(long, default_value_t = 8)]
    pub max_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Identity,
    Zero,
    Ones,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MatrixArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Relation degree (nmt only).
    #[arg(long = "N", default_value_t = 3)]
    #[serde(rename = "N")]
    pub big_n: usize,
    /// JSON matrix file {"n":…, "entries":[["p/q",…],…]}.
    #[arg(long, conflicts_with_all = ["matrix_inline", "matrix_kind", "random_seed"])]
    pub matrix: Option<String>,
    /// The same JSON given directly on the command line.
    #[arg(long, conflicts_with_all = ["matrix_kind", "random_seed"])]
    pub matrix_inline: Option<String>,
    #[arg(long, value_enum, conflicts_with = "random_seed")]
    pub matrix_kind: Option<MatrixKind>,
    /// Seed for a random rational matrix (entries p/q, |p| ≤ 9, 1 ≤ q ≤ 9).
    #[arg(long)]
    pub random_seed: Option<u64>,
    #[arg(long, default_value_t = 6)]
    pub max_degree: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Eq1Args {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 10)]
    pub max_degree: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InfoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub algebra: AlgebraArgs,
    /// Also print the presentation and its dual as JSON (rational algebras).
    #[arg(long)]
    pub presentation: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let written = match cli.format {
                Format::Json => {
                    let report = commands::envelope(&cli.command, &outcome);
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))
                }
                Format::Text => outcome.text.iter().try_for_each(|line| writeln!(out, "{line}")),
            };
            // a closed pipe is not an error of the check
            if let Err(e) = written {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            match outcome.holds {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
