mod commands;
mod demo;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Debug, Parser)]
#[command(name = "hsforge", version, about = "Exact computations with multi-variate Hasse-Schmidt derivations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A co-ideal given as a box or a total-degree simplex.
#[derive(Debug, Args)]
pub struct Shape {
    /// Box corner, comma separated (e.g. `2,2`).
    #[arg(long = "box", value_delimiter = ',', conflicts_with = "total_degree")]
    pub corner: Option<Vec<u32>>,
    /// Total-degree bound `r`; needs `--q`.
    #[arg(long)]
    pub total_degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Characteristic; 0 means the rationals.
    #[arg(long)]
    pub p: u64,
    /// Exponents of `k[x]/(x_1^e_1, ..., x_n^e_n)`, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DemoName {
    /// Decomposition of a generic derivation over box((2,2)).
    #[value(name = "example-3-3")]
    Example33,
    /// The commutator of two length-2 derivations.
    #[value(name = "intro-length-2")]
    IntroLength2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the primitive rays of a co-ideal in ascending order.
    RayOrder {
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        shape: Shape,
    },
    /// Generate a random certified HS-derivation.
    Generate {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        shape: Shape,
        /// Uni-variate length; shorthand for `--box M`.
        #[arg(long, conflicts_with_all = ["corner", "total_degree"])]
        m: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force `D_α = 0` for `0 < |α| < N`.
        #[arg(long, default_value_t = 1)]
        vanish_below: u32,
        /// Also write the bare derivation document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a derivation into uni-variate factors along its rays.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Report every step of the certificate separately.
        #[arg(long)]
        certify: bool,
        /// Also emit and check the external-product form.
        #[arg(long)]
        emit_boxtimes: bool,
    },
    /// Integrate the bracket of the first components of two derivations.
    Bracket {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        e: PathBuf,
    },
    /// Extend the p-th power of a derivation of length p^(a+1) - 1.
    PPower {
        #[arg(long)]
        d: PathBuf,
    },
    /// Search for a length-m integral of a derivation.
    Integrate {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Re-check the Leibniz rule of a series.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide whether an operator has order at most `bound`.
    Order {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        bound: u32,
    },
    /// Order of `[D_m, E_n] - D_(m-1) E_(n-1) [D_1, E_1]`.
    Lemma44 {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        e: PathBuf,
    },
    /// Worked examples with every closed form checked.
    Demo {
        #[arg(long)]
        name: DemoName,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "3,3")]
        exponents: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    match cli.command {
        Command::RayOrder { q, shape } => commands::ray_order(q, &shape),
        Command::Generate { algebra, q, shape, m, seed, vanish_below, out } => {
            commands::generate(&algebra, q, &shape, m, seed, vanish_below, out.as_deref())
        }
        Command::Decompose { input, certify, emit_boxtimes } => commands::decompose(&input, certify, emit_boxtimes),
        Command::Bracket { d, e } => commands::bracket(&d, &e),
        Command::PPower { d } => commands::p_power(&d),
        Command::Integrate { delta, m } => commands::integrate(&delta, m),
        Command::Verify { input } => commands::verify(&input),
        Command::Order { input, bound } => commands::order(&input, bound),
        Command::Lemma44 { d, e } => commands::lemma44(&d, &e),
        Command::Demo { name, p, exponents, seed } => demo::run(name, p, &exponents, seed),
    }
}

/// Failed certificates exit 1, anything else that goes wrong exits 2.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<hsforge::Error>() {
        Some(hsforge::Error::Leibniz { .. } | hsforge::Error::Certificate(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let written = serde_json::to_string_pretty(&report)
                .map_err(io::Error::from)
                .and_then(|text| writeln!(io::stdout().lock(), "{text}"));
            if let Err(e) = written {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            eprint!("{}", report.summary());
            if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
