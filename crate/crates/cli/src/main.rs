//! `subriemann`: command-line front end. Every subcommand prints one JSON
//! report (or a flattened text rendering) on standard output.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 bad input or
//! usage, 3 numeric failure.

mod commands;
mod field;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use subriemann::carre::FdScheme;
use subriemann::catalog::RandomFamily;
use subriemann::wagner::Alternation;
use subriemann::DEFAULT_TOL;

use commands::{CatalogArgs, CliError, Ctx, GammaArgs, GeodesicArgs, Outcome};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "subriemann", version, about = "Invariants of left-invariant sub-Riemannian structures")]
struct Cli {
    /// Catalog JSON file describing one structure.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Built-in structure id (see `catalog`).
    #[arg(long, global = true, value_name = "ID")]
    builtin: Option<String>,
    /// Zero tolerance for float mode; exact mode compares exactly.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Use floating point even when exact arithmetic is possible.
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlternationArg {
    Difference,
    Half,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    NilpotentCond3,
    ChangeOfBasis,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural checks plus the entry's recorded expected values.
    Validate,
    /// Sectional, Ricci and scalar curvature of the distribution.
    Curvature {
        /// Two 1-based frame indices spanning a horizontal plane.
        #[arg(long, value_delimiter = ',', value_name = "A,B")]
        plane: Option<Vec<usize>>,
    },
    /// Flag decomposition, Schouten tensor and the Wagner recursion.
    Wagner {
        #[arg(long, value_enum, default_value_t = AlternationArg::Difference)]
        alternation: AlternationArg,
    },
    /// Which rigging conditions the structure satisfies.
    Rigging,
    /// Contact form and Reeb field of a corank-one distribution.
    Contact,
    /// Whether a 3-dimensional algebra admits a bracket-generating plane.
    #[command(name = "classify3d")]
    Classify3d,
    /// Integrates the normal geodesic with initial covector xi.
    Geodesic {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        xi: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        /// Control without the unit-speed normalization.
        #[arg(long)]
        raw: bool,
        /// Writes one JSON line per step: t, g (row-major), xi, H.
        #[arg(long, value_name = "PATH")]
        trajectory: Option<PathBuf>,
        /// Step sizes for an error-order fit.
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 0..,
            default_missing_value = "0.2,0.1,0.05",
            value_name = "H1,H2,.."
        )]
        convergence: Option<Vec<f64>>,
    },
    /// Covectors annihilating Ad(exp(t u)) D at the sampled times.
    Abnormal {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        times: Option<Vec<f64>>,
    },
    /// Carre du champ operators of fields given in the entries g11, g12, ..
    /// of the matrix model.
    Gamma {
        #[arg(long)]
        field: String,
        #[arg(long)]
        field2: Option<String>,
        /// Algebra coordinates; the base point is exp(point).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Option<Vec<f64>>,
        #[arg(long, default_value_t = FdScheme::default().h1)]
        h1: f64,
        #[arg(long, default_value_t = FdScheme::default().outer)]
        outer: f64,
        /// Curvature-dimension probe parameters.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "RHO1,RHO2,KAPPA,R,NU")]
        cd: Option<Vec<f64>>,
    },
    /// Lists built-ins, dumps or saves one entry, or sweeps many.
    Catalog {
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Curvature cross-checks over every built-in.
        #[arg(long, conflicts_with = "random")]
        sweep: bool,
        /// Curvature cross-checks over N seeded random structures.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, value_enum, default_value_t = FamilyArg::NilpotentCond3)]
        family: FamilyArg,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn plane_arg(plane: Option<Vec<usize>>) -> Result<Option<(usize, usize)>, CliError> {
    match plane.as_deref() {
        None => Ok(None),
        Some(&[a, b]) => Ok(Some((a, b))),
        Some(other) => Err(CliError::Input(format!("--plane needs two indices, got {}", other.len()))),
    }
}

fn dispatch(cli: Cli, ctx: &Ctx) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate => commands::validate(ctx),
        Command::Curvature { plane } => commands::curvature(ctx, plane_arg(plane)?),
        Command::Wagner { alternation } => commands::wagner_cmd(
            ctx,
            match alternation {
                AlternationArg::Difference => Alternation::Difference,
                AlternationArg::Half => Alternation::Half,
            },
        ),
        Command::Rigging => commands::rigging(ctx),
        Command::Contact => commands::contact(ctx),
        Command::Classify3d => commands::classify3d(ctx),
        Command::Geodesic { xi, time, step, raw, trajectory, convergence } => commands::geodesic(
            ctx,
            &GeodesicArgs { xi, time, step, raw, trajectory, convergence },
        ),
        Command::Abnormal { u, times } => commands::abnormal(ctx, &u, times.as_deref()),
        Command::Gamma { field, field2, point, h1, outer, cd } => commands::gamma(
            ctx,
            &GammaArgs { field, field2, point, scheme: FdScheme { h1, outer }, cd },
        ),
        Command::Catalog { output, sweep, random, family, jobs } => commands::catalog_cmd(
            ctx,
            &CatalogArgs {
                output,
                sweep,
                random,
                family: match family {
                    FamilyArg::NilpotentCond3 => RandomFamily::NilpotentCond3,
                    FamilyArg::ChangeOfBasis => RandomFamily::ChangeOfBasis,
                },
                jobs,
            },
        ),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Curvature { .. } => "curvature",
        Command::Wagner { .. } => "wagner",
        Command::Rigging => "rigging",
        Command::Contact => "contact",
        Command::Classify3d => "classify3d",
        Command::Geodesic { .. } => "geodesic",
        Command::Abnormal { .. } => "abnormal",
        Command::Gamma { .. } => "gamma",
        Command::Catalog { .. } => "catalog",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        input: cli.input.clone(),
        builtin: cli.builtin.clone(),
        tol: cli.tol,
        seed: cli.seed,
        float: cli.float,
    };
    if !(ctx.tol >= 0.0 && ctx.tol.is_finite()) {
        eprintln!("error: --tol must be a finite non-negative number");
        return ExitCode::from(2);
    }
    let text = cli.format == Format::Text;
    let name = command_name(&cli.command);
    match dispatch(cli, &ctx) {
        Ok(out) => {
            let report = Report::new(name, &out.digest_source, out.results, out.diagnostics);
            let mut out_stream = std::io::stdout().lock();
            if let Err(e) = writeln!(out_stream, "{}", report.render(text)) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
