use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatleaf::catalog::{self, EXAMPLES};
use flatleaf::check::{run_checks, CheckOptions};
use flatleaf::holonomy::DEFAULT_BALL_CAP;
use flatleaf::par::Execution;
use flatleaf::{build_suspension, load_manifest, Error, Manifest};

/// Exact checks on holonomy data of flat affine manifolds and lagrangian
/// foliations.
#[derive(Parser)]
#[command(name = "flatleaf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relators, form preservation, lagrangian and invariant foliation span.
    Verify(CheckArgs),
    /// Word-ball sizes and a heuristic growth label.
    Growth(CheckArgs),
    /// Every linear part has determinant ±1.
    Unimodular(CheckArgs),
    /// Search short words for a nontrivial translation.
    Translation(CheckArgs),
    /// Whether the ℚ-span of the generator logarithms is a subalgebra.
    Rationality(CheckArgs),
    /// Quotient by square-zero ideals down to dimension 2.
    Reduce(CheckArgs),
    /// H¹ of the group with coefficients in the linear holonomy.
    Cohomology(CheckArgs),
    /// Radiance obstruction class.
    Radiance(CheckArgs),
    /// Jet-level classification of foliation germs around the leaf.
    Classify(CheckArgs),
    /// Tower square and fiber cocycle law.
    Tower(CheckArgs),
    /// Duality law on the cotangent suspension.
    Duality(CheckArgs),
    /// List built-in examples or print one as a manifest.
    Catalog(CatalogArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Manifest file (JSON).
    #[arg(long, value_name = "PATH", group = "source")]
    manifest: Option<PathBuf>,
    /// Built-in example name.
    #[arg(long, value_name = "NAME", group = "source")]
    example: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    /// Ball radius for growth.
    #[arg(long, default_value_t = 8)]
    radius: usize,
    /// Longest word searched for translations.
    #[arg(long = "max-len", default_value_t = 12)]
    max_len: usize,
    /// Jet truncation degree for classify.
    #[arg(long = "jet-degree", default_value_t = 2)]
    jet_degree: usize,
    /// Element cap for ball enumeration.
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    cap: usize,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Print this example as a manifest.
    #[arg(long, value_name = "NAME", conflicts_with = "manifest")]
    example: Option<String>,
    /// Read a manifest instead (useful with --suspend).
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// Print the cotangent suspension instead.
    #[arg(long)]
    suspend: bool,
    /// List names as JSON.
    #[arg(long)]
    json: bool,
}

fn load(source: &Source) -> Result<Manifest, Error> {
    match (&source.manifest, &source.example) {
        (Some(path), _) => load_manifest(path),
        (None, Some(name)) => catalog::example(name),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::RelatorViolation { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run_check_command(name: &str, args: &CheckArgs) -> ExitCode {
    let manifest = match load(&args.source) {
        Ok(m) => m,
        Err(e) => return exit_for(&e),
    };
    let opts = CheckOptions {
        radius: args.radius,
        max_len: args.max_len,
        jet_degree: args.jet_degree,
        cap: args.cap,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = match run_checks(&manifest, &[name], &opts) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

fn run_catalog(args: &CatalogArgs) -> ExitCode {
    let base = match (&args.manifest, &args.example) {
        (Some(path), _) => load_manifest(path),
        (None, Some(name)) => catalog::example(name),
        (None, None) if args.suspend => {
            eprintln!("error: --suspend needs --example or --manifest");
            return ExitCode::from(2);
        }
        (None, None) => {
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string(EXAMPLES).expect("names serialize")
                );
            } else {
                for name in EXAMPLES {
                    println!("{name}");
                }
            }
            return ExitCode::SUCCESS;
        }
    };
    let manifest = match base.and_then(|m| {
        if args.suspend {
            build_suspension(&m)
        } else {
            Ok(m)
        }
    }) {
        Ok(m) => m,
        Err(e) => return exit_for(&e),
    };
    println!("{}", manifest.to_json());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Verify(a) => ("verify", a),
        Command::Growth(a) => ("growth", a),
        Command::Unimodular(a) => ("unimodular", a),
        Command::Translation(a) => ("translation", a),
        Command::Rationality(a) => ("rationality", a),
        Command::Reduce(a) => ("reduce", a),
        Command::Cohomology(a) => ("cohomology", a),
        Command::Radiance(a) => ("radiance", a),
        Command::Classify(a) => ("classify", a),
        Command::Tower(a) => ("tower", a),
        Command::Duality(a) => ("duality", a),
        Command::Catalog(a) => return run_catalog(a),
    };
    run_check_command(name, args)
}
