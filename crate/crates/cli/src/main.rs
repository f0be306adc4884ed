use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coarse_lip::commands::{self, parse_ext};
use coarse_lip::{parallel, CliError, RunConfig};
use coarse_lip_core::scaling::Family;
use coarse_lip_core::ExtReal;

#[derive(Parser)]
#[command(name = "coarse-lip", version, about = "Lipschitz lattices and rough isometries of finite metric spaces")]
struct Cli {
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random functions sampled per space.
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,
    /// Largest point count for exhaustive rough-distance search.
    #[arg(long, global = true, default_value_t = 5)]
    budget: usize,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Path,
    TwoPath,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space file against the metric axioms.
    Validate { space: PathBuf },
    /// List the finite-distance components.
    Components { space: PathBuf },
    /// Cut off all distances at a radius.
    Cutoff {
        space: PathBuf,
        #[arg(value_parser = parse_ext)]
        r: ExtReal,
    },
    /// Multiply all distances by a positive factor.
    Scale { space: PathBuf, factor: f64 },
    /// Supremum distance between two cones.
    LambdaDist {
        space: PathBuf,
        x: String,
        #[arg(value_parser = parse_ext)]
        r: ExtReal,
        y: String,
        #[arg(value_parser = parse_ext)]
        s: ExtReal,
    },
    /// Lipschitz envelope of a (1, epsilon)-Lipschitz function.
    Lipschitzise {
        function: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Write a function as a join of cones.
    LambdaDecompose { function: PathBuf },
    /// Closest single cone to a function.
    NearestLambda { function: PathBuf },
    /// Exact rough distance by exhaustive search.
    RoughDist { x: PathBuf, y: PathBuf },
    /// Oracle descriptor for the lift of a map pair.
    Lift { x: PathBuf, y: PathBuf, pair: PathBuf },
    /// Sampled ml-isomorphism defects of an oracle.
    MlCheck { oracle: PathBuf },
    /// Recover a rough isometry from an oracle.
    Reconstruct { oracle: PathBuf },
    /// Reconstruct and measure every bound of the reconstruction.
    VerifyThm2 { oracle: PathBuf },
    /// Lifted ml defects along a family of grids.
    ScalingExperiment {
        #[arg(long, value_enum, default_value_t = FamilyArg::Path)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        reference: usize,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<commands::Output, CliError> {
    use Command::*;
    match &cli.command {
        Validate { space } => commands::validate(space, cfg),
        Components { space } => commands::components(space, cfg),
        Cutoff { space, r } => commands::cutoff(space, *r, cfg),
        Scale { space, factor } => commands::scale(space, *factor, cfg),
        LambdaDist { space, x, r, y, s } => commands::lambda_dist(space, x, *r, y, *s, cfg),
        Lipschitzise { function, epsilon } => commands::lipschitzise_cmd(function, *epsilon, cfg),
        LambdaDecompose { function } => commands::decompose(function, cfg),
        NearestLambda { function } => commands::nearest(function, cfg),
        RoughDist { x, y } => commands::rough_dist(x, y, cfg),
        Lift { x, y, pair } => commands::lift_cmd(x, y, pair, cfg),
        MlCheck { oracle } => commands::ml_check(oracle, cfg),
        Reconstruct { oracle } => commands::reconstruct_cmd(oracle, cfg),
        VerifyThm2 { oracle } => commands::verify_thm2(oracle, cfg),
        ScalingExperiment { family, levels, reference } => {
            let family = match family {
                FamilyArg::Path => Family::Path,
                FamilyArg::TwoPath => Family::TwoPath,
            };
            commands::scaling_experiment(family, levels.clone(), *reference, cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        seed: cli.seed,
        samples: cli.samples,
        budget: cli.budget,
        tol: cli.tol,
        threads: parallel::workers(),
    };
    match run(&cli, &cfg) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let body = serde_json::json!({ "error": e.report() });
                    eprintln!("{}", serde_json::to_string_pretty(&body).expect("error reports serialize"));
                }
                Format::Text => {
                    eprintln!("error: {e}");
                    for v in e.report().violations {
                        eprintln!("  {v}");
                    }
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
