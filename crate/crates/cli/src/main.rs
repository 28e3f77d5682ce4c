//! Command-line surface of the phaselimit toolkit: paradigm cost tables,
//! ansatz and lattice costs, simplex-well energies, risk bounds and seeded
//! simulations, emitted as CSV or JSON.

// `!(x >= c)` rejects NaN inputs, which `x < c` would accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use output::Dataset;
use phaselimit::Error;
use std::io::Write;
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "phaselimit",
    version,
    about = "Estimation-cost bounds for multiple-phase interferometry"
)]
struct Cli {
    /// Output file; '-' writes to stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Paradigm cost bounds at given resources, per registered strategy.
    Bounds {
        #[arg(long)]
        p: u32,
        /// Total photon budget N.
        #[arg(long = "N")]
        n_total: u64,
        /// Photons per shot n (defaults to N).
        #[arg(long = "n")]
        n_shot: Option<u64>,
        /// Shot count k.
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Evaluate a single strategy by its registry name.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Continuum ansatz norm, energy and cost (reference, optimal, custom).
    Ansatz {
        #[arg(long)]
        p: u32,
        #[arg(long = "N", default_value_t = 1)]
        n_total: u64,
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
    /// Exact lattice cost of the discretized ansatz.
    Discrete {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n_total: u64,
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
    /// Optimal separate-strategy lattice cost (needs p | N).
    Separate {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n_total: u64,
    },
    /// Joint-over-separate advantage ratio.
    Advantage {
        #[arg(long)]
        p: u32,
        /// Total photon budget N (alternative to --ratio).
        #[arg(long = "N", conflicts_with = "ratio")]
        n_total: Option<u64>,
        /// Per-phase budget N/p; sets N = ratio * p.
        #[arg(long)]
        ratio: Option<u64>,
    },
    /// Dirichlet ground energies on the simplex with Richardson extrapolation.
    Simplex {
        #[arg(long)]
        p: u32,
        /// Comma-separated grid resolutions.
        #[arg(long, value_delimiter = ',', default_values_t = [16u32, 32, 64])]
        resolutions: Vec<u32>,
    },
    /// Full paradigm cost table.
    QfiTable {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n_total: u64,
        #[arg(long = "n")]
        n_shot: u64,
        #[arg(long)]
        k: u64,
    },
    /// Kaiser-prior normalization, tail risks and region bounds.
    Risk {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        delta: f64,
        /// Coarse-stage photon budget per phase.
        #[arg(long = "N0")]
        n0: u64,
        /// Main-stage photon budget; enables the finite-region bound.
        #[arg(long = "N")]
        n_total: Option<u64>,
    },
    /// Positivity-margin scan on a log grid.
    ScanMargin {
        #[arg(long, default_value_t = 2.0)]
        ymin: f64,
        #[arg(long, default_value_t = 10_000.0)]
        ymax: f64,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long, default_value_t = 1.89)]
        c: f64,
    },
    /// Seeded photon-number sampling against the closed forms.
    PhotonStats {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n_total: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Sampler seed (default: PHASELIMIT_SEED or 42).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Seeded covariant-outcome sampling for the optimal single-phase state.
    Simulate {
        /// Photon number M of the sine state.
        #[arg(long)]
        photons: usize,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Also evaluate the border-clamped estimator with this region width.
        #[arg(long)]
        clamp: Option<f64>,
        /// Quadrature subintervals for the clamped estimator.
        #[arg(long, default_value_t = 8192)]
        grid: usize,
    },
    /// Emit the dataset behind a named artifact.
    Reproduce {
        #[command(subcommand)]
        figure: Figure,
    },
}

#[derive(Subcommand)]
enum Figure {
    /// Paradigm table at (p, N, n, k), default (10, 1000, 100, 10).
    #[command(name = "table-1")]
    Table1 {
        #[arg(long, default_value_t = 10)]
        p: u32,
        #[arg(long = "N", default_value_t = 1000)]
        n_total: u64,
        #[arg(long = "n", default_value_t = 100)]
        n_shot: u64,
        #[arg(long, default_value_t = 10)]
        k: u64,
    },
    /// Cost-vs-p comparison: bound, reference ansatz, optimal ansatz,
    /// separate asymptote.
    FigComp {
        #[arg(long, default_value_t = 30)]
        pmax: u32,
    },
    /// Airy profile vs photon marginal on a mu grid for p in {10, 50, 250}.
    FigFun {
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
    /// Lattice-to-continuum cost convergence at N/p in {4, 8, 16}.
    FigAdvantageLeft {
        #[arg(long, default_value_t = 8)]
        pmax: u32,
    },
    /// Joint-over-separate advantage at N/p in {4, 8, 16}.
    FigAdvantageRight {
        #[arg(long, default_value_t = 8)]
        pmax: u32,
    },
}

fn seed_or_default(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("PHASELIMIT_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_SEED)
}

fn run(command: Command) -> Result<Dataset, Error> {
    match command {
        Command::Bounds {
            p,
            n_total,
            n_shot,
            k,
            strategy,
        } => commands::bounds(p, n_total, n_shot.unwrap_or(n_total), k, strategy.as_deref()),
        Command::Ansatz {
            p,
            n_total,
            alpha,
            beta,
        } => commands::ansatz(p, n_total, alpha, beta),
        Command::Discrete {
            p,
            n_total,
            alpha,
            beta,
        } => commands::discrete(p, n_total, alpha, beta),
        Command::Separate { p, n_total } => commands::separate(p, n_total),
        Command::Advantage { p, n_total, ratio } => {
            let n = match (n_total, ratio) {
                (Some(n), None) => n,
                (None, Some(r)) => r * p as u64,
                _ => {
                    return Err(Error::Domain(
                        "advantage needs exactly one of --N or --ratio".into(),
                    ))
                }
            };
            commands::advantage(p, n)
        }
        Command::Simplex { p, resolutions } => commands::simplex(p, &resolutions),
        Command::QfiTable {
            p,
            n_total,
            n_shot,
            k,
        } => commands::qfi_table(p, n_total, n_shot, k),
        Command::Risk {
            p,
            delta,
            n0,
            n_total,
        } => commands::risk(p, delta, n0, n_total),
        Command::ScanMargin {
            ymin,
            ymax,
            points,
            c,
        } => commands::scan_margin(ymin, ymax, points, c),
        Command::PhotonStats {
            p,
            n_total,
            samples,
            seed,
        } => commands::photon_stats(p, n_total, samples, seed_or_default(seed)),
        Command::Simulate {
            photons,
            theta,
            samples,
            seed,
            clamp,
            grid,
        } => commands::simulate(photons, theta, samples, seed_or_default(seed), clamp, grid),
        Command::Reproduce { figure } => match figure {
            Figure::Table1 {
                p,
                n_total,
                n_shot,
                k,
            } => commands::reproduce_table1(p, n_total, n_shot, k),
            Figure::FigComp { pmax } => commands::reproduce_fig_comp(pmax),
            Figure::FigFun { grid } => commands::reproduce_fig_fun(grid),
            Figure::FigAdvantageLeft { pmax } => commands::reproduce_fig_advantage_left(pmax),
            Figure::FigAdvantageRight { pmax } => commands::reproduce_fig_advantage_right(pmax),
        },
    }
}

fn write_dataset(dataset: &Dataset, output: &str, format: Format) -> std::io::Result<()> {
    let body = match format {
        Format::Csv => dataset.to_csv(),
        Format::Json => dataset.to_json(),
    };
    if output == "-" {
        std::io::stdout().write_all(body.as_bytes())
    } else {
        std::fs::write(output, body)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(dataset) => match write_dataset(&dataset, &cli.output, cli.format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(1)
            }
        },
        Err(e @ Error::Domain(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ Error::NonConvergence(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
