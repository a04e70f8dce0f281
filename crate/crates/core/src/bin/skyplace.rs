//! Benchmark CLI: runs one experiment described by a JSON config file and
//! writes CSV/SVG artifacts to the output directory.
//!
//! Exit codes: 0 success, 2 config error, 3 infeasible experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skyplace::bench::{self, BenchConfig};
use skyplace::error::Error;

#[derive(Parser)]
#[command(name = "skyplace", version, about = "Aerial base station placement benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file mirroring BenchConfig.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV and SVG artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the generator seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel experiments (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// 1D road sweep: rates vs ABS position and height.
    Toy1d(RunArgs),
    /// K-means clustering of a 2D GT set.
    Clusters(RunArgs),
    /// Minimum-ABS-count benchmark over seeded urban scenarios.
    Compare(RunArgs),
    /// Adaptive tracking of moving GTs.
    Adaptive(RunArgs),
    /// Regenerate the calibrated toy-example config (maintenance helper).
    #[command(hide = true)]
    Calibrate {
        /// Where to write the calibrated config.
        #[arg(long, default_value = "configs/fig2.json")]
        out: PathBuf,
    },
}

fn expect_variant(cfg: &BenchConfig, want: &str) -> Result<(), Error> {
    let got = match cfg {
        BenchConfig::Toy1d(_) => "toy1d",
        BenchConfig::Clusters(_) => "clusters",
        BenchConfig::Compare(_) => "compare",
        BenchConfig::Adaptive(_) => "adaptive",
    };
    if got != want {
        return Err(Error::Config(format!("config is for experiment '{got}', expected '{want}'")));
    }
    Ok(())
}

fn run(args: &RunArgs, want: &str) -> Result<(), Error> {
    if args.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let cfg = bench::load_bench_config(&args.config)?;
    expect_variant(&cfg, want)?;
    let base_dir = args.config.parent().unwrap_or_else(|| std::path::Path::new("."));
    bench::run(&cfg, base_dir, &args.out, args.seed)
}

fn calibrate(out: &PathBuf) -> Result<(), Error> {
    let radio = bench::calibrate_fig2()?;
    let cfg = bench::fig2_bench_config(radio);
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let text = serde_json::to_string_pretty(&cfg).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(out, text + "\n")?;
    println!("calibrated tx power: {} dBm -> {}", radio.tx_power_dbm, out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Toy1d(a) => run(a, "toy1d"),
        Command::Clusters(a) => run(a, "clusters"),
        Command::Compare(a) => run(a, "compare"),
        Command::Adaptive(a) => run(a, "adaptive"),
        Command::Calibrate { out } => calibrate(out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse { .. } | Error::Json(_) | Error::InvalidArgument(_) => {
                    ExitCode::from(2)
                }
                Error::Infeasible { .. }
                | Error::UncoverableGts(_)
                | Error::MinRateUnachievable { .. }
                | Error::EmptyFlyGrid { .. } => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
