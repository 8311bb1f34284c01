//! Command-line front end: run experiments, evaluate bounds, tabulate the
//! bound comparison and run the lemma cross-checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use tinf_core::bounds::{alpha_star, theorem1_bounds, theorem2_bounds, theorem3_bounds, BoundInputs};
use tinf_core::harness::{
    regime_table, run_experiment, verify_lemmas, verify_sqrt_condition, write_regret_csv,
    write_table_csv, write_weights_csv, ExperimentConfig, TableGrid,
};
use tinf_core::{Error, Result};

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "tinf", version, about = "Tsallis-INF simulation and regret-bound verification")]
struct Cli {
    /// Overrides the master seed (run) or the suite seed (verify-lemmas).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for seed-parallel runs; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-seed experiment and write the regret and weights CSVs.
    Run { config: PathBuf },
    /// Evaluate all bounds for a JSON parameter set (file path or inline JSON).
    Bounds { params: String },
    /// Tabulate original against refined bounds over a grid (JSON file).
    Table { grid: PathBuf },
    /// Cross-check the closed forms against numerical oracles.
    VerifyLemmas {
        /// Instances per suite; defaults to 500, 100, 100 and 50.
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        // Output piped into a closed reader, e.g. `tinf table grid.json | head`.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_failure() { EXIT_SOLVER } else { EXIT_CONFIG })
        }
    }
}

fn is_broken_pipe(e: &Error) -> bool {
    let kind = match e {
        Error::Io(e) => Some(e.kind()),
        Error::Json(e) => e.io_error_kind(),
        Error::Csv(e) => match e.kind() {
            csv::ErrorKind::Io(e) => Some(e.kind()),
            _ => None,
        },
        _ => None,
    };
    kind == Some(io::ErrorKind::BrokenPipe)
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let out_dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    match &cli.command {
        Command::Run { config } => run(config, cli.seed, &out_dir),
        Command::Bounds { params } => bounds(params),
        Command::Table { grid } => table(grid, cli.out_dir.as_deref()),
        Command::VerifyLemmas { trials } => lemmas(*trials, cli.seed.unwrap_or(0)),
    }
}

fn create(dir: &Path, name: &Path) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn run(config_path: &Path, seed: Option<u64>, out_dir: &Path) -> Result<ExitCode> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    let start = Instant::now();
    let result = run_experiment(&config)?;
    let elapsed = start.elapsed();
    write_regret_csv(&result, create(out_dir, &config.output.regret_csv)?)?;
    write_weights_csv(&result, config.weights_stride, create(out_dir, &config.output.weights_csv)?)?;

    let d = BoundInputs::tsallis_d(result.num_arms, result.horizon);
    let check = verify_sqrt_condition(&result, BoundInputs::TSALLIS_B, d)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{}: K={} T={} seeds={} in {:.2}s",
        result.regime,
        result.num_arms,
        result.horizon,
        result.seeds.len(),
        elapsed.as_secs_f64()
    )?;
    writeln!(
        out,
        "mean pseudo-regret at T: {:.3} (stderr {:.3})",
        result.mean_final_regret, result.stderr_final_regret
    )?;
    writeln!(
        out,
        "regret on observed losses at T: {:.3} (stderr {:.3})",
        result.mean_final_observed_regret, result.stderr_final_observed_regret
    )?;
    writeln!(
        out,
        "square-root condition: regret {:.3} vs {:.3} ({}), refined {:.3} ({})",
        check.regret,
        check.rhs,
        if check.holds { "holds" } else { "violated" },
        check.rhs_refined,
        if check.holds_refined { "holds" } else { "violated" }
    )?;
    writeln!(
        out,
        "wrote {} and {}",
        out_dir.join(&config.output.regret_csv).display(),
        out_dir.join(&config.output.weights_csv).display()
    )?;
    Ok(ExitCode::SUCCESS)
}

fn bounds(params: &str) -> Result<ExitCode> {
    let text = if params.trim_start().starts_with('{') {
        params.to_string()
    } else {
        std::fs::read_to_string(params)
            .map_err(|e| Error::Config(format!("cannot read {params}: {e}")))?
    };
    let inputs: BoundInputs = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("invalid bound parameters: {e}")))?;
    inputs.validate()?;
    let trade_off = match &inputs.gaps {
        Some(g) if g.unique_best() => {
            match alpha_star(g.inverse_gap_sum(), inputs.corruption, inputs.arms, inputs.horizon, inputs.b) {
                Ok((_, diagnostics)) => json!(diagnostics.with_delta_min(g.delta_min())),
                Err(e) => json!({ "unavailable": e.to_string() }),
            }
        }
        _ => json!({ "unavailable": "needs a gap profile with a unique best arm" }),
    };
    let report = json!({
        "inputs": inputs,
        "original": theorem1_bounds(&inputs),
        "refined": theorem2_bounds(&inputs),
        "sqrt_condition": theorem3_bounds(&inputs),
        "trade_off": trade_off,
    });
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(ExitCode::SUCCESS)
}

fn table(grid_path: &Path, out_dir: Option<&Path>) -> Result<ExitCode> {
    let text = std::fs::read_to_string(grid_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", grid_path.display())))?;
    let rows = regime_table(&TableGrid::from_json(&text)?)?;
    write_table_csv(&rows, io::stdout().lock())?;
    if let Some(dir) = out_dir {
        write_table_csv(&rows, create(dir, Path::new("table.csv"))?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn lemmas(trials: Option<usize>, seed: u64) -> Result<ExitCode> {
    let start = Instant::now();
    let reports = verify_lemmas(trials, seed)?;
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(
            out,
            "{}: {} ({} trials, {} failures, worst {:e}, tolerance {:e})",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.trials,
            r.failures,
            r.worst,
            r.tolerance
        )?;
    }
    writeln!(out, "elapsed {:.2}s", start.elapsed().as_secs_f64())?;
    Ok(if reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    })
}
