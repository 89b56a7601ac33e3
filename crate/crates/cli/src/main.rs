use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qmetapath::engine::QMetaConfig;
use qmetapath::harness::{
    emit_results, emit_sweep, load_config, run_benchmark, run_sweep, ExperimentConfig,
    MethodSummary, SweepSpec,
};

/// Largest layout run without `--paper-scale`.
const DESK_QUBIT_LIMIT: usize = 16;

#[derive(Parser)]
#[command(name = "qmetapath", version, about = "RIS phase optimization benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark (or a sweep) and write CSV/JSON results.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    episodes: Option<usize>,
    /// Comma-separated baselines (random, gradient, ao), or `none`.
    #[arg(long)]
    baselines: Option<String>,
    /// `csi_error=v1,v2,...` or `n_elements=v1,v2,...`
    #[arg(long)]
    sweep: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quantize_bits: Option<u32>,
    /// Use the full 24-qubit layout (L=6, P=8, k=3).
    #[arg(long)]
    paper_scale: bool,
}

fn apply_overrides(cfg: &mut ExperimentConfig, args: &RunArgs) -> Result<()> {
    if let Some(s) = args.seeds {
        cfg.run.seeds = s;
    }
    if let Some(e) = args.episodes {
        cfg.run.episodes = e;
    }
    if let Some(list) = &args.baselines {
        cfg.baselines.enabled = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty() && *s != "none")
            .map(String::from)
            .collect();
    }
    if let Some(s) = &args.sweep {
        cfg.run.sweep = Some(s.parse::<SweepSpec>()?);
    }
    if let Some(out) = &args.out {
        cfg.run.output = out.clone();
    }
    if let Some(b) = args.quantize_bits {
        cfg.qmetapath.quantize_bits = Some(b);
    }
    if args.paper_scale {
        let full = QMetaConfig::default();
        cfg.qmetapath.layers = full.layers;
        cfg.qmetapath.paths = full.paths;
        cfg.qmetapath.k_top = full.k_top;
    }
    cfg.validate()?;
    let qubits = cfg.qmetapath.total_qubits();
    if qubits > DESK_QUBIT_LIMIT && !args.paper_scale {
        bail!(
            "layout needs {qubits} qubits (limit {DESK_QUBIT_LIMIT}); pass --paper-scale to run it \
             or reduce [qmetapath] layers/paths"
        );
    }
    Ok(())
}

fn print_summaries(summaries: &[MethodSummary]) {
    println!(
        "{:<10} {:>8} {:>8} {:>10} {:>12} {:>6}",
        "method", "se", "std", "objective", "latency_ms", "conv"
    );
    for s in summaries {
        let conv = s
            .convergence_episode
            .map_or_else(|| "-".to_string(), |e| e.to_string());
        println!(
            "{:<10} {:>8.3} {:>8.3} {:>10.3} {:>12.3} {:>6}",
            s.method, s.mean_se, s.std_se, s.mean_objective, s.mean_latency_ms, conv
        );
    }
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    apply_overrides(&mut cfg, &args)?;
    let out = cfg.run.output.clone();
    match cfg.run.sweep.clone() {
        Some(sweep) => {
            let rows = run_sweep(&cfg, &sweep)?;
            for row in &rows {
                println!("{:?} = {}", row.axis, row.value);
                print_summaries(&row.summaries);
            }
            let json = emit_sweep(&rows, &out)?;
            println!("wrote {}", json.display());
        }
        None => {
            let bench = run_benchmark(&cfg)?;
            print_summaries(&bench.summaries);
            let files = emit_results(&bench.records, &bench.summaries, &out)?;
            println!("wrote {} and {}", files.csv.display(), files.json.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args).context("run failed"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
