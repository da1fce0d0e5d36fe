use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rap_bench::config::{parse_count, parse_quantity, DEFAULT_BATCHES, DEFAULT_EVENTS_PER_BATCH, DEFAULT_SWEEP_COUNTERS};
use rap_bench::workload::{batch_seeds, zipf_stream};
use rap_bench::{run_experiment, run_sweep, theory_report, Algorithm, BenchError, ExperimentConfig, Metric, Result, Workload};
use rap_core::analysis::{TheoryInputs, DEFAULT_C_CONST};
use rap_core::dway::DEFAULT_WAYS;
use rap_core::stream::{write_trace, DEFAULT_DOMAIN};

/// Frequency-estimation benchmark driver.
#[derive(Parser)]
#[command(name = "rapbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic Zipf trace, one hex flow id per line.
    Generate(GenerateArgs),
    /// Run one algorithm at one counter budget.
    Run(RunArgs),
    /// Run a grid of algorithms and counter budgets on shared batches.
    Sweep(SweepArgs),
    /// Print counter requirements for a skew, domain and k.
    Theory(TheoryArgs),
}

fn count(s: &str) -> std::result::Result<u64, String> {
    parse_count(s)
}

fn size(s: &str) -> std::result::Result<usize, String> {
    parse_count(s).and_then(|v| usize::try_from(v).map_err(|_| format!("`{s}` is too large")))
}

#[derive(Args)]
struct WorkloadArgs {
    /// Zipf skew.
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    /// Zipf domain size; accepts `2^20` or `1e6`.
    #[arg(long, value_parser = count, default_value_t = DEFAULT_DOMAIN)]
    domain: u64,
    /// Read events from a trace file instead of sampling Zipf.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_parser = size, default_value_t = DEFAULT_EVENTS_PER_BATCH)]
    events_per_batch: usize,
    #[arg(long, value_parser = size, default_value_t = DEFAULT_BATCHES)]
    batches: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// mse, topk or pr.
    #[arg(long, default_value = "mse")]
    metric: Metric,
    /// Size of the true top-k set.
    #[arg(long, value_parser = size, default_value_t = 32)]
    k: usize,
    /// Number of candidates taken from each report.
    #[arg(long, value_parser = size, default_value_t = 32)]
    m_report: usize,
    /// Ways per set for dway_rap.
    #[arg(long, value_parser = size, default_value_t = DEFAULT_WAYS)]
    ways: usize,
    /// Admission probability for rap_prime.
    #[arg(long)]
    admission_p: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl WorkloadArgs {
    fn config(&self, algorithm: Algorithm, counters: usize) -> ExperimentConfig {
        let workload = match &self.trace {
            Some(path) => Workload::Trace { path: path.clone() },
            None => Workload::Zipf {
                alpha: self.alpha,
                domain: self.domain,
            },
        };
        ExperimentConfig {
            ways: self.ways,
            admission_p: self.admission_p,
            events_per_batch: self.events_per_batch,
            batches: self.batches,
            seed: self.seed,
            metric: self.metric,
            k: self.k,
            m_report: self.m_report,
            ..ExperimentConfig::new(algorithm, counters, workload)
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, value_parser = count, default_value_t = DEFAULT_DOMAIN)]
    domain: u64,
    #[arg(long, value_parser = size, default_value_t = DEFAULT_EVENTS_PER_BATCH)]
    events: usize,
    /// Same stream as batch 0 of `run --seed` with this value.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algorithm: Algorithm,
    /// Counter budget M.
    #[arg(long, value_parser = size)]
    counters: usize,
    #[command(flatten)]
    workload: WorkloadArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', required = true)]
    algorithms: Vec<Algorithm>,
    /// Comma-separated counter budgets.
    #[arg(long, value_delimiter = ',', value_parser = size)]
    counters: Vec<usize>,
    #[command(flatten)]
    workload: WorkloadArgs,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_parser = count)]
    k: u64,
    #[arg(long)]
    alpha: f64,
    /// Domain size; may exceed u64, e.g. `2^64`.
    #[arg(long, value_parser = parse_quantity)]
    domain: f64,
    /// Constant in the RAP' counter formula.
    #[arg(long, default_value_t = DEFAULT_C_CONST)]
    c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| BenchError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| BenchError::Output {
                path: "<stdout>".to_string(),
                source,
            }),
    }
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let stream = zipf_stream(args.alpha, args.domain, batch_seeds(args.seed, 0).stream, args.events)?;
    let mut buf = Vec::with_capacity(stream.len() * 17);
    write_trace(&mut buf, &stream).expect("writing to memory cannot fail");
    emit(args.out.as_ref(), &String::from_utf8(buf).expect("hex output is ASCII"))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => generate(&args),
        Command::Run(args) => {
            let cfg = args.workload.config(args.algorithm, args.counters);
            let result = run_experiment(&cfg)?;
            emit(args.workload.out.as_ref(), &result.to_csv())
        }
        Command::Sweep(args) => {
            let counters = if args.counters.is_empty() {
                DEFAULT_SWEEP_COUNTERS.to_vec()
            } else {
                args.counters
            };
            let base = args.workload.config(args.algorithms[0], counters[0]);
            let result = run_sweep(&base, &args.algorithms, &counters)?;
            emit(args.workload.out.as_ref(), &result.to_csv())
        }
        Command::Theory(args) => {
            let inputs = TheoryInputs::new(args.k, args.alpha, args.domain).with_c(args.c);
            emit(args.out.as_ref(), &theory_report(&inputs)?.render())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rapbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
