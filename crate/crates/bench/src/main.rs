use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use mmest::experiment::{blank_row, exact_mu, measure, trial_seed, write_rows, ExperimentConfig, RunMode, RunParams};
use mmest::scaling::{write_scaling_csv, ScalingError, ScalingFamily, ScalingTarget};
use mmest::{generate, load_graph, run_parallel_instances, save_graph, scaling_study, GeneratorSpec, LoadError};
use mmest_core::estimator::Mode;
use mmest_core::Graph;

#[derive(Parser)]
#[command(name = "mmest", version, about = "Sublinear maximum matching size estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the maximum matching size of one graph.
    Estimate(EstimateArgs),
    /// Fit the probe-count growth over a range of sizes.
    Scaling(ScalingArgs),
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec such as `erdos-renyi:1000:0.008`.
    #[arg(long)]
    gen: Option<String>,
    /// bipartite, general, multiplicative, matrix, twopass or exact.
    #[arg(long, default_value = "bipartite")]
    mode: String,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Overrides the `k` derived from the epsilon.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Queries per estimated term.
    #[arg(long)]
    samples: Option<usize>,
    /// Materialize the graph and compute the case quantities exactly.
    #[arg(long)]
    exact_reference: bool,
    /// Race this many instances per trial and keep the first to finish.
    #[arg(long)]
    parallel: Option<usize>,
    /// Print the reports as JSON.
    #[arg(long)]
    json: bool,
    /// Write one CSV row per trial.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Leave wall_time_ms empty so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Write the probe counters of the last trial as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    /// `erdos-renyi[:avg]`, `random-bipartite[:avg]`, `d-regular:d`, `hard-dense:eps`, ...
    #[arg(long)]
    family: String,
    /// Comma-separated, strictly increasing, at least 4.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// An estimator mode, `sparsify`, or `constant:N`.
    #[arg(long, default_value = "bipartite")]
    target: String,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    gen: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Validation(e.to_string())
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn estimate(args: EstimateArgs) -> Result<(), Failure> {
    let mode: RunMode = args.mode.parse().map_err(invalid)?;
    if args.trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let params = RunParams {
        eps: args.epsilon,
        k: args.k,
        samples: args.samples,
        exact_reference: args.exact_reference,
    };
    let mut cfg = ExperimentConfig::new(params, args.seed);
    cfg.record_wall_time = !args.no_timing;

    let (label, spec) = match (&args.graph, &args.gen) {
        (Some(path), _) => (path.display().to_string(), None),
        (None, Some(text)) => {
            let spec: GeneratorSpec = text.parse().map_err(invalid)?;
            (spec.to_string(), Some(spec))
        }
        (None, None) => return Err(invalid("one of --graph or --gen is required")),
    };
    let file_graph = match &args.graph {
        Some(path) => Some(load_graph(path).map_err(|e| match e {
            LoadError::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
            other => invalid(format!("{}: {other}", path.display())),
        })?),
        None => None,
    };

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut last_probes = None;
    let mut first_error = None;
    for trial in 0..args.trials {
        let seed = trial_seed(args.seed, trial);
        let g: Graph = match (&file_graph, &spec) {
            (Some(g), _) => g.clone(),
            (None, Some(spec)) => generate(spec, seed).map_err(invalid)?,
            (None, None) => unreachable!(),
        };
        let (row, outcome) = match (args.parallel, mode) {
            (Some(count), RunMode::Estimator(m)) => {
                let estimator = params.estimator_config(m);
                let start = std::time::Instant::now();
                let result = run_parallel_instances(Arc::new(g.clone()), &estimator, seed, count);
                let elapsed = start.elapsed();
                let mut row = blank_row(&label, g.vertex_count(), seed, mode);
                row.exact_mu = exact_mu(&g, &cfg);
                match result {
                    Ok(report) => {
                        row.seed = report.seed;
                        row.estimate = Some(report.estimate);
                        row.list_probes = Some(report.probes.list_probes);
                        row.matrix_probes = Some(report.probes.matrix_probes);
                        row.wall_time_ms = cfg.record_wall_time.then_some(elapsed.as_secs_f64() * 1e3);
                        row.ratio = row.exact_mu.filter(|&mu| mu > 0).map(|mu| report.estimate / mu as f64);
                        last_probes = Some(report.probes.clone());
                        reports.push(serde_json::to_value(&report).expect("reports serialize"));
                    }
                    Err(e) => {
                        row.error = Some(e.to_string());
                        first_error.get_or_insert(e.to_string());
                    }
                }
                (row, None)
            }
            (Some(_), _) => return Err(invalid("--parallel applies to estimator modes only")),
            (None, _) => {
                let (row, outcome) = measure(&label, &g, mode, seed, &cfg);
                (row, Some(outcome))
            }
        };
        if let Some(outcome) = outcome {
            match outcome {
                Ok(out) => {
                    reports.push(out.to_json(mode, seed, &params));
                    last_probes = Some(out.probes);
                }
                Err(e) => {
                    first_error.get_or_insert(e.to_string());
                }
            }
        }
        rows.push(row);
    }

    if let Some(path) = &args.csv {
        write_rows(&rows, create(path)?)?;
    }
    if let (Some(path), Some(probes)) = (&args.stats, &last_probes) {
        let mut out = create(path)?;
        serde_json::to_writer(&mut out, probes).map_err(|e| Failure::Io(e.to_string()))?;
        out.flush()?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        let value = if reports.len() == 1 {
            reports.pop().unwrap()
        } else {
            serde_json::Value::Array(reports)
        };
        serde_json::to_writer_pretty(&mut out, &value).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(out)?;
    } else if args.csv.is_none() {
        for row in &rows {
            match (&row.estimate, &row.error) {
                (Some(estimate), _) => writeln!(
                    out,
                    "{} n={} mode={} seed={} estimate={estimate:.4} list_probes={} matrix_probes={}{}",
                    row.generator,
                    row.n,
                    row.mode,
                    row.seed,
                    row.list_probes.unwrap_or(0),
                    row.matrix_probes.unwrap_or(0),
                    row.exact_mu.map(|mu| format!(" exact_mu={mu}")).unwrap_or_default()
                )?,
                (None, Some(e)) => writeln!(out, "{} seed={} error: {e}", row.generator, row.seed)?,
                (None, None) => {}
            }
        }
    }
    match first_error {
        Some(e) => Err(Failure::Validation(e)),
        None => Ok(()),
    }
}

fn scaling_target(args: &ScalingArgs) -> Result<ScalingTarget, Failure> {
    if args.target == "sparsify" {
        return Ok(ScalingTarget::Sparsify);
    }
    if let Some(count) = args.target.strip_prefix("constant:") {
        return count.parse().map(ScalingTarget::ConstantProbes).map_err(invalid);
    }
    let mode: Mode = args.target.parse().map_err(invalid)?;
    let params = RunParams {
        eps: args.epsilon,
        k: args.k,
        samples: args.samples,
        exact_reference: false,
    };
    let cfg = params.estimator_config(mode);
    cfg.validate().map_err(invalid)?;
    Ok(ScalingTarget::Estimator(cfg))
}

fn scaling(args: ScalingArgs) -> Result<(), Failure> {
    let family: ScalingFamily = args.family.parse().map_err(invalid)?;
    let target = scaling_target(&args)?;
    let report = scaling_study(&family, &args.sizes, args.trials, &target, args.seed).map_err(|e| match e {
        ScalingError::Estimator(e) => invalid(e),
        other => invalid(other),
    })?;
    if let Some(path) = &args.csv {
        write_scaling_csv(&report, create(path)?)?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(out)?;
    } else {
        for p in &report.points {
            writeln!(out, "n={} median_probes={} residual={:+.4}", p.n, p.median, p.residual)?;
        }
        writeln!(out, "slope={:.4} intercept={:.4}", report.slope, report.intercept)?;
    }
    Ok(())
}

fn generate_graph(args: GenerateArgs) -> Result<(), Failure> {
    let spec: GeneratorSpec = args.gen.parse().map_err(invalid)?;
    let g = generate(&spec, args.seed).map_err(invalid)?;
    save_graph(&g, &args.out).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Scaling(args) => scaling(args),
        Command::Generate(args) => generate_graph(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Validation(message) | Failure::Io(message)) = &failure;
            eprintln!("error: {message}");
            ExitCode::from(failure.code())
        }
    }
}
