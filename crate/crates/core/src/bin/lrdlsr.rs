use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use lrdlsr::data::{load_dataset, normalize_columns, save_dataset};
use lrdlsr::eval::{
    fit_model, generate, grid_search, run_experiment, ExperimentConfig, SavedModel, SynthSpec,
};
use lrdlsr::lrdlsr::Hyperparams;
use lrdlsr::models::{Method, OneHotLabels};
use lrdlsr::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lrdlsr", version, about = "Relaxed-target least squares regression classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one model on a whole dataset.
    Fit(FitArgs),
    /// Repeated random-split evaluation with mean ± std accuracy.
    Eval(EvalArgs),
    /// Accuracy surface over an (alpha, beta) grid.
    Grid(GridArgs),
    /// Write a synthetic Gaussian-cluster dataset.
    GenSynth(SynthArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "lrdlsr", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = Hyperparams::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = Hyperparams::default().beta)]
    beta: f64,
    #[arg(long, default_value_t = Hyperparams::default().gamma)]
    gamma: f64,
    #[arg(long, default_value_t = Hyperparams::default().lambda)]
    lambda: f64,
    #[arg(long, default_value_t = Hyperparams::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = Hyperparams::default().max_iters)]
    max_iters: usize,
}

impl ModelArgs {
    fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            tol: self.tol,
            max_iters: self.max_iters,
            ..Hyperparams::with_weights(self.alpha, self.beta, self.gamma, self.lambda)
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Model output (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Convergence trace output (CSV).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrialArgs {
    /// Training samples per class; a comma-separated list runs several sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    train_per_class: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pca_energy: Option<f64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    trials: TrialArgs,
    #[arg(long)]
    report: PathBuf,
    /// Directory for per-trial convergence traces (defaults to the report's directory).
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    trials: TrialArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    beta_grid: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    classes: usize,
    #[arg(long)]
    per_class: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 3.0)]
    separation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn experiment_config(model: &ModelArgs, trials: &TrialArgs) -> ExperimentConfig {
    ExperimentConfig {
        dataset: model.data.display().to_string(),
        method: model.method,
        hyperparams: model.hyperparams(),
        train_per_class: trials.train_per_class.clone(),
        repeats: trials.repeats,
        base_seed: trials.seed,
        pca_energy: trials.pca_energy,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn run_fit(args: &FitArgs) -> Result<()> {
    let hp = args.model.hyperparams();
    if args.model.method == Method::Lrdlsr {
        hp.validate()?;
    }
    let ds = load_dataset(&args.model.data)?;
    let ds = normalize_columns(&ds).dataset;
    let labels = OneHotLabels::new(&ds.labels, ds.num_classes())?;
    let model = fit_model(args.model.method, &ds.features, &labels, &hp)?;
    info!(
        "{} fit: {} after {} iterations",
        model.method,
        model.status.as_str(),
        model.iterations()
    );
    SavedModel::from_model(&model, &hp, &ds.class_names).save(&args.out)?;
    if let Some(trace) = &args.trace {
        model.trace.write_csv(trace)?;
    }
    Ok(())
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let ds = load_dataset(&args.model.data)?;
    let cfg = experiment_config(&args.model, &args.trials);
    let report = run_experiment(&ds, &cfg)?;
    write_file(&args.report, &report.to_text())?;

    let trace_dir = match &args.trace_dir {
        Some(dir) => dir.clone(),
        None => args
            .report
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    let stem = args
        .report
        .file_stem()
        .map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
    for group in &report.groups {
        for trial in &group.trials {
            match &trial.outcome {
                Ok(outcome) if !outcome.trace.is_empty() => {
                    let name = format!("{stem}.k{}.trial{}.csv", group.train_per_class, trial.trial);
                    outcome.trace.write_csv(&trace_dir.join(name))?;
                }
                Ok(_) => {}
                Err(e) => warn!("trial {} failed: {e}", trial.trial),
            }
        }
    }
    for group in &report.groups {
        match group.summary() {
            Some((mean, std)) => println!(
                "{} train_per_class={}: {:.2} ± {:.2} % ({}/{} trials, {:.1}s)",
                cfg.method,
                group.train_per_class,
                100.0 * mean,
                100.0 * std,
                group.completed(),
                group.trials.len(),
                group.seconds
            ),
            None => println!(
                "{} train_per_class={}: all trials failed",
                cfg.method, group.train_per_class
            ),
        }
    }
    if report.groups.iter().all(|g| g.completed() == 0) {
        let first = report
            .groups
            .iter()
            .flat_map(|g| &g.trials)
            .find_map(|t| t.outcome.as_ref().err().cloned())
            .unwrap_or_default();
        return Err(Error::Numeric(format!("every trial failed: {first}")));
    }
    Ok(())
}

fn run_grid(args: &GridArgs) -> Result<()> {
    let ds = load_dataset(&args.model.data)?;
    let cfg = experiment_config(&args.model, &args.trials);
    cfg.validate(&ds)?;
    let table = grid_search(&ds, &cfg, &args.alpha_grid, &args.beta_grid)?;
    write_file(&args.out, &table.to_csv())?;
    if let Some(best) = table.best() {
        let (mean, std) = best.summary.expect("best cell has a summary");
        println!(
            "best: alpha={} beta={} train_per_class={}: {:.2} ± {:.2} %",
            best.alpha,
            best.beta,
            best.train_per_class,
            100.0 * mean,
            100.0 * std
        );
    }
    Ok(())
}

fn run_synth(args: &SynthArgs) -> Result<()> {
    let ds = generate(&SynthSpec {
        classes: args.classes,
        per_class: args.per_class,
        dim: args.dim,
        separation: args.separation,
        seed: args.seed,
    })?;
    save_dataset(&ds, &args.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Eval(args) => run_eval(args),
        Command::Grid(args) => run_grid(args),
        Command::GenSynth(args) => run_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
