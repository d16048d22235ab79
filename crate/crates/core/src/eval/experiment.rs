//! Repeated random-split evaluation and (α, β) grid search.
//!
//! Trial `r` uses split seed `base_seed + r`, so every trial can be re-run on
//! its own. Trials and grid cells are scheduled on the rayon pool; each one
//! is a pure function of its seed, so results do not depend on scheduling.

use std::fmt::Write as _;
use std::time::Instant;

use log::info;
use rayon::prelude::*;

use super::nn::{accuracy, nn_classify};
use crate::data::{normalize_columns, pca_apply, pca_fit, split, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::lrdlsr::{self, Hyperparams};
use crate::matrix::Matrix;
use crate::models::{
    fit_dlsr, fit_lsr, ConvergenceTrace, DlsrOptions, FitStatus, Method, OneHotLabels, TrainedModel,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Free-form dataset name written into reports.
    pub dataset: String,
    pub method: Method,
    pub hyperparams: Hyperparams,
    pub train_per_class: Vec<usize>,
    pub repeats: usize,
    pub base_seed: u64,
    pub pca_energy: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(dataset: impl Into<String>, method: Method, train_per_class: usize) -> Self {
        ExperimentConfig {
            dataset: dataset.into(),
            method,
            hyperparams: Hyperparams::default(),
            train_per_class: vec![train_per_class],
            repeats: 10,
            base_seed: 0,
            pca_energy: None,
        }
    }

    pub fn validate(&self, ds: &Dataset) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Parameter("repeats must be >= 1".into()));
        }
        if self.train_per_class.is_empty() {
            return Err(Error::Parameter("no train_per_class values given".into()));
        }
        if let Some(e) = self.pca_energy {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::Parameter(format!("PCA energy must lie in (0, 1], got {e}")));
            }
        }
        match self.method {
            Method::Lrdlsr => self.hyperparams.validate()?,
            Method::Lsr | Method::Dlsr => {
                if !(self.hyperparams.lambda > 0.0) {
                    return Err(Error::Parameter("lambda must be > 0".into()));
                }
            }
        }
        let smallest = ds.class_sizes().into_iter().min().unwrap_or(0);
        if let Some(&k) = self.train_per_class.iter().find(|&&k| k == 0 || k > smallest) {
            return Err(Error::Data(format!(
                "train_per_class {k} invalid: smallest class has {smallest} samples"
            )));
        }
        Ok(())
    }
}

/// Fits the configured method on column-normalized training data.
pub fn fit_model(
    method: Method,
    x: &Matrix,
    labels: &OneHotLabels,
    hp: &Hyperparams,
) -> Result<TrainedModel> {
    match method {
        Method::Lsr => fit_lsr(x, labels, hp.lambda),
        Method::Dlsr => fit_dlsr(x, labels, &DlsrOptions::new(hp.lambda)),
        Method::Lrdlsr => lrdlsr::fit(x, labels, hp),
    }
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    /// `Err` holds the message of the error that aborted the trial.
    pub outcome: std::result::Result<TrialOutcome, String>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub accuracy: f64,
    pub status: FitStatus,
    pub iterations: usize,
    pub trace: ConvergenceTrace,
}

impl TrialResult {
    pub fn accuracy(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|o| o.accuracy)
    }
}

/// All trials for one training-set size.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub train_per_class: usize,
    pub trials: Vec<TrialResult>,
    pub seconds: f64,
}

impl TrialReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.trials.iter().filter_map(TrialResult::accuracy).collect()
    }

    pub fn completed(&self) -> usize {
        self.accuracies().len()
    }

    pub fn is_complete(&self) -> bool {
        self.completed() == self.trials.len()
    }

    /// Mean and sample standard deviation over completed trials.
    pub fn summary(&self) -> Option<(f64, f64)> {
        mean_std(&self.accuracies())
    }
}

/// Mean and sample standard deviation (divisor `len − 1`, 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub groups: Vec<TrialReport>,
}

impl ExperimentReport {
    /// Deterministic text rendering; wall-clock timings are left out so that
    /// identical runs produce identical bytes.
    pub fn to_text(&self) -> String {
        let cfg = &self.config;
        let hp = &cfg.hyperparams;
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "# experiment report").unwrap();
        writeln!(w, "dataset: {}", cfg.dataset).unwrap();
        writeln!(w, "method: {}", cfg.method).unwrap();
        writeln!(w, "alpha: {}", hp.alpha).unwrap();
        writeln!(w, "beta: {}", hp.beta).unwrap();
        writeln!(w, "gamma: {}", hp.gamma).unwrap();
        writeln!(w, "lambda: {}", hp.lambda).unwrap();
        writeln!(w, "mu0: {}", hp.mu0).unwrap();
        writeln!(w, "rho: {}", hp.rho).unwrap();
        writeln!(w, "mu_max: {}", hp.mu_max).unwrap();
        writeln!(w, "tol: {}", hp.tol).unwrap();
        writeln!(w, "max_iters: {}", hp.max_iters).unwrap();
        writeln!(w, "repeats: {}", cfg.repeats).unwrap();
        writeln!(w, "base_seed: {}", cfg.base_seed).unwrap();
        match cfg.pca_energy {
            Some(e) => writeln!(w, "pca_energy: {e}").unwrap(),
            None => writeln!(w, "pca_energy: none").unwrap(),
        }
        for group in &self.groups {
            writeln!(w).unwrap();
            writeln!(w, "[train_per_class {}]", group.train_per_class).unwrap();
            match group.summary() {
                Some((mean, std)) => {
                    writeln!(w, "mean_accuracy: {mean}").unwrap();
                    writeln!(w, "std_accuracy: {std}").unwrap();
                }
                None => {
                    writeln!(w, "mean_accuracy: none").unwrap();
                    writeln!(w, "std_accuracy: none").unwrap();
                }
            }
            writeln!(w, "completed: {}/{}", group.completed(), group.trials.len()).unwrap();
            writeln!(w, "complete: {}", group.is_complete()).unwrap();
            writeln!(w, "trial,seed,accuracy,status,iterations,error").unwrap();
            for t in &group.trials {
                match &t.outcome {
                    Ok(o) => writeln!(
                        w,
                        "{},{},{},{},{},",
                        t.trial,
                        t.seed,
                        o.accuracy,
                        o.status.as_str(),
                        o.iterations
                    )
                    .unwrap(),
                    Err(e) => writeln!(
                        w,
                        "{},{},,failed,,{}",
                        t.trial,
                        t.seed,
                        e.replace([',', '\n'], ";")
                    )
                    .unwrap(),
                }
            }
        }
        out
    }
}

/// Split, normalize, optionally reduce with PCA, fit and score one trial.
pub fn run_trial(ds: &Dataset, cfg: &ExperimentConfig, train_per_class: usize, trial: usize) -> TrialResult {
    let seed = cfg.base_seed.wrapping_add(trial as u64);
    let start = Instant::now();
    let outcome = trial_outcome(ds, cfg, train_per_class, seed).map_err(|e| e.to_string());
    TrialResult {
        trial,
        seed,
        outcome,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn trial_outcome(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    train_per_class: usize,
    seed: u64,
) -> Result<TrialOutcome> {
    let (train, test) = split(ds, SplitSpec { train_per_class, seed })?;
    if test.is_empty() {
        return Err(Error::Data("test split is empty".into()));
    }
    let mut train = normalize_columns(&train).dataset;
    let mut test = normalize_columns(&test).dataset;
    if let Some(energy) = cfg.pca_energy {
        let pca = pca_fit(&train, energy)?;
        train = normalize_columns(&pca_apply(&pca, &train)?).dataset;
        test = normalize_columns(&pca_apply(&pca, &test)?).dataset;
    }
    let labels = OneHotLabels::new(&train.labels, train.num_classes())?;
    let model = fit_model(cfg.method, &train.features, &labels, &cfg.hyperparams)?;
    let predicted = nn_classify(&model, &test.features)?;
    Ok(TrialOutcome {
        accuracy: accuracy(&predicted, &test.labels),
        status: model.status,
        iterations: model.iterations(),
        trace: model.trace,
    })
}

pub fn run_experiment(ds: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate(ds)?;
    let groups = cfg
        .train_per_class
        .iter()
        .map(|&k| {
            let start = Instant::now();
            let trials: Vec<TrialResult> = (0..cfg.repeats)
                .into_par_iter()
                .map(|r| run_trial(ds, cfg, k, r))
                .collect();
            let report = TrialReport {
                train_per_class: k,
                trials,
                seconds: start.elapsed().as_secs_f64(),
            };
            if let Some((mean, std)) = report.summary() {
                info!(
                    "{} k={k}: {:.2}±{:.2}% ({:.1}s)",
                    cfg.method,
                    100.0 * mean,
                    100.0 * std,
                    report.seconds
                );
            }
            report
        })
        .collect();
    Ok(ExperimentReport {
        config: cfg.clone(),
        groups,
    })
}

#[derive(Debug, Clone)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub train_per_class: usize,
    /// `None` when the cell could not be evaluated at all.
    pub summary: Option<(f64, f64)>,
    pub completed: usize,
    pub repeats: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GridTable {
    pub cells: Vec<GridCell>,
}

impl GridTable {
    pub const HEADER: &'static str =
        "alpha,beta,train_per_class,mean_accuracy,std_accuracy,completed,repeats,status";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for c in &self.cells {
            let (mean, std) = match c.summary {
                Some((m, s)) => (m.to_string(), s.to_string()),
                None => (String::new(), String::new()),
            };
            let status = if c.error.is_some() || c.completed == 0 {
                "failed"
            } else if c.completed < c.repeats {
                "partial"
            } else {
                "ok"
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.alpha, c.beta, c.train_per_class, mean, std, c.completed, c.repeats, status
            )
            .unwrap();
        }
        out
    }

    pub fn best(&self) -> Option<&GridCell> {
        self.cells
            .iter()
            .filter(|c| c.summary.is_some())
            .max_by(|a, b| a.summary.unwrap().0.total_cmp(&b.summary.unwrap().0))
    }
}

/// Evaluates every (α, β, train_per_class) cell with the rest of `cfg` fixed.
/// Failed cells are reported and do not stop the grid.
pub fn grid_search(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    alpha_grid: &[f64],
    beta_grid: &[f64],
) -> Result<GridTable> {
    if alpha_grid.is_empty() || beta_grid.is_empty() {
        return Err(Error::Parameter("grids must be non-empty".into()));
    }
    let cells: Vec<(f64, f64)> = alpha_grid
        .iter()
        .flat_map(|&a| beta_grid.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Vec<GridCell>> = cells
        .par_iter()
        .map(|&(alpha, beta)| {
            let cell_cfg = ExperimentConfig {
                hyperparams: Hyperparams {
                    alpha,
                    beta,
                    ..cfg.hyperparams
                },
                ..cfg.clone()
            };
            match run_experiment(ds, &cell_cfg) {
                Ok(report) => report
                    .groups
                    .iter()
                    .map(|g| GridCell {
                        alpha,
                        beta,
                        train_per_class: g.train_per_class,
                        summary: g.summary(),
                        completed: g.completed(),
                        repeats: g.trials.len(),
                        error: None,
                    })
                    .collect(),
                Err(e) => cfg
                    .train_per_class
                    .iter()
                    .map(|&k| GridCell {
                        alpha,
                        beta,
                        train_per_class: k,
                        summary: None,
                        completed: 0,
                        repeats: cfg.repeats,
                        error: Some(e.to_string()),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(GridTable {
        cells: rows.into_iter().flatten().collect(),
    })
}
