//! Evaluation harness: nearest-neighbour classification on projected
//! features, repeated random-split trials, hyperparameter grids, synthetic
//! data and model files.

pub mod experiment;
pub mod model_file;
pub mod nn;
pub mod synth;

pub use experiment::{
    fit_model, grid_search, mean_std, run_experiment, run_trial, ExperimentConfig, ExperimentReport,
    GridCell, GridTable, TrialOutcome, TrialReport, TrialResult,
};
pub use model_file::SavedModel;
pub use nn::{accuracy, nn_classify, nn_classify_projected};
pub use synth::{generate, SynthSpec};
