//! Least-squares regression classifiers with relaxed targets.
//!
//! * [`matrix`] dense kernels (SVD, singular value shrinkage, ridge solves)
//! * [`models`] LSR and DLSR baselines plus the shared fitted-model type
//! * [`lrdlsr`] the ADMM solver for low-rank discriminative LSR
//! * [`data`] dataset files, normalization, random splits, PCA
//! * [`eval`] nearest-neighbour evaluation, repeated trials, grid search

pub mod data;
pub mod error;
pub mod eval;
pub mod lrdlsr;
pub mod matrix;
pub mod models;

pub use error::{Error, Result};
pub use matrix::Matrix;
