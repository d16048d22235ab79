//! Least-squares regression classifiers sharing one fitted-model type:
//! plain LSR, DLSR with ε-dragging, and (in [`crate::lrdlsr`]) LRDLSR.

pub mod dlsr;
pub mod labels;
pub mod lsr;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{shape, Matrix};

pub use dlsr::{dlsr_objective, fit_dlsr, DlsrOptions};
pub use labels::{
    build_sign_matrix, min_class_margin, relaxed_targets, update_m, OneHotLabels, RelaxationMatrix,
    SignMatrix,
};
pub use lsr::fit_lsr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lsr,
    Dlsr,
    Lrdlsr,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Lsr => "lsr",
            Method::Dlsr => "dlsr",
            Method::Lrdlsr => "lrdlsr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lsr" => Ok(Method::Lsr),
            "dlsr" => Ok(Method::Dlsr),
            "lrdlsr" => Ok(Method::Lrdlsr),
            other => Err(Error::Parameter(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitStatus {
    Converged,
    MaxIters,
}

impl FitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FitStatus::Converged => "converged",
            FitStatus::MaxIters => "max_iters",
        }
    }
}

/// One iteration of solver telemetry.
///
/// For LRDLSR `objective` is the model objective, `lagrangian` the augmented
/// Lagrangian, `residual` is `‖T − P‖_∞` and `mu` the penalty used in that
/// iteration. DLSR has no multiplier: there `lagrangian` repeats the
/// objective, `residual` holds the relative objective decrease and `mu` is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub objective: f64,
    pub lagrangian: f64,
    pub residual: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub const HEADER: &'static str = "iter,objective,lagrangian,residual,mu";

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(Self::HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e}\n",
                r.iter, r.objective, r.lagrangian, r.residual, r.mu
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}

/// A fitted linear projection `Q` plus everything the NN classifier needs.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub method: Method,
    /// c×d projection.
    pub q: Matrix,
    /// Final regression targets (`H` for LSR, `H + B⊙M` for DLSR, `T` for LRDLSR).
    pub targets: Matrix,
    /// `H + B⊙M` at the final `M` (`H` for LSR).
    pub relaxed_targets: Matrix,
    /// `Q·X` over the training samples, one column per sample.
    pub projected_train: Matrix,
    pub train_labels: Vec<usize>,
    pub trace: ConvergenceTrace,
    pub status: FitStatus,
}

impl TrainedModel {
    pub fn num_classes(&self) -> usize {
        self.q.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.q.ncols()
    }

    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |r| r.iter)
    }

    /// Maps d×m features to c×m projected features.
    pub fn project(&self, features: &Matrix) -> Result<Matrix> {
        if features.nrows() != self.q.ncols() {
            return Err(Error::dim(
                "project",
                format!("{} feature rows", self.q.ncols()),
                shape(features),
            ));
        }
        Ok(&self.q * features)
    }
}

pub(crate) fn check_training_inputs(x: &Matrix, labels: &OneHotLabels) -> Result<()> {
    if x.ncols() != labels.num_samples() {
        return Err(Error::dim(
            "fit",
            format!("{} data columns", labels.num_samples()),
            shape(x),
        ));
    }
    crate::matrix::ensure_finite(x, "training data")
}
