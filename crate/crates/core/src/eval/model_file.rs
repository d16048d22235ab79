use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lrdlsr::Hyperparams;
use crate::matrix::Matrix;
use crate::models::{ConvergenceTrace, FitStatus, Method, TrainedModel};

/// JSON form of a fitted model. Matrices are stored as row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub method: String,
    pub status: String,
    pub iterations: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub class_names: Vec<String>,
    pub q: Vec<Vec<f64>>,
    pub projected_train: Vec<Vec<f64>>,
    pub train_labels: Vec<usize>,
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(rows: &[Vec<f64>], what: &str) -> Result<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Data(format!("model field '{what}' is not a rectangular matrix")));
    }
    Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

impl SavedModel {
    pub fn from_model(model: &TrainedModel, hp: &Hyperparams, class_names: &[String]) -> Self {
        SavedModel {
            method: model.method.to_string(),
            status: model.status.as_str().to_string(),
            iterations: model.iterations(),
            alpha: hp.alpha,
            beta: hp.beta,
            gamma: hp.gamma,
            lambda: hp.lambda,
            class_names: class_names.to_vec(),
            q: rows(&model.q),
            projected_train: rows(&model.projected_train),
            train_labels: model.train_labels.clone(),
        }
    }

    /// Rebuilds a model usable for classification. Targets and traces are not
    /// persisted, so those fields come back empty.
    pub fn to_model(&self) -> Result<TrainedModel> {
        let q = from_rows(&self.q, "q")?;
        let projected_train = from_rows(&self.projected_train, "projected_train")?;
        if projected_train.nrows() != q.nrows() || projected_train.ncols() != self.train_labels.len() {
            return Err(Error::Data("model fields have inconsistent shapes".into()));
        }
        let status = match self.status.as_str() {
            "converged" => FitStatus::Converged,
            "max_iters" => FitStatus::MaxIters,
            other => return Err(Error::Data(format!("unknown status '{other}'"))),
        };
        let method: Method = self.method.parse()?;
        let (c, n) = projected_train.shape();
        Ok(TrainedModel {
            method,
            q,
            targets: Matrix::zeros(c, n),
            relaxed_targets: Matrix::zeros(c, n),
            projected_train,
            train_labels: self.train_labels.clone(),
            trace: ConvergenceTrace::default(),
            status,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Data(format!("cannot serialize model: {e}")))?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Data(format!("invalid model file: {e}")))
    }
}
