use super::{check_training_inputs, ConvergenceTrace, FitStatus, Method, OneHotLabels, TrainedModel};
use crate::error::Result;
use crate::matrix::{Matrix, RidgeSolver};

/// Closed-form ridge regression onto one-hot targets: `Q = HXᵀ(XXᵀ + λI)⁻¹`.
pub fn fit_lsr(x: &Matrix, labels: &OneHotLabels, lambda: f64) -> Result<TrainedModel> {
    check_training_inputs(x, labels)?;
    let ridge = RidgeSolver::new(x, lambda)?;
    let q = ridge.solve(labels.h())?;
    let projected_train = &q * x;
    Ok(TrainedModel {
        method: Method::Lsr,
        q,
        targets: labels.h().clone(),
        relaxed_targets: labels.h().clone(),
        projected_train,
        train_labels: labels.class_index().to_vec(),
        trace: ConvergenceTrace::default(),
        status: FitStatus::Converged,
    })
}
