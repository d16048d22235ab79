//! Discriminative LSR: ridge regression onto ε-dragged targets `H + B⊙M`,
//! solved by alternating the closed-form `Q` step with the clamped `M` step.

use super::labels::{build_sign_matrix, relaxed_targets, update_m, RelaxationMatrix};
use super::{
    check_training_inputs, ConvergenceTrace, FitStatus, Method, OneHotLabels, TraceRecord,
    TrainedModel,
};
use crate::error::{Error, Result};
use crate::matrix::{ensure_finite, frobenius_norm_sq, Matrix, RidgeSolver};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlsrOptions {
    pub lambda: f64,
    pub max_iters: usize,
    /// Stop once the relative objective decrease falls below this.
    pub tol: f64,
}

impl DlsrOptions {
    pub fn new(lambda: f64) -> Self {
        DlsrOptions {
            lambda,
            max_iters: 100,
            tol: 1e-6,
        }
    }
}

/// `‖QX − (H + B⊙M)‖²_F + λ‖Q‖²_F`.
pub fn dlsr_objective(q: &Matrix, x: &Matrix, targets: &Matrix, lambda: f64) -> f64 {
    frobenius_norm_sq(&(q * x - targets)) + lambda * frobenius_norm_sq(q)
}

pub fn fit_dlsr(x: &Matrix, labels: &OneHotLabels, opts: &DlsrOptions) -> Result<TrainedModel> {
    check_training_inputs(x, labels)?;
    if opts.max_iters == 0 {
        return Err(Error::Parameter("max_iters must be >= 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter(format!("tol must be > 0, got {}", opts.tol)));
    }
    let ridge = RidgeSolver::new(x, opts.lambda)?;
    let b = build_sign_matrix(labels);
    let (c, n) = (labels.num_classes(), labels.num_samples());

    let mut m = RelaxationMatrix::zeros(c, n);
    let mut q = Matrix::zeros(c, x.nrows());
    let mut projected = Matrix::zeros(c, n);
    let mut trace = ConvergenceTrace::default();
    let mut status = FitStatus::MaxIters;
    let mut previous: Option<f64> = None;

    for iter in 1..=opts.max_iters {
        q = ridge.solve(&relaxed_targets(labels, &b, &m))?;
        projected = &q * x;
        m = update_m(&projected, labels, &b)?;
        ensure_finite(&q, &format!("DLSR projection at iteration {iter}"))?;

        let objective = dlsr_objective(&q, x, &relaxed_targets(labels, &b, &m), opts.lambda);
        let decrease = previous.map_or(f64::INFINITY, |prev| {
            (prev - objective) / prev.abs().max(f64::MIN_POSITIVE)
        });
        trace.records.push(TraceRecord {
            iter,
            objective,
            lagrangian: objective,
            residual: decrease,
            mu: 0.0,
        });
        if decrease < opts.tol {
            status = FitStatus::Converged;
            break;
        }
        previous = Some(objective);
    }

    let relaxed = relaxed_targets(labels, &b, &m);
    Ok(TrainedModel {
        method: Method::Dlsr,
        q,
        targets: relaxed.clone(),
        relaxed_targets: relaxed,
        projected_train: projected,
        train_labels: labels.class_index().to_vec(),
        trace,
        status,
    })
}
