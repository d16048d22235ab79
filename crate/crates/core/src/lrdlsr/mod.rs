//! Low-rank discriminative least squares regression.
//!
//! Learns a projection `Q` together with slack targets `T` that stay close to
//! the ε-dragged labels `H + B⊙M`, are low-rank within each class, and have
//! bounded energy. The problem is split with an auxiliary copy `P = T` and
//! solved by ADMM with a geometrically increasing penalty.

pub mod admm;
mod hyperparams;

pub use admm::{
    augmented_lagrangian, class_block, classwise_nuclear_norm, objective, step, update_p_classwise,
    update_q, update_t, AdmmState, Problem,
};
pub use hyperparams::Hyperparams;

use log::debug;

use crate::error::Result;
use crate::matrix::{max_abs, Matrix};
use crate::models::{ConvergenceTrace, FitStatus, Method, OneHotLabels, TraceRecord, TrainedModel};

/// Result of [`fit_with_state`]: the model plus the terminal ADMM state.
#[derive(Debug, Clone)]
pub struct Fit {
    pub model: TrainedModel,
    pub state: AdmmState,
}

/// Fits LRDLSR on column-normalized training data `x` (d×n).
pub fn fit(x: &Matrix, labels: &OneHotLabels, hp: &Hyperparams) -> Result<TrainedModel> {
    Ok(fit_with_state(x, labels, hp)?.model)
}

/// Runs ADMM from `T = P = H, Q = 0, M = 1, Y = 0` until both `‖T − P‖_∞`
/// and the sweep-to-sweep change `‖T_k − T_{k−1}‖_∞` are at most `tol`, or
/// `max_iters` sweeps have run.
pub fn fit_with_state(x: &Matrix, labels: &OneHotLabels, hp: &Hyperparams) -> Result<Fit> {
    hp.validate()?;
    let problem = Problem::new(x, labels, hp.lambda)?;
    let mut state = AdmmState::initial(&problem, hp);
    let mut trace = ConvergenceTrace::default();
    let mut status = FitStatus::MaxIters;

    while state.iter < hp.max_iters {
        let mu = state.mu;
        let next = step(&state, &problem, hp)?;
        let residual = max_abs(&(&next.t - &next.p));
        let change = max_abs(&(&next.t - &state.t));
        trace.records.push(TraceRecord {
            iter: next.iter,
            objective: objective(&next, &problem, hp)?,
            lagrangian: augmented_lagrangian(&next, &problem, hp, mu)?,
            residual,
            mu,
        });
        state = next;
        if residual <= hp.tol && change <= hp.tol {
            status = FitStatus::Converged;
            break;
        }
    }
    debug!(
        "lrdlsr: {} after {} iterations, residual {:.3e}",
        status.as_str(),
        state.iter,
        trace.last().map_or(0.0, |r| r.residual)
    );

    let relaxed = crate::models::relaxed_targets(labels, &problem.b, &state.m);
    let projected_train = &state.q * x;
    let model = TrainedModel {
        method: Method::Lrdlsr,
        q: state.q.clone(),
        targets: state.t.clone(),
        relaxed_targets: relaxed,
        projected_train,
        train_labels: labels.class_index().to_vec(),
        trace,
        status,
    };
    Ok(Fit { model, state })
}
