//! Block updates of the LRDLSR augmented Lagrangian
//!
//! ```text
//! L = ½‖QX − T‖² + α/2‖T − (H + B⊙M)‖² + β Σᵢ‖Pᵢ‖_* + γ/2‖T‖² + λ/2‖Q‖²
//!     + μ/2‖T − P + Y/μ‖²
//! ```
//!
//! Each update is the exact minimizer of `L` over its block with the others
//! held fixed.

use rayon::prelude::*;

use super::Hyperparams;
use crate::error::{Error, Result};
use crate::matrix::{ensure_finite, frobenius_norm_sq, nuclear_norm, shape, svt, Matrix, RidgeSolver};
use crate::models::{build_sign_matrix, relaxed_targets, update_m, OneHotLabels, RelaxationMatrix, SignMatrix};

/// Fixed inputs of one fit: data, labels, sign matrix and the precomputed
/// ridge operator for the `Q` step.
#[derive(Debug, Clone)]
pub struct Problem<'a> {
    pub x: &'a Matrix,
    pub labels: &'a OneHotLabels,
    pub b: SignMatrix,
    ridge: RidgeSolver,
}

impl<'a> Problem<'a> {
    pub fn new(x: &'a Matrix, labels: &'a OneHotLabels, lambda: f64) -> Result<Self> {
        if x.ncols() != labels.num_samples() {
            return Err(Error::dim(
                "lrdlsr",
                format!("{} data columns", labels.num_samples()),
                shape(x),
            ));
        }
        ensure_finite(x, "training data")?;
        Ok(Problem {
            x,
            labels,
            b: build_sign_matrix(labels),
            ridge: RidgeSolver::new(x, lambda)?,
        })
    }

    pub fn ridge(&self) -> &RidgeSolver {
        &self.ridge
    }

    fn relaxed(&self, m: &RelaxationMatrix) -> Matrix {
        relaxed_targets(self.labels, &self.b, m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub t: Matrix,
    pub p: Matrix,
    pub q: Matrix,
    pub m: RelaxationMatrix,
    pub y: Matrix,
    pub mu: f64,
    pub iter: usize,
}

impl AdmmState {
    /// `T = P = H`, `Q = 0`, `M = 1`, `Y = 0`, `μ = μ₀`.
    pub fn initial(problem: &Problem<'_>, hp: &Hyperparams) -> Self {
        let h = problem.labels.h();
        let (c, n) = h.shape();
        AdmmState {
            t: h.clone(),
            p: h.clone(),
            q: Matrix::zeros(c, problem.x.nrows()),
            m: RelaxationMatrix::ones(c, n),
            y: Matrix::zeros(c, n),
            mu: hp.mu0,
            iter: 0,
        }
    }

    fn check_shapes(&self, problem: &Problem<'_>) -> Result<()> {
        let labels = problem.labels;
        labels.check_targets("admm state T", &self.t)?;
        labels.check_targets("admm state P", &self.p)?;
        labels.check_targets("admm state Y", &self.y)?;
        labels.check_targets("admm state M", self.m.as_matrix())?;
        let expected = (labels.num_classes(), problem.x.nrows());
        if self.q.shape() != expected {
            return Err(Error::dim(
                "admm state Q",
                format!("{}x{}", expected.0, expected.1),
                shape(&self.q),
            ));
        }
        Ok(())
    }
}

/// Copies the columns of `a` listed in `columns` into a new matrix.
pub fn class_block(a: &Matrix, columns: &[usize]) -> Matrix {
    Matrix::from_fn(a.nrows(), columns.len(), |i, k| a[(i, columns[k])])
}

/// `β Σᵢ ‖Aᵢ‖_*` over the class column blocks of `a`.
pub fn classwise_nuclear_norm(a: &Matrix, labels: &OneHotLabels) -> Result<f64> {
    labels
        .class_columns()
        .iter()
        .map(|cols| nuclear_norm(&class_block(a, cols)))
        .sum()
}

/// Model objective evaluated at `(Q, T, M)`:
/// `½‖QX−T‖² + α/2‖T−(H+B⊙M)‖² + βΣᵢ‖Tᵢ‖_* + γ/2‖T‖² + λ/2‖Q‖²`.
pub fn objective(state: &AdmmState, problem: &Problem<'_>, hp: &Hyperparams) -> Result<f64> {
    state.check_shapes(problem)?;
    let fit = frobenius_norm_sq(&(&state.q * problem.x - &state.t));
    let drag = frobenius_norm_sq(&(&state.t - problem.relaxed(&state.m)));
    let low_rank = if hp.beta == 0.0 {
        0.0
    } else {
        classwise_nuclear_norm(&state.t, problem.labels)?
    };
    Ok(0.5 * fit
        + 0.5 * hp.alpha * drag
        + hp.beta * low_rank
        + 0.5 * hp.gamma * frobenius_norm_sq(&state.t)
        + 0.5 * hp.lambda * frobenius_norm_sq(&state.q))
}

/// Augmented Lagrangian at the state's `(T, P, Q, M, Y)` and penalty `mu`.
pub fn augmented_lagrangian(
    state: &AdmmState,
    problem: &Problem<'_>,
    hp: &Hyperparams,
    mu: f64,
) -> Result<f64> {
    state.check_shapes(problem)?;
    let fit = frobenius_norm_sq(&(&state.q * problem.x - &state.t));
    let drag = frobenius_norm_sq(&(&state.t - problem.relaxed(&state.m)));
    let low_rank = if hp.beta == 0.0 {
        0.0
    } else {
        classwise_nuclear_norm(&state.p, problem.labels)?
    };
    let coupling = frobenius_norm_sq(&(&state.t - &state.p + &state.y / mu));
    Ok(0.5 * fit
        + 0.5 * hp.alpha * drag
        + hp.beta * low_rank
        + 0.5 * hp.gamma * frobenius_norm_sq(&state.t)
        + 0.5 * hp.lambda * frobenius_norm_sq(&state.q)
        + 0.5 * mu * coupling)
}

/// `T = (1+α+γ+μ)⁻¹ [QX + α(H+B⊙M) + μP − Y]`.
pub fn update_t(state: &AdmmState, problem: &Problem<'_>, hp: &Hyperparams) -> Result<Matrix> {
    state.check_shapes(problem)?;
    let scale = 1.0 / (1.0 + hp.alpha + hp.gamma + state.mu);
    let rhs = &state.q * problem.x + problem.relaxed(&state.m) * hp.alpha + &state.p * state.mu - &state.y;
    Ok(rhs * scale)
}

/// Class-wise singular value shrinkage `Pᵢ = SVT(Tᵢ + Yᵢ/μ, β/μ)`.
pub fn update_p_classwise(
    t: &Matrix,
    y: &Matrix,
    mu: f64,
    beta: f64,
    labels: &OneHotLabels,
) -> Result<Matrix> {
    labels.check_targets("update_p_classwise", t)?;
    labels.check_targets("update_p_classwise", y)?;
    if !(mu > 0.0) {
        return Err(Error::Parameter(format!("penalty mu must be > 0, got {mu}")));
    }
    let theta = t + y / mu;
    if beta == 0.0 {
        return Ok(theta);
    }
    let threshold = beta / mu;
    let blocks = labels
        .class_columns()
        .par_iter()
        .map(|cols| svt(&class_block(&theta, cols), threshold))
        .collect::<Result<Vec<_>>>()?;

    let mut p = Matrix::zeros(theta.nrows(), theta.ncols());
    for (cols, block) in labels.class_columns().iter().zip(&blocks) {
        for (k, &j) in cols.iter().enumerate() {
            p.set_column(j, &block.column(k));
        }
    }
    Ok(p)
}

/// `Q = T·Xᵀ(XXᵀ + λI)⁻¹` through the problem's precomputed ridge operator.
pub fn update_q(t: &Matrix, problem: &Problem<'_>) -> Result<Matrix> {
    problem.labels.check_targets("update_q", t)?;
    problem.ridge.solve(t)
}

/// One ADMM sweep in the order T, P, Q, M, Y, μ.
pub fn step(state: &AdmmState, problem: &Problem<'_>, hp: &Hyperparams) -> Result<AdmmState> {
    let iter = state.iter + 1;
    let finite = |m: &Matrix, block: &str| ensure_finite(m, &format!("block {block} at iteration {iter}"));

    let t = update_t(state, problem, hp)?;
    finite(&t, "T")?;
    let p = update_p_classwise(&t, &state.y, state.mu, hp.beta, problem.labels)?;
    finite(&p, "P")?;
    let q = update_q(&t, problem)?;
    finite(&q, "Q")?;
    let m = update_m(&t, problem.labels, &problem.b)?;
    let y = &state.y + (&t - &p) * state.mu;
    finite(&y, "Y")?;
    let mu = (hp.rho * state.mu).min(hp.mu_max);

    Ok(AdmmState {
        t,
        p,
        q,
        m,
        y,
        mu,
        iter,
    })
}
