//! Dense kernels shared by every solver: norms, the Hadamard product, thin
//! SVD, singular value shrinkage and the ridge-regularized right solve
//! `T·Xᵀ·(XXᵀ + λI)⁻¹`.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix. Samples are stored one per column throughout the crate.
pub type Matrix = DMatrix<f64>;

/// Numerical tolerances used by the kernels and their checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entry of `UᵀU − I` accepted for SVD factors.
    pub orthogonality: f64,
    /// Relative Frobenius reconstruction error accepted for SVD factors.
    pub reconstruction: f64,
    /// Singular values below `rank_relative · σ_max` count as zero for rank.
    pub rank_relative: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    orthogonality: 1e-10,
    reconstruction: 1e-8,
    rank_relative: 1e-12,
};

/// Thin singular value decomposition `a = u · diag(σ) · vᵀ` with
/// `r = min(rows, cols)` factors sorted by non-increasing σ.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    pub singular_values: DVector<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(|s| s)
    }

    /// Rebuilds `u · diag(f(σ)) · vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mut us = self.u.clone();
        for (j, mut col) in us.column_iter_mut().enumerate() {
            col *= f(self.singular_values[j]);
        }
        us * self.v.transpose()
    }

    /// Numerical rank: count of σ above `rank_relative · σ_max`.
    pub fn rank(&self) -> usize {
        let max = self.singular_values.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        let cutoff = TOLERANCES.rank_relative * max;
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn nuclear_norm(&self) -> f64 {
        self.singular_values.iter().sum()
    }
}

pub fn frobenius_norm_sq(a: &Matrix) -> f64 {
    a.iter().map(|v| v * v).sum()
}

/// Largest absolute entry (`‖a‖_∞` in the entrywise sense), 0 for empty input.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_same_shape("hadamard", a, b)?;
    Ok(a.component_mul(b))
}

pub(crate) fn check_same_shape(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::dim(op, shape(a), shape(b)));
    }
    Ok(())
}

pub(crate) fn shape(a: &Matrix) -> String {
    format!("{}x{}", a.nrows(), a.ncols())
}

/// Fails with a numeric error if any entry is NaN or infinite.
pub fn ensure_finite(a: &Matrix, what: &str) -> Result<()> {
    if let Some(pos) = a.iter().position(|v| !v.is_finite()) {
        let (r, c) = (pos % a.nrows(), pos / a.nrows());
        return Err(Error::Numeric(format!(
            "{what} has non-finite entry at ({r}, {c})"
        )));
    }
    Ok(())
}

pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    ensure_finite(a, "svd input")?;
    if a.is_empty() {
        return Err(Error::dim("svd", "non-empty matrix", shape(a)));
    }
    // faer's SVD stays accurate on rank-deficient input, which shrinkage
    // produces constantly; nalgebra's bidiagonal QR does not.
    let fa = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let decomposition = fa.thin_svd().map_err(|_| {
        Error::Numeric(format!(
            "SVD did not converge for {} matrix (condition estimate {:.3e})",
            shape(a),
            condition_estimate(a)
        ))
    })?;
    let (fu, fv) = (decomposition.U(), decomposition.V());
    let sigma = decomposition.S().column_vector();

    // faer sorts already; enforce the ordering contract regardless.
    let mut order: Vec<usize> = (0..sigma.nrows()).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let r = order.len();
    let u = Matrix::from_fn(fu.nrows(), r, |i, k| fu[(i, order[k])]);
    let v = Matrix::from_fn(fv.nrows(), r, |i, k| fv[(i, order[k])]);
    let singular_values = DVector::from_fn(r, |k, _| sigma[order[k]].max(0.0));
    Ok(SvdFactors {
        u,
        singular_values,
        v,
    })
}

/// Ratio of the extreme diagonal magnitudes of the QR factor `R`; a cheap
/// stand-in when the SVD itself is unavailable.
fn condition_estimate(a: &Matrix) -> f64 {
    let tall = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    };
    let r = tall.qr().r();
    let diag: Vec<f64> = r.diagonal().iter().map(|v| v.abs()).collect();
    let max = diag.iter().copied().fold(0.0, f64::max);
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn nuclear_norm(a: &Matrix) -> Result<f64> {
    Ok(svd(a)?.nuclear_norm())
}

/// Singular value shrinkage: `U·diag(max(0, σ − ζ))·Vᵀ`, the proximal
/// operator of `ζ‖·‖_*`.
pub fn svt(theta: &Matrix, zeta: f64) -> Result<Matrix> {
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::Parameter(format!(
            "shrinkage threshold must be finite and >= 0, got {zeta}"
        )));
    }
    if zeta == 0.0 {
        return Ok(theta.clone());
    }
    let factors = svd(theta)?;
    Ok(factors.reconstruct_with(|s| (s - zeta).max(0.0)))
}

/// Precomputed right-hand ridge operator `R = Xᵀ(XXᵀ + λI)⁻¹` (n×d), so that
/// the solve `T·Xᵀ·(XXᵀ + λI)⁻¹ = T·R` costs one product per call.
///
/// The factorization is done on the smaller of the two Gram matrices:
/// `Xᵀ(XXᵀ + λI)⁻¹ = (XᵀX + λI)⁻¹Xᵀ`. Both are SPD for λ > 0.
#[derive(Debug, Clone)]
pub struct RidgeSolver {
    projector: Matrix,
    lambda: f64,
    dim: usize,
}

impl RidgeSolver {
    pub fn new(x: &Matrix, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Parameter(format!(
                "ridge weight lambda must be finite and > 0, got {lambda}"
            )));
        }
        ensure_finite(x, "ridge data")?;
        let (d, n) = x.shape();
        let not_spd = || Error::Numeric(format!("ridge Gram matrix for {d}x{n} data is not SPD"));
        let projector = if d <= n {
            let mut gram = x * x.transpose();
            for i in 0..d {
                gram[(i, i)] += lambda;
            }
            let chol = Cholesky::new(gram).ok_or_else(not_spd)?;
            chol.solve(x).transpose()
        } else {
            let mut gram = x.transpose() * x;
            for i in 0..n {
                gram[(i, i)] += lambda;
            }
            let chol = Cholesky::new(gram).ok_or_else(not_spd)?;
            chol.solve(&x.transpose())
        };
        Ok(RidgeSolver {
            projector,
            lambda,
            dim: d,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Returns `t · Xᵀ(XXᵀ + λI)⁻¹` for a `c×n` target matrix `t`.
    pub fn solve(&self, t: &Matrix) -> Result<Matrix> {
        if t.ncols() != self.projector.nrows() {
            return Err(Error::dim(
                "ridge_solve_right",
                format!("targets with {} columns", self.projector.nrows()),
                shape(t),
            ));
        }
        debug_assert_eq!(self.projector.ncols(), self.dim);
        Ok(t * &self.projector)
    }
}

/// One-shot `t·xᵀ·(xxᵀ + λI)⁻¹`. Solvers that call this repeatedly should hold
/// a [`RidgeSolver`] instead.
pub fn ridge_solve_right(t: &Matrix, x: &Matrix, lambda: f64) -> Result<Matrix> {
    if t.ncols() != x.ncols() {
        return Err(Error::dim(
            "ridge_solve_right",
            format!("targets with {} columns", x.ncols()),
            shape(t),
        ));
    }
    RidgeSolver::new(x, lambda)?.solve(t)
}
