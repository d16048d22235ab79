use crate::error::{Error, Result};
use crate::matrix::{shape, Matrix};

/// One-hot label matrix `H` (c×n) together with the per-class column
/// partition used by the class-wise operators.
///
/// Class ids are 0-based indices into `0..c`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneHotLabels {
    h: Matrix,
    class_index: Vec<usize>,
    class_counts: Vec<usize>,
    class_columns: Vec<Vec<usize>>,
}

impl OneHotLabels {
    /// Expands integer class ids into a one-hot matrix with `num_classes` rows.
    /// Every class in `0..num_classes` must occur at least once.
    pub fn new(class_index: &[usize], num_classes: usize) -> Result<Self> {
        if class_index.is_empty() {
            return Err(Error::Data("label vector is empty".into()));
        }
        if num_classes == 0 {
            return Err(Error::Parameter("number of classes must be >= 1".into()));
        }
        let mut class_columns = vec![Vec::new(); num_classes];
        for (j, &k) in class_index.iter().enumerate() {
            if k >= num_classes {
                return Err(Error::Data(format!(
                    "sample {j} has class id {k}, expected < {num_classes}"
                )));
            }
            class_columns[k].push(j);
        }
        if let Some(empty) = class_columns.iter().position(Vec::is_empty) {
            return Err(Error::Data(format!("class {empty} has no samples")));
        }
        let n = class_index.len();
        let h = Matrix::from_fn(num_classes, n, |i, j| {
            if class_index[j] == i {
                1.0
            } else {
                0.0
            }
        });
        Ok(OneHotLabels {
            h,
            class_index: class_index.to_vec(),
            class_counts: class_columns.iter().map(Vec::len).collect(),
            class_columns,
        })
    }

    /// Infers the class count as `max(id) + 1`.
    pub fn from_ids(class_index: &[usize]) -> Result<Self> {
        let c = class_index.iter().copied().max().map_or(0, |m| m + 1);
        Self::new(class_index, c)
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn num_classes(&self) -> usize {
        self.h.nrows()
    }

    pub fn num_samples(&self) -> usize {
        self.h.ncols()
    }

    pub fn class_index(&self) -> &[usize] {
        &self.class_index
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    /// Column indices belonging to each class, in ascending order.
    pub fn class_columns(&self) -> &[Vec<usize>] {
        &self.class_columns
    }

    pub(crate) fn check_targets(&self, op: &'static str, t: &Matrix) -> Result<()> {
        if t.shape() != self.h.shape() {
            return Err(Error::dim(op, shape(&self.h), shape(t)));
        }
        Ok(())
    }
}

/// Constant sign matrix `B`: +1 where `H` is 1, −1 elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix(Matrix);

impl SignMatrix {
    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }
}

pub fn build_sign_matrix(labels: &OneHotLabels) -> SignMatrix {
    SignMatrix(labels.h().map(|v| if v == 1.0 { 1.0 } else { -1.0 }))
}

/// Non-negative ε-dragging matrix `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationMatrix(Matrix);

impl RelaxationMatrix {
    pub fn zeros(c: usize, n: usize) -> Self {
        RelaxationMatrix(Matrix::zeros(c, n))
    }

    pub fn ones(c: usize, n: usize) -> Self {
        RelaxationMatrix(Matrix::from_element(c, n, 1.0))
    }

    /// Wraps `m`, rejecting negative or non-finite entries.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Parameter(
                "relaxation matrix entries must be finite and >= 0".into(),
            ));
        }
        Ok(RelaxationMatrix(m))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Relaxed targets `H + B ⊙ M`.
pub fn relaxed_targets(labels: &OneHotLabels, b: &SignMatrix, m: &RelaxationMatrix) -> Matrix {
    labels.h() + b.as_matrix().component_mul(m.as_matrix())
}

/// Exact minimizer of `‖T − (H + B⊙M)‖²_F` over `M ≥ 0`:
/// `M = max(B ⊙ (T − H), 0)`.
pub fn update_m(t: &Matrix, labels: &OneHotLabels, b: &SignMatrix) -> Result<RelaxationMatrix> {
    labels.check_targets("update_m", t)?;
    let residual = t - labels.h();
    Ok(RelaxationMatrix(
        b.as_matrix().zip_map(&residual, |s, r| (s * r).max(0.0)),
    ))
}

/// Smallest gap `T[true, j] − T[i, j]` over all columns `j` and wrong classes `i`.
pub fn min_class_margin(targets: &Matrix, labels: &OneHotLabels) -> f64 {
    let mut margin = f64::INFINITY;
    for (j, &k) in labels.class_index().iter().enumerate() {
        for i in 0..targets.nrows() {
            if i != k {
                margin = margin.min(targets[(k, j)] - targets[(i, j)]);
            }
        }
    }
    margin
}
