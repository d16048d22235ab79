use crate::error::{Error, Result};
use crate::matrix::{shape, Matrix};
use crate::models::TrainedModel;

/// Projects `test_features` (d×m) with the model's `Q` and labels each column
/// by its nearest projected training sample.
pub fn nn_classify(model: &TrainedModel, test_features: &Matrix) -> Result<Vec<usize>> {
    let projected = model.project(test_features)?;
    nn_classify_projected(&model.projected_train, &model.train_labels, &projected)
}

/// 1-NN in an already projected space. Ties go to the lowest training index.
pub fn nn_classify_projected(
    train: &Matrix,
    train_labels: &[usize],
    test: &Matrix,
) -> Result<Vec<usize>> {
    if train.ncols() != train_labels.len() || train.ncols() == 0 {
        return Err(Error::dim(
            "nn_classify",
            format!("{} labelled training columns", train_labels.len()),
            shape(train),
        ));
    }
    if train.nrows() != test.nrows() {
        return Err(Error::dim(
            "nn_classify",
            format!("{} projected rows", train.nrows()),
            shape(test),
        ));
    }
    Ok(test
        .column_iter()
        .map(|probe| {
            let mut best = (f64::INFINITY, 0);
            for (j, sample) in train.column_iter().enumerate() {
                let dist: f64 = probe
                    .iter()
                    .zip(sample.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if dist < best.0 {
                    best = (dist, j);
                }
            }
            train_labels[best.1]
        })
        .collect())
}

/// Fraction of matching entries; 0 for empty input.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}
