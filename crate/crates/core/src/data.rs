//! Datasets on disk and the preprocessing between files and solver inputs.
//!
//! The text format holds one sample per line: `label,v1,v2,...,vd`. Labels are
//! arbitrary tokens and are remapped to class ids `0..c` in order of first
//! appearance. Blank lines and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use log::warn;
use nalgebra::DVector;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{svd, Matrix, TOLERANCES};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// d×n, one column per sample.
    pub features: Matrix,
    /// Class id of each sample, in `0..class_names.len()`.
    pub labels: Vec<usize>,
    /// Original label token of each class id.
    pub class_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if labels.len() != features.ncols() {
            return Err(Error::Data(format!(
                "{} labels for {} samples",
                labels.len(),
                features.ncols()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&k| k >= class_names.len()) {
            return Err(Error::Data(format!(
                "class id {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        crate::matrix::ensure_finite(&features, "dataset features")
            .map_err(|e| Error::Data(e.to_string()))?;
        Ok(Dataset {
            features,
            labels,
            class_names,
        })
    }

    pub fn dim(&self) -> usize {
        self.features.nrows()
    }

    pub fn len(&self) -> usize {
        self.features.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.features.ncols() == 0
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes()];
        for &k in &self.labels {
            sizes[k] += 1;
        }
        sizes
    }

    /// Samples at `indices`, in the given order, sharing this dataset's classes.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_columns(indices),
            labels: indices.iter().map(|&j| self.labels[j]).collect(),
            class_names: self.class_names.clone(),
        }
    }

    fn with_features(&self, features: Matrix) -> Dataset {
        Dataset {
            features,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
        }
    }
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut class_ids: HashMap<String, usize> = HashMap::new();
    let mut class_names = Vec::new();
    let mut labels = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',');
        let label = fields.next().unwrap_or_default().trim();
        if label.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: "empty label".into(),
            });
        }
        let start = values.len();
        for (col, field) in fields.enumerate() {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                column: col + 2,
                message: format!("'{field}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    column: col + 2,
                    message: format!("non-finite value '{field}'"),
                });
            }
            values.push(v);
        }
        let width = values.len() - start;
        match dim {
            None if width == 0 => {
                return Err(Error::Parse {
                    line: line_no,
                    column: 2,
                    message: "sample has no feature values".into(),
                })
            }
            None => dim = Some(width),
            Some(d) if d != width => {
                return Err(Error::Parse {
                    line: line_no,
                    column: width + 2,
                    message: format!("expected {d} feature values, found {width}"),
                })
            }
            Some(_) => {}
        }
        let next_id = class_names.len();
        let id = *class_ids.entry(label.to_string()).or_insert_with(|| {
            class_names.push(label.to_string());
            next_id
        });
        labels.push(id);
    }

    let d = dim.ok_or_else(|| Error::Data("dataset contains no samples".into()))?;
    let n = labels.len();
    let features = Matrix::from_fn(d, n, |i, j| values[j * d + i]);
    Dataset::new(features, labels, class_names)
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text)
}

/// Serializes with shortest round-trip float formatting, so
/// `parse_dataset(format_dataset(ds)) == ds`.
pub fn format_dataset(ds: &Dataset) -> String {
    let mut out = String::new();
    for j in 0..ds.len() {
        out.push_str(&ds.class_names[ds.labels[j]]);
        for v in ds.features.column(j).iter() {
            write!(out, ",{v}").expect("write to String");
        }
        out.push('\n');
    }
    out
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, format_dataset(ds)).map_err(|e| Error::io(path, e))
}

/// Output of [`normalize_columns`]: the scaled dataset and the indices of
/// all-zero samples that were left untouched.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub dataset: Dataset,
    pub zero_columns: Vec<usize>,
}

/// Scales every sample to unit Euclidean length.
pub fn normalize_columns(ds: &Dataset) -> Normalized {
    let mut features = ds.features.clone();
    let mut zero_columns = Vec::new();
    for (j, mut col) in features.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        } else {
            zero_columns.push(j);
        }
    }
    if !zero_columns.is_empty() {
        warn!("{} zero-norm samples left unnormalized", zero_columns.len());
    }
    Normalized {
        dataset: ds.with_features(features),
        zero_columns,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub seed: u64,
}

/// Per-class random partition: indices of training and test samples, each in
/// ascending (file) order.
pub fn split_indices(ds: &Dataset, spec: SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if spec.train_per_class == 0 {
        return Err(Error::Parameter("train_per_class must be >= 1".into()));
    }
    let mut members = vec![Vec::new(); ds.num_classes()];
    for (j, &k) in ds.labels.iter().enumerate() {
        members[k].push(j);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut is_train = vec![false; ds.len()];
    for (k, cols) in members.iter().enumerate() {
        if cols.len() < spec.train_per_class {
            return Err(Error::Data(format!(
                "class '{}' has {} samples, fewer than train_per_class = {}",
                ds.class_names[k],
                cols.len(),
                spec.train_per_class
            )));
        }
        for pick in index::sample(&mut rng, cols.len(), spec.train_per_class) {
            is_train[cols[pick]] = true;
        }
    }
    let (train, test): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&j| is_train[j]);
    Ok((train, test))
}

pub fn split(ds: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(ds, spec)?;
    Ok((ds.subset(&train), ds.subset(&test)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: DVector<f64>,
    /// d×k with orthonormal columns.
    pub basis: Matrix,
    /// Share of the centered squared singular values kept by `basis`.
    pub retained_energy: f64,
}

impl PcaModel {
    pub fn components(&self) -> usize {
        self.basis.ncols()
    }
}

/// Keeps the fewest leading principal directions whose share of the squared
/// singular values of the centered data reaches `energy`.
pub fn pca_fit(ds: &Dataset, energy: f64) -> Result<PcaModel> {
    if !(energy > 0.0 && energy <= 1.0) {
        return Err(Error::Parameter(format!(
            "PCA energy must lie in (0, 1], got {energy}"
        )));
    }
    if ds.is_empty() {
        return Err(Error::Data("cannot fit PCA on an empty dataset".into()));
    }
    let mean = ds.features.column_mean();
    let centered = center(&ds.features, &mean);
    let factors = svd(&centered)?;
    let sigma_max = factors.singular_values.iter().copied().fold(0.0, f64::max);
    let energies: Vec<f64> = factors
        .singular_values
        .iter()
        .filter(|&&s| s > TOLERANCES.rank_relative * sigma_max)
        .map(|s| s * s)
        .collect();
    let total: f64 = energies.iter().sum();
    if total == 0.0 {
        return Err(Error::Data("centered features carry no energy".into()));
    }

    let target = energy * total * (1.0 - 1e-12);
    let mut cumulative = 0.0;
    let mut k = 0;
    for e in &energies {
        cumulative += e;
        k += 1;
        if cumulative >= target {
            break;
        }
    }
    Ok(PcaModel {
        mean,
        basis: factors.u.columns(0, k).into_owned(),
        retained_energy: (cumulative / total).min(1.0),
    })
}

/// Projects centered features onto the PCA basis: `basisᵀ (x − mean)`.
pub fn pca_apply(model: &PcaModel, ds: &Dataset) -> Result<Dataset> {
    if ds.dim() != model.mean.len() {
        return Err(Error::dim(
            "pca_apply",
            format!("{} feature rows", model.mean.len()),
            ds.dim(),
        ));
    }
    let projected = model.basis.transpose() * center(&ds.features, &model.mean);
    Ok(ds.with_features(projected))
}

fn center(x: &Matrix, mean: &DVector<f64>) -> Matrix {
    let mut out = x.clone();
    for mut col in out.column_iter_mut() {
        col -= mean;
    }
    out
}
