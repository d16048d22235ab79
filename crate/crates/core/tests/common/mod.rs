//! Independent reference implementations used as test oracles. Nothing here
//! calls into the solver code paths it is used to check.

#![allow(dead_code)]

use lrdlsr::data::Dataset;
use lrdlsr::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Class ids for `n` samples over `c` classes with every class present.
pub fn random_ids(n: usize, c: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    assert!(n >= c);
    let mut ids: Vec<usize> = (0..n).map(|j| if j < c { j } else { rng.random_range(0..c) }).collect();
    // shuffle so class blocks are interleaved
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        ids.swap(i, j);
    }
    ids
}

/// One-sided Jacobi sweeps on a tall copy of `a`. Returns the rotated columns
/// (`σⱼuⱼ`), the matching right vectors `vⱼ`, and whether `a` was transposed.
fn one_sided_jacobi(a: &Matrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, bool) {
    let transposed = a.nrows() < a.ncols();
    let src = if transposed { a.transpose() } else { a.clone() };
    let (m, n) = src.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| src[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * x - s * y;
                    cols[q][i] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = c * x - s * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (cols, v, transposed)
}

/// Singular value shrinkage `Σ max(σ − ζ, 0) uᵢvᵢᵀ` from the Jacobi factors,
/// without nalgebra's SVD.
pub fn jacobi_svt(a: &Matrix, zeta: f64) -> Matrix {
    let (cols, v, transposed) = one_sided_jacobi(a);
    let (m, n) = (cols[0].len(), cols.len());
    let mut out = Matrix::zeros(m, n);
    for j in 0..n {
        let sigma = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if sigma == 0.0 {
            continue;
        }
        let scale = (sigma - zeta).max(0.0) / sigma;
        for r in 0..m {
            for k in 0..n {
                out[(r, k)] += scale * cols[j][r] * v[j][k];
            }
        }
    }
    if transposed {
        out.transpose()
    } else {
        out
    }
}

pub fn jacobi_nuclear_norm(a: &Matrix) -> f64 {
    let (cols, _, _) = one_sided_jacobi(a);
    cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).sum()
}

/// Minimizer of `(r − b·m)²` over `m ≥ 0` found by a dense scan over
/// `[0, 10]` followed by ternary refinement.
pub fn scalar_scan_m(r: f64, b: f64) -> f64 {
    let f = |m: f64| (r - b * m).powi(2);
    let step = 1e-3;
    let mut best = 0.0;
    for k in 0..=10_000 {
        let m = k as f64 * step;
        if f(m) < f(best) {
            best = m;
        }
    }
    let (mut lo, mut hi) = ((best - step).max(0.0), best + step);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `½‖QX − H‖² + λ/2‖Q‖²` by fixed-step gradient descent.
pub fn lsr_gradient_descent(x: &Matrix, h: &Matrix, lambda: f64, steps: usize) -> Matrix {
    let gram = x * x.transpose();
    // Lipschitz bound of the gradient: power iteration on XXᵀ
    let mut v = nalgebra::DVector::from_element(gram.nrows(), 1.0);
    let mut top = 0.0;
    for _ in 0..500 {
        let w = &gram * &v;
        top = w.norm();
        v = w / top;
    }
    let step = 1.0 / (top + lambda);
    let hx = h * x.transpose();
    let mut q = Matrix::zeros(h.nrows(), x.nrows());
    for _ in 0..steps {
        let grad = &q * &gram - &hx + &q * lambda;
        if grad.amax() < 1e-15 {
            break;
        }
        q -= grad * step;
    }
    q
}

/// 1-NN by explicit loops over projected coordinates.
pub fn brute_force_nn(q: &Matrix, train: &Matrix, train_labels: &[usize], test: &Matrix) -> Vec<usize> {
    let project = |x: &Matrix, j: usize| -> Vec<f64> {
        (0..q.nrows())
            .map(|r| (0..q.ncols()).map(|k| q[(r, k)] * x[(k, j)]).sum())
            .collect()
    };
    let train_proj: Vec<Vec<f64>> = (0..train.ncols()).map(|j| project(train, j)).collect();
    (0..test.ncols())
        .map(|j| {
            let probe = project(test, j);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, t) in train_proj.iter().enumerate() {
                let d: f64 = probe.iter().zip(t).map(|(a, b)| (a - b).powi(2)).sum();
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            train_labels[best]
        })
        .collect()
}

/// Overlapping classes whose samples vary along a class-specific 2-D
/// subspace: `x = mean_k + U_k z + noise`.
pub fn correlated_clusters(
    seed: u64,
    classes: usize,
    per_class: usize,
    dim: usize,
    separation: f64,
    subspace_scale: f64,
    noise: f64,
) -> Dataset {
    let mut rng = rng(seed);
    let n = classes * per_class;
    let mut features = Matrix::zeros(dim, n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..classes {
        let mean: Vec<f64> = (0..dim).map(|_| separation * rng.sample::<f64, _>(StandardNormal)).collect();
        let basis = gaussian(dim, 2, &mut rng);
        for s in 0..per_class {
            let j = k * per_class + s;
            let z0 = subspace_scale * rng.sample::<f64, _>(StandardNormal);
            let z1 = subspace_scale * rng.sample::<f64, _>(StandardNormal);
            for i in 0..dim {
                let e: f64 = rng.sample(StandardNormal);
                features[(i, j)] = mean[i] + basis[(i, 0)] * z0 + basis[(i, 1)] * z1 + noise * e;
            }
            labels.push(k);
        }
    }
    Dataset::new(features, labels, (0..classes).map(|k| format!("k{k}")).collect()).unwrap()
}
