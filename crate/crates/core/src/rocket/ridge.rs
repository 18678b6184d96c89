//! One-vs-rest ridge classifier with closed-form leave-one-out alpha selection.
//!
//! Features are centred (and by default scaled to unit population std); the
//! intercept is unpenalized. For centred `X` the fitted values are
//! `Ŷ = 1·ȳᵀ + X(XᵀX + αI)⁻¹XᵀY_c` and the hat-matrix diagonal is
//! `h_ii = 1/N + [X(XᵀX + αI)⁻¹Xᵀ]_ii`, so the leave-one-out residual of row
//! `i` is `(y_i − ŷ_i)/(1 − h_ii)`. One symmetric eigendecomposition (of the
//! Gram matrix `XXᵀ` or of `XᵀX`, whichever is smaller) serves every alpha.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Default grid: 17 log-spaced values from 1e-3 to 1e3.
pub fn default_alphas() -> Vec<f64> {
    (0..17).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 16.0)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RidgeConfig {
    pub alphas: Vec<f64>,
    pub scale_features: bool,
}

impl Default for RidgeConfig {
    fn default() -> Self {
        Self {
            alphas: default_alphas(),
            scale_features: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RidgeModel {
    /// `(features + 1) × classes`, last row the intercept, in scaled feature space.
    pub weights: DMatrix<f64>,
    pub alpha: f64,
    pub center: Vec<f64>,
    pub spread: Vec<f64>,
    pub label_names: Vec<String>,
    /// Mean squared leave-one-out residual per grid alpha, in grid order.
    pub loo_errors: Vec<(f64, f64)>,
}

impl RidgeModel {
    pub fn n_features(&self) -> usize {
        self.center.len()
    }

    /// Coefficients without the intercept row.
    pub fn coefficients(&self) -> DMatrix<f64> {
        self.weights.rows(0, self.n_features()).into_owned()
    }

    pub fn intercepts(&self) -> Vec<f64> {
        self.weights.row(self.n_features()).iter().copied().collect()
    }

    /// Per-class scores, `rows × classes`.
    pub fn decision_function(&self, features: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if features.ncols() != self.n_features() {
            return Err(Error::WidthMismatch {
                expected: self.n_features(),
                got: features.ncols(),
            });
        }
        let x = apply_scaler(features, &self.center, &self.spread);
        let mut scores = x * self.coefficients();
        let b = self.intercepts();
        for mut row in scores.row_iter_mut() {
            for (v, bi) in row.iter_mut().zip(&b) {
                *v += bi;
            }
        }
        Ok(scores)
    }
}

struct Scaler {
    center: Vec<f64>,
    spread: Vec<f64>,
}

fn fit_scaler(x: &DMatrix<f64>, scale: bool) -> Scaler {
    let n = x.nrows() as f64;
    let mut center = Vec::with_capacity(x.ncols());
    let mut spread = Vec::with_capacity(x.ncols());
    for col in x.column_iter() {
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        center.push(mean);
        spread.push(if scale && sd > 0.0 && sd.is_finite() { sd } else { 1.0 });
    }
    Scaler { center, spread }
}

fn apply_scaler(x: &DMatrix<f64>, center: &[f64], spread: &[f64]) -> DMatrix<f64> {
    let mut out = x.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        let (c, s) = (center[j], spread[j]);
        col.iter_mut().for_each(|v| *v = (*v - c) / s);
    }
    out
}

/// `±1` one-vs-rest targets, `rows × classes`.
fn targets(labels: &[usize], n_classes: usize) -> DMatrix<f64> {
    DMatrix::from_fn(labels.len(), n_classes, |i, k| if labels[i] == k { 1.0 } else { -1.0 })
}

fn validate(features: &DMatrix<f64>, labels: &[usize], label_names: &[String]) -> Result<()> {
    if features.nrows() != labels.len() {
        return Err(Error::DimensionMismatch(features.nrows(), labels.len()));
    }
    if features.nrows() < 2 {
        return Err(Error::InvalidParameter("ridge needs at least two rows".into()));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= label_names.len()) {
        return Err(Error::LabelOutOfRange {
            index: bad,
            n_labels: label_names.len(),
        });
    }
    if labels.iter().all(|&l| l == labels[0]) {
        return Err(Error::SingleClass);
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite feature".into()));
    }
    Ok(())
}

/// Spectral form of the centred problem, shared by every alpha.
enum Spectral {
    /// Gram route (`N ≤ P`): `XXᵀ = QΛQᵀ`, `QᵀY_c` cached.
    Dual { q: DMatrix<f64>, lambda: Vec<f64>, qty: DMatrix<f64> },
    /// Covariance route (`P < N`): `XᵀX = VSVᵀ`, `XV` and `VᵀXᵀY_c` cached.
    Primal { v: DMatrix<f64>, s: Vec<f64>, xv: DMatrix<f64>, vtxty: DMatrix<f64> },
}

impl Spectral {
    fn new(x: &DMatrix<f64>, yc: &DMatrix<f64>) -> Self {
        if x.nrows() <= x.ncols() {
            let gram = x * x.transpose();
            let eig = SymmetricEigen::new(gram);
            let lambda = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
            let qty = eig.eigenvectors.transpose() * yc;
            Spectral::Dual { q: eig.eigenvectors, lambda, qty }
        } else {
            let cov = x.transpose() * x;
            let eig = SymmetricEigen::new(cov);
            let s = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
            let xv = x * &eig.eigenvectors;
            let vtxty = xv.transpose() * yc;
            Spectral::Primal { v: eig.eigenvectors, s, xv, vtxty }
        }
    }

    /// Centred fitted values and the centred hat diagonal at `alpha`.
    fn fit_and_hat(&self, alpha: f64) -> (DMatrix<f64>, Vec<f64>) {
        let (basis, coef, shrink): (&DMatrix<f64>, &DMatrix<f64>, Vec<f64>) = match self {
            Spectral::Dual { q, lambda, qty } => {
                (q, qty, lambda.iter().map(|l| l / (l + alpha)).collect())
            }
            Spectral::Primal { xv, s, vtxty, .. } => {
                (xv, vtxty, s.iter().map(|si| 1.0 / (si + alpha)).collect())
            }
        };
        let mut scaled = coef.clone();
        for (j, mut row) in scaled.row_iter_mut().enumerate() {
            row *= shrink[j];
        }
        let fitted = basis * scaled;
        let hat = basis
            .row_iter()
            .map(|r| r.iter().zip(&shrink).map(|(b, f)| b * b * f).sum())
            .collect();
        (fitted, hat)
    }

    /// Coefficients `(XᵀX + αI)⁻¹XᵀY_c`, `P × classes`.
    fn coefficients(&self, x: &DMatrix<f64>, alpha: f64) -> DMatrix<f64> {
        match self {
            Spectral::Dual { q, lambda, qty } => {
                // W = Xᵀ(XXᵀ + αI)⁻¹Y_c = XᵀQ diag(1/(λ+α)) QᵀY_c
                let mut scaled = qty.clone();
                for (j, mut row) in scaled.row_iter_mut().enumerate() {
                    row /= lambda[j] + alpha;
                }
                x.transpose() * (q * scaled)
            }
            Spectral::Primal { v, s, vtxty, .. } => {
                let mut scaled = vtxty.clone();
                for (j, mut row) in scaled.row_iter_mut().enumerate() {
                    row /= s[j] + alpha;
                }
                v * scaled
            }
        }
    }
}

fn prepare(
    features: &DMatrix<f64>,
    labels: &[usize],
    n_classes: usize,
    scale: bool,
) -> (Scaler, DMatrix<f64>, DMatrix<f64>, Vec<f64>) {
    let scaler = fit_scaler(features, scale);
    let x = apply_scaler(features, &scaler.center, &scaler.spread);
    let y = targets(labels, n_classes);
    let n = y.nrows() as f64;
    let y_mean: Vec<f64> = y.column_iter().map(|c| c.sum() / n).collect();
    let mut yc = y;
    for (k, mut col) in yc.column_iter_mut().enumerate() {
        col.add_scalar_mut(-y_mean[k]);
    }
    (scaler, x, yc, y_mean)
}

fn assemble(
    coef: DMatrix<f64>,
    y_mean: Vec<f64>,
    alpha: f64,
    scaler: Scaler,
    label_names: &[String],
    loo_errors: Vec<(f64, f64)>,
) -> RidgeModel {
    let p = coef.nrows();
    let k = coef.ncols();
    let mut weights = DMatrix::zeros(p + 1, k);
    weights.rows_mut(0, p).copy_from(&coef);
    weights.row_mut(p).copy_from(&DVector::from_vec(y_mean).transpose());
    RidgeModel {
        weights,
        alpha,
        center: scaler.center,
        spread: scaler.spread,
        label_names: label_names.to_vec(),
        loo_errors,
    }
}

/// Fits at every grid alpha and keeps the one with the smallest leave-one-out
/// error (ties go to the earlier grid entry).
pub fn ridge_fit(
    features: &DMatrix<f64>,
    labels: &[usize],
    label_names: &[String],
    config: &RidgeConfig,
) -> Result<RidgeModel> {
    validate(features, labels, label_names)?;
    if config.alphas.is_empty() || config.alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidParameter("alpha grid must be non-empty and positive".into()));
    }
    let (scaler, x, yc, y_mean) = prepare(features, labels, label_names.len(), config.scale_features);
    let spectral = Spectral::new(&x, &yc);
    let n = x.nrows() as f64;

    let mut loo_errors = Vec::with_capacity(config.alphas.len());
    for &alpha in &config.alphas {
        let (fitted, hat) = spectral.fit_and_hat(alpha);
        let mut sse = 0.0;
        for i in 0..yc.nrows() {
            let denom = (1.0 - 1.0 / n - hat[i]).abs().max(f64::EPSILON);
            for k in 0..yc.ncols() {
                let r = (yc[(i, k)] - fitted[(i, k)]) / denom;
                sse += r * r;
            }
        }
        loo_errors.push((alpha, sse / (yc.nrows() * yc.ncols()) as f64));
    }
    let best = loo_errors
        .iter()
        .enumerate()
        .fold(0, |b, (i, e)| if e.1 < loo_errors[b].1 { i } else { b });
    let alpha = loo_errors[best].0;
    let coef = spectral.coefficients(&x, alpha);
    Ok(assemble(coef, y_mean, alpha, scaler, label_names, loo_errors))
}

/// Fit at one fixed alpha (no selection).
pub fn ridge_fit_fixed(
    features: &DMatrix<f64>,
    labels: &[usize],
    label_names: &[String],
    alpha: f64,
    scale_features: bool,
) -> Result<RidgeModel> {
    ridge_fit(
        features,
        labels,
        label_names,
        &RidgeConfig {
            alphas: vec![alpha],
            scale_features,
        },
    )
}

/// Arg-max class per row; ties go to the lowest class index.
pub fn ridge_predict(model: &RidgeModel, features: &DMatrix<f64>) -> Result<Vec<usize>> {
    let scores = model.decision_function(features)?;
    Ok(scores
        .row_iter()
        .map(|row| {
            let mut best = 0;
            for (k, v) in row.iter().enumerate() {
                if *v > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect())
}

/// Percentage of matching entries, 0–100.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(pred.len(), truth.len()));
    }
    if pred.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let hits = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(100.0 * hits as f64 / pred.len() as f64)
}
