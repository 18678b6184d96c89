//! Dataset characterization and relative gain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::LabeledDataset;
use crate::ts_format::{impute, ImputePolicy, PadTo};

/// Property vector of one train/test pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub name: String,
    pub n_classes: usize,
    pub train_size: usize,
    pub dim: usize,
    pub length: usize,
    pub var_train: f64,
    pub var_test: f64,
    pub im_ratio: f64,
    pub d_train_test: f64,
    pub prop_miss: f64,
}

impl DatasetProfile {
    pub const CSV_HEADER: &'static str =
        "Dataset,n_classes,Train_size,Dim,Length,Var_train,Var_test,Im_ratio,d_train_test,prop_miss";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.n_classes,
            self.train_size,
            self.dim,
            self.length,
            self.var_train,
            self.var_test,
            self.im_ratio,
            self.d_train_test,
            self.prop_miss
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainRecord {
    pub baseline_acc: f64,
    pub augmented_acc: f64,
    pub relative_gain_pct: f64,
}

/// Mean over (channel, step) of the across-series population variance.
pub fn dataset_variance(ds: &LabeledDataset) -> Result<f64> {
    let (m, t) = ds.ensure_observed_equal_len()?;
    let n = ds.len() as f64;
    let width = m * t;
    let mut mean = vec![0.0; width];
    for item in ds.items() {
        for (acc, v) in mean.iter_mut().zip(item.series.raw_values()) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= n);
    let mut var = vec![0.0; width];
    for item in ds.items() {
        for ((acc, v), mu) in var.iter_mut().zip(item.series.raw_values()).zip(&mean) {
            *acc += (v - mu) * (v - mu);
        }
    }
    Ok(var.iter().map(|v| v / n).sum::<f64>() / width as f64)
}

/// Hellinger distance `(1/√2)·‖√p − √q‖₂`.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    check_distribution(p)?;
    check_distribution(q)?;
    let s: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok((s.sqrt() / std::f64::consts::SQRT_2).min(1.0))
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NotADistribution("negative or non-finite entry".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("sums to {total}")));
    }
    Ok(())
}

/// Imbalance degree from class counts, Hellinger flavour.
///
/// Minority classes are those with frequency strictly below `1/K`. The
/// reference distribution for `m` minority classes has those `m` classes at 0,
/// `K − m − 1` classes at `1/K` and the rest of the mass on one class.
pub fn imbalance_degree_from_counts(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if counts.is_empty() || total == 0 {
        return Err(Error::EmptyDataset);
    }
    let k = counts.len();
    let kf = k as f64;
    let zeta: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    // c/total < 1/K  <=>  c·K < total, exact in integers.
    let m = counts.iter().filter(|&&c| c * k < total).count();
    if m == 0 {
        return Ok(0.0);
    }
    let uniform = vec![1.0 / kf; k];
    let mut extreme = vec![0.0; k];
    for v in extreme.iter_mut().skip(m).take(k - m - 1) {
        *v = 1.0 / kf;
    }
    extreme[k - 1] = 1.0 - (k - m - 1) as f64 / kf;
    let num = hellinger(&zeta, &uniform)?;
    let den = hellinger(&extreme, &uniform)?;
    Ok(num / den + (m as f64 - 1.0))
}

pub fn imbalance_degree(ds: &LabeledDataset) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    imbalance_degree_from_counts(&ds.class_counts())
}

fn mean_flat(ds: &LabeledDataset) -> Result<Vec<f64>> {
    let (m, t) = ds.ensure_observed_equal_len()?;
    let mut mean = vec![0.0; m * t];
    for item in ds.items() {
        for (acc, v) in mean.iter_mut().zip(item.series.raw_values()) {
            *acc += v;
        }
    }
    let n = ds.len() as f64;
    mean.iter_mut().for_each(|v| *v /= n);
    Ok(mean)
}

/// Euclidean distance between the mean flattened train and test vectors.
pub fn train_test_distance(train: &LabeledDataset, test: &LabeledDataset) -> Result<f64> {
    let a = mean_flat(train)?;
    let b = mean_flat(test)?;
    if a.len() != b.len() || train.n_channels() != test.n_channels() {
        return Err(Error::ShapeMismatch(format!(
            "train has {:?}x{:?}, test {:?}x{:?}",
            train.n_channels(),
            train.common_len(),
            test.n_channels(),
            test.common_len()
        )));
    }
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
}

/// Missing (channel, step) entries over all entries, on the grid padded to the
/// longest series: steps a shorter series lacks count as missing.
pub fn missing_proportion(ds: &LabeledDataset) -> f64 {
    missing_proportion_on_grid(ds, ds.max_len())
}

fn missing_proportion_on_grid(ds: &LabeledDataset, grid_len: usize) -> f64 {
    let m = ds.n_channels().unwrap_or(0);
    let total = ds.len() * m * grid_len;
    if total == 0 {
        return 0.0;
    }
    let missing: usize = ds
        .items()
        .iter()
        .map(|i| i.series.missing_count() + (grid_len - i.series.len()) * m)
        .sum();
    missing as f64 / total as f64
}

/// `100·(augmented − baseline)/baseline`, accuracies on the 0–100 scale.
pub fn relative_gain(baseline_acc: f64, augmented_acc: f64) -> Result<GainRecord> {
    if baseline_acc.is_nan() || baseline_acc <= 0.0 {
        return Err(Error::ZeroBaseline(baseline_acc));
    }
    Ok(GainRecord {
        baseline_acc,
        augmented_acc,
        relative_gain_pct: 100.0 * (augmented_acc - baseline_acc) / baseline_acc,
    })
}

/// Profiles raw (possibly incomplete) train and test sets.
///
/// `prop_miss` is measured on the raw data over train and test together; the
/// variances and the distance are measured after imputing both sets with
/// `policy` onto a common length.
pub fn profile(
    train: &LabeledDataset,
    test: &LabeledDataset,
    policy: &ImputePolicy,
) -> Result<DatasetProfile> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if train.labels() != test.labels() {
        return Err(Error::ShapeMismatch("train and test label alphabets differ".into()));
    }
    let grid = train.max_len().max(test.max_len());
    let m = train.n_channels().unwrap_or(0);
    let total = (train.len() + test.len()) * m * grid;
    let prop_miss = if total == 0 {
        0.0
    } else {
        (missing_proportion_on_grid(train, grid) * (train.len() * m * grid) as f64
            + missing_proportion_on_grid(test, grid) * (test.len() * m * grid) as f64)
            / total as f64
    };

    let common = match policy.pad_to {
        PadTo::MaxLength => ImputePolicy {
            pad_to: PadTo::Fixed { len: grid, truncate: false },
            ..*policy
        },
        fixed => ImputePolicy { pad_to: fixed, ..*policy },
    };
    let train_i = impute(train, &common)?;
    let test_i = impute(test, &common)?;
    let var_test = if test.is_empty() { 0.0 } else { dataset_variance(&test_i)? };
    let d_train_test = if test.is_empty() {
        0.0
    } else {
        train_test_distance(&train_i, &test_i)?
    };
    Ok(DatasetProfile {
        name: train.name().to_string(),
        n_classes: train.n_labels(),
        train_size: train.len(),
        dim: m,
        length: train.max_len(),
        var_train: dataset_variance(&train_i)?,
        var_test,
        im_ratio: imbalance_degree(train)?,
        d_train_test,
        prop_miss,
    })
}
