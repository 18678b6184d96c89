//! Experiment driver: balance → ROCKET → ridge → accuracy, averaged over runs.
//!
//! Every random draw comes from a stream named after its cell:
//! `<dataset>/<augmenter>/run<r>/augment` for augmentation and
//! `<dataset>/run<r>/kernels` for the kernel bank (`<dataset>/kernels` when the
//! bank is pinned). Cells therefore do not depend on execution order, on which
//! other augmenters are configured, or on parallelism. Within a run all
//! augmenters share one bank, and the test set is transformed once per run.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::augment::{balance_dataset, csv_field, AugmenterSpec, SynthesisRecord, Technique};
use crate::error::{Error, Result};
use crate::metrics::{profile, relative_gain, DatasetProfile};
use crate::rng::RngStream;
use crate::rocket::{
    accuracy, generate_kernels, normalize_series, ridge_fit, ridge_predict, transform, KernelBank,
    RidgeConfig, DEFAULT_KERNEL_COUNT,
};
use crate::series::{LabeledDataset, LabeledItem};
use crate::ts_format::{impute, parse_ts, FillMethod, ImputePolicy, PadTo, PadValue};

/// A column of the experiment: the untouched baseline or one technique.
#[derive(Clone, Debug, PartialEq)]
pub enum Augmenter {
    None,
    Technique(Technique),
}

impl Augmenter {
    pub fn name(&self) -> String {
        match self {
            Augmenter::None => "none".to_string(),
            Augmenter::Technique(t) => t.to_string(),
        }
    }

    pub fn is_baseline(&self) -> bool {
        matches!(self, Augmenter::None)
    }
}

impl FromStr for Augmenter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" | "baseline" => Ok(Augmenter::None),
            other => other.parse().map(Augmenter::Technique),
        }
    }
}

pub fn default_augmenters() -> Vec<Augmenter> {
    ["none", "noise_1", "noise_3", "noise_5", "smote", "gaussian-cov"]
        .iter()
        .map(|s| s.parse().expect("valid default augmenter"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Markdown => "md",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetPaths {
    pub train: PathBuf,
    pub test: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetPaths>,
    pub augmenters: Vec<Augmenter>,
    pub runs: usize,
    pub seed: u64,
    pub kernels: usize,
    pub ridge: RidgeConfig,
    pub impute: ImputePolicy,
    pub normalize_series: bool,
    /// One kernel bank for all runs instead of a fresh bank per run.
    pub pinned_bank: bool,
    pub formats: Vec<ReportFormat>,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            augmenters: default_augmenters(),
            runs: 5,
            seed: 0,
            kernels: DEFAULT_KERNEL_COUNT,
            ridge: RidgeConfig::default(),
            impute: ImputePolicy::default(),
            normalize_series: false,
            pinned_bank: false,
            formats: vec![ReportFormat::Markdown],
            out_dir: None,
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {v:?}"))),
    }
}

fn parse_list<T: FromStr<Err = Error>>(v: &str) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect()
}

impl ExperimentConfig {
    /// Reads a flat `key = value` file. `#` starts a comment line. `dataset =
    /// <train.ts>, <test.ts>` may repeat; relative paths resolve against `base`.
    pub fn from_kv_str(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut pending_train: Option<PathBuf> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let resolve = |p: &str| {
                let p = PathBuf::from(p.trim());
                match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p,
                }
            };
            match key {
                "dataset" => {
                    let (train, test) = value.split_once(',').ok_or_else(|| {
                        Error::Config(format!("line {}: dataset = <train.ts>, <test.ts>", i + 1))
                    })?;
                    cfg.datasets.push(DatasetPaths { train: resolve(train), test: resolve(test) });
                }
                "train" => pending_train = Some(resolve(value)),
                "test" => {
                    let train = pending_train.take().ok_or_else(|| {
                        Error::Config(format!("line {}: test without a preceding train", i + 1))
                    })?;
                    cfg.datasets.push(DatasetPaths { train, test: resolve(value) });
                }
                "out_dir" => cfg.out_dir = Some(resolve(value)),
                _ => cfg.set(key, value)?,
            }
        }
        if pending_train.is_some() {
            return Err(Error::Config("train without a matching test".into()));
        }
        Ok(cfg)
    }

    /// Sets one scalar option; used for both file keys and CLI overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{key}: expected an integer, got {v:?}")))
        };
        match key {
            "runs" => self.runs = int(value)? as usize,
            "seed" => self.seed = int(value)?,
            "kernels" => self.kernels = int(value)? as usize,
            "techniques" | "augmenters" => self.augmenters = parse_list(value)?,
            "alphas" => {
                self.ridge.alphas = value
                    .split(',')
                    .map(|a| a.trim().parse::<f64>().map_err(|_| Error::Config(format!("alphas: {a:?}"))))
                    .collect::<Result<_>>()?
            }
            "scale_features" => self.ridge.scale_features = parse_bool(key, value)?,
            "normalize_series" => self.normalize_series = parse_bool(key, value)?,
            "pinned_bank" => self.pinned_bank = parse_bool(key, value)?,
            "format" | "formats" => self.formats = parse_list(value)?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "impute" => {
                self.impute.method = match value {
                    "linear" | "linear-interpolate" => FillMethod::LinearInterpolate,
                    "forward" | "forward-fill" | "ffill" => FillMethod::ForwardFill,
                    "zero" | "zero-fill" => FillMethod::ZeroFill,
                    other => return Err(Error::Config(format!("impute: unknown method {other:?}"))),
                }
            }
            "pad" => {
                self.impute.pad_value = match value {
                    "edge" => PadValue::Edge,
                    "zero" => PadValue::Zero,
                    other => return Err(Error::Config(format!("pad: unknown value {other:?}"))),
                }
            }
            "length" => {
                self.impute.pad_to = if value == "max" {
                    PadTo::MaxLength
                } else {
                    PadTo::Fixed { len: int(value)? as usize, truncate: true }
                }
            }
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.kernels == 0 {
            return Err(Error::Config("kernels must be at least 1".into()));
        }
        if !self.augmenters.iter().any(Augmenter::is_baseline) {
            return Err(Error::Config("augmenter list must include \"none\"".into()));
        }
        if self.formats.is_empty() {
            return Err(Error::Config("at least one report format is required".into()));
        }
        Ok(())
    }
}

/// Result of one (dataset, augmenter) column over all runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub augmenter: String,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetResult {
    pub name: String,
    pub profile: Option<DatasetProfile>,
    pub cells: Vec<CellResult>,
    pub best_augmenter: Option<String>,
    /// Relative gain (%) of the best augmented mean over the baseline mean.
    pub improvement_pct: Option<f64>,
    /// Dataset-level failure (profiling or preparation).
    pub error: Option<String>,
}

impl DatasetResult {
    pub fn cell(&self, augmenter: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.augmenter == augmenter)
    }
}

/// One synthetic series generated during a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditEntry {
    pub dataset: String,
    pub augmenter: String,
    pub run: usize,
    pub series_id: String,
    pub label: String,
    pub record: SynthesisRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub augmenters: Vec<String>,
    pub runs: usize,
    pub datasets: Vec<DatasetResult>,
    pub average_improvement: Option<f64>,
    #[serde(skip)]
    pub audit: Vec<AuditEntry>,
    /// Class counts of every augmented training set, `(dataset, augmenter, run, counts)`.
    #[serde(skip)]
    pub train_class_counts: Vec<(String, String, usize, Vec<usize>)>,
}

/// A parsed train/test pair.
#[derive(Clone, Debug)]
pub struct LoadedDataset {
    pub name: String,
    pub train: LabeledDataset,
    pub test: LabeledDataset,
}

pub fn load_dataset(paths: &DatasetPaths) -> Result<LoadedDataset> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    };
    let train = parse_ts(&read(&paths.train)?)?.dataset;
    let test = parse_ts(&read(&paths.test)?)?.dataset;
    let name = if train.name().is_empty() {
        paths
            .train
            .file_stem()
            .map(|s| s.to_string_lossy().trim_end_matches("_TRAIN").to_string())
            .unwrap_or_default()
    } else {
        train.name().to_string()
    };
    Ok(LoadedDataset { name, train, test })
}

/// Loads every configured dataset and runs the protocol.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let loaded = cfg.datasets.iter().map(load_dataset).collect::<Result<Vec<_>>>()?;
    run_on_datasets(cfg, &loaded)
}

/// Imputes train and test onto one common length and applies the optional
/// per-series normalization.
pub fn prepare_pair(
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &ExperimentConfig,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if train.labels() != test.labels() {
        return Err(Error::ShapeMismatch("train and test label alphabets differ".into()));
    }
    let policy = match cfg.impute.pad_to {
        PadTo::MaxLength => ImputePolicy {
            pad_to: PadTo::Fixed {
                len: train.max_len().max(test.max_len()),
                truncate: false,
            },
            ..cfg.impute
        },
        _ => cfg.impute,
    };
    let mut tr = impute(train, &policy)?;
    let mut te = impute(test, &policy)?;
    if cfg.normalize_series {
        tr = normalize_series(&tr)?;
        te = normalize_series(&te)?;
    }
    Ok((tr, te))
}

struct RunOutcome {
    augmenter: usize,
    accuracy: Result<f64>,
    audit: Vec<AuditEntry>,
    counts: Option<Vec<usize>>,
}

pub fn run_on_datasets(cfg: &ExperimentConfig, datasets: &[LoadedDataset]) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut results = Vec::with_capacity(datasets.len());
    let mut audit = Vec::new();
    let mut counts = Vec::new();
    for ds in datasets {
        let (result, mut a, mut c) = run_dataset(cfg, ds);
        results.push(result);
        audit.append(&mut a);
        counts.append(&mut c);
    }
    let improvements: Vec<f64> = results.iter().filter_map(|r| r.improvement_pct).collect();
    let average_improvement =
        (!improvements.is_empty()).then(|| improvements.iter().sum::<f64>() / improvements.len() as f64);
    Ok(ExperimentReport {
        augmenters: cfg.augmenters.iter().map(Augmenter::name).collect(),
        runs: cfg.runs,
        datasets: results,
        average_improvement,
        audit,
        train_class_counts: counts,
    })
}

type DatasetOutcome = (DatasetResult, Vec<AuditEntry>, Vec<(String, String, usize, Vec<usize>)>);

fn run_dataset(cfg: &ExperimentConfig, ds: &LoadedDataset) -> DatasetOutcome {
    let failed = |e: Error| {
        (
            DatasetResult {
                name: ds.name.clone(),
                profile: None,
                cells: Vec::new(),
                best_augmenter: None,
                improvement_pct: None,
                error: Some(e.to_string()),
            },
            Vec::new(),
            Vec::new(),
        )
    };
    let prof = match profile(&ds.train, &ds.test, &cfg.impute) {
        Ok(p) => DatasetProfile { name: ds.name.clone(), ..p },
        Err(e) => return failed(e),
    };
    let (train, test) = match prepare_pair(&ds.train, &ds.test, cfg) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    let (m, t) = match train.ensure_observed_equal_len() {
        Ok(shape) => shape,
        Err(e) => return failed(e),
    };
    let truth: Vec<usize> = test.items().iter().map(|i| i.label).collect();

    let pinned = cfg.pinned_bank.then(|| {
        generate_kernels(cfg.kernels, t, m, &mut RngStream::new(cfg.seed, format!("{}/kernels", ds.name)))
    });

    let outcomes: Vec<Vec<RunOutcome>> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let bank = match &pinned {
                Some(b) => b.clone(),
                None => generate_kernels(
                    cfg.kernels,
                    t,
                    m,
                    &mut RngStream::new(cfg.seed, format!("{}/run{run}/kernels", ds.name)),
                ),
            };
            let prepared = bank.and_then(|bank| {
                let train_f = transform(&train, &bank)?;
                let test_f = transform(&test, &bank)?;
                Ok((bank, train_f, test_f))
            });
            match prepared {
                Err(e) => (0..cfg.augmenters.len())
                    .map(|a| RunOutcome { augmenter: a, accuracy: Err(e.clone()), audit: Vec::new(), counts: None })
                    .collect(),
                Ok((bank, train_f, test_f)) => cfg
                    .augmenters
                    .par_iter()
                    .enumerate()
                    .map(|(a, aug)| run_cell(cfg, ds, &train, &bank, &train_f, &test_f, &truth, aug, a, run))
                    .collect(),
            }
        })
        .collect();

    let mut per_aug: Vec<Vec<Result<f64>>> = vec![Vec::new(); cfg.augmenters.len()];
    let mut audit = Vec::new();
    let mut counts = Vec::new();
    for (run, outs) in outcomes.into_iter().enumerate() {
        for o in outs {
            if let Some(c) = o.counts {
                counts.push((ds.name.clone(), cfg.augmenters[o.augmenter].name(), run, c));
            }
            per_aug[o.augmenter].push(o.accuracy);
            audit.extend(o.audit);
        }
    }

    let cells: Vec<CellResult> = cfg
        .augmenters
        .iter()
        .zip(per_aug)
        .map(|(aug, accs)| {
            let name = aug.name();
            match accs.into_iter().collect::<Result<Vec<f64>>>() {
                Ok(accuracies) => {
                    let n = accuracies.len() as f64;
                    let mean = accuracies.iter().sum::<f64>() / n;
                    let std = (accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
                    CellResult { augmenter: name, accuracies, mean, std, error: None }
                }
                Err(e) => CellResult {
                    augmenter: name,
                    accuracies: Vec::new(),
                    mean: f64::NAN,
                    std: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let (best_augmenter, improvement_pct) = summarize(&cfg.augmenters, &cells);
    (
        DatasetResult {
            name: ds.name.clone(),
            profile: Some(prof),
            cells,
            best_augmenter,
            improvement_pct,
            error: None,
        },
        audit,
        counts,
    )
}

fn summarize(augmenters: &[Augmenter], cells: &[CellResult]) -> (Option<String>, Option<f64>) {
    let baseline = augmenters
        .iter()
        .zip(cells)
        .find(|(a, c)| a.is_baseline() && c.error.is_none())
        .map(|(_, c)| c.mean);
    let Some(base) = baseline else {
        return (None, None);
    };
    let best = augmenters
        .iter()
        .zip(cells)
        .filter(|(a, c)| !a.is_baseline() && c.error.is_none())
        .map(|(_, c)| c)
        .fold(None::<&CellResult>, |b, c| match b {
            Some(b) if b.mean >= c.mean => Some(b),
            _ => Some(c),
        });
    match best {
        None => (None, Some(0.0)),
        Some(c) => (
            Some(c.augmenter.clone()),
            relative_gain(base, c.mean).ok().map(|g| g.relative_gain_pct),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    cfg: &ExperimentConfig,
    ds: &LoadedDataset,
    train: &LabeledDataset,
    bank: &KernelBank,
    train_f: &DMatrix<f64>,
    test_f: &DMatrix<f64>,
    truth: &[usize],
    aug: &Augmenter,
    a: usize,
    run: usize,
) -> RunOutcome {
    let name = aug.name();
    let mut audit = Vec::new();
    let mut counts = None;
    let accuracy = (|| {
        let (features, labels) = match aug {
            Augmenter::None => (
                train_f.clone(),
                train.items().iter().map(|i| i.label).collect::<Vec<_>>(),
            ),
            Augmenter::Technique(t) => {
                let stream = RngStream::new(cfg.seed, format!("{}/{name}/run{run}/augment", ds.name));
                let balanced = balance_dataset(train, &AugmenterSpec::new(t.clone(), stream))?;
                counts = Some(balanced.class_counts());
                let synthetic: Vec<LabeledItem> = balanced.items()[train.len()..].to_vec();
                for item in &synthetic {
                    audit.push(AuditEntry {
                        dataset: ds.name.clone(),
                        augmenter: name.clone(),
                        run,
                        series_id: item.series.id().to_string(),
                        label: train.labels()[item.label].clone(),
                        record: item.origin.clone().expect("synthetic items carry a record"),
                    });
                }
                let extra = transform(&train.replace_items(synthetic), bank)?;
                let mut all = DMatrix::zeros(train_f.nrows() + extra.nrows(), train_f.ncols());
                all.rows_mut(0, train_f.nrows()).copy_from(train_f);
                all.rows_mut(train_f.nrows(), extra.nrows()).copy_from(&extra);
                (all, balanced.items().iter().map(|i| i.label).collect())
            }
        };
        let model = ridge_fit(&features, &labels, train.labels(), &cfg.ridge)?;
        let pred = ridge_predict(&model, test_f)?;
        accuracy(&pred, truth)
    })();
    RunOutcome { augmenter: a, accuracy, audit, counts }
}

/// Outcome of [`split_stratified`].
#[derive(Clone, Debug)]
pub struct StratifiedSplit {
    pub part_a: LabeledDataset,
    pub part_b: LabeledDataset,
    /// Classes too small for a proper split (kept entirely in `part_a`).
    pub small_classes: Vec<usize>,
}

/// Splits each class `ratio.0 : ratio.1`. Synthetic items always go to
/// `part_a`; `part_b` holds original items only. Item order is preserved.
pub fn split_stratified(
    ds: &LabeledDataset,
    ratio: (usize, usize),
    rng: &mut RngStream,
) -> Result<StratifiedSplit> {
    let (ra, rb) = ratio;
    if ra == 0 || rb == 0 {
        return Err(Error::InvalidParameter(format!("split ratio {ra}:{rb}")));
    }
    let mut in_b = vec![false; ds.len()];
    let mut small_classes = Vec::new();
    for class in 0..ds.n_labels() {
        let members = ds.class_members(class);
        let n = members.len();
        if n == 0 {
            continue;
        }
        if n < 2 {
            small_classes.push(class);
            continue;
        }
        let n_a = ((n * ra) as f64 / (ra + rb) as f64).round() as usize;
        let n_b = n - n_a.clamp(1, n - 1);
        let mut originals: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| !ds.items()[i].is_synthetic())
            .collect();
        originals.shuffle(rng);
        for &i in originals.iter().take(n_b) {
            in_b[i] = true;
        }
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, item) in ds.items().iter().enumerate() {
        if in_b[i] {
            b.push(item.clone());
        } else {
            a.push(item.clone());
        }
    }
    Ok(StratifiedSplit {
        part_a: ds.replace_items(a),
        part_b: ds.replace_items(b),
        small_classes,
    })
}

fn fmt2(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.2}")
    } else {
        "ERR".to_string()
    }
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Renders the accuracy table: one row per dataset, one column per augmenter,
/// then `Improvement (%)`, and a final `Average Improvement` row.
pub fn report_table(rep: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => {
            let mut out = String::new();
            let mut header = vec!["Dataset".to_string()];
            header.extend(rep.augmenters.iter().cloned());
            header.push("Improvement (%)".into());
            writeln!(out, "| {} |", header.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(header.len())).unwrap();
            for d in &rep.datasets {
                let mut row = vec![d.name.clone()];
                for a in &rep.augmenters {
                    let cell = d.cell(a).map_or(f64::NAN, |c| c.mean);
                    let txt = fmt2(cell);
                    row.push(if d.best_augmenter.as_deref() == Some(a.as_str()) {
                        format!("**{txt}**")
                    } else {
                        txt
                    });
                }
                row.push(d.improvement_pct.map_or("ERR".into(), fmt2));
                writeln!(out, "| {} |", row.join(" | ")).unwrap();
            }
            let mut last = vec!["Average Improvement".to_string()];
            last.extend(rep.augmenters.iter().map(|_| "-".to_string()));
            last.push(rep.average_improvement.map_or("-".into(), fmt2));
            writeln!(out, "| {} |", last.join(" | ")).unwrap();
            out
        }
        ReportFormat::Csv => {
            let mut out = String::new();
            let mut header = vec!["dataset".to_string()];
            header.extend(rep.augmenters.iter().map(|a| csv_field(a)));
            header.push("improvement_pct".into());
            writeln!(out, "{}", header.join(",")).unwrap();
            for d in &rep.datasets {
                let mut row = vec![csv_field(&d.name)];
                for a in &rep.augmenters {
                    row.push(d.cell(a).filter(|c| c.error.is_none()).map_or(String::new(), |c| format!("{:?}", c.mean)));
                }
                row.push(d.improvement_pct.map_or(String::new(), |v| format!("{:?}", round2(v))));
                writeln!(out, "{}", row.join(",")).unwrap();
            }
            let mut last = vec!["Average Improvement".to_string()];
            last.extend(rep.augmenters.iter().map(|_| String::new()));
            last.push(rep.average_improvement.map_or(String::new(), |v| format!("{:?}", round2(v))));
            writeln!(out, "{}", last.join(",")).unwrap();
            out
        }
        ReportFormat::Json => serde_json::to_string_pretty(rep).expect("report serializes"),
    }
}

/// `dataset,augmenter,run,accuracy` for every successful run.
pub fn raw_accuracies_csv(rep: &ExperimentReport) -> String {
    let mut out = String::from("dataset,augmenter,run,accuracy\n");
    for d in &rep.datasets {
        for c in &d.cells {
            for (r, a) in c.accuracies.iter().enumerate() {
                writeln!(out, "{},{},{r},{a:?}", csv_field(&d.name), csv_field(&c.augmenter)).unwrap();
            }
        }
    }
    out
}

/// Audit log of every synthetic training series in the experiment.
pub fn experiment_audit_csv(rep: &ExperimentReport) -> String {
    let mut out = String::from("dataset,augmenter,run,series_id,label,parent_ids,technique,parameters\n");
    for e in &rep.audit {
        let params: Vec<String> = e.record.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&e.dataset),
            csv_field(&e.augmenter),
            e.run,
            csv_field(&e.series_id),
            csv_field(&e.label),
            csv_field(&e.record.parent_ids.join(";")),
            csv_field(&e.record.technique),
            csv_field(&params.join(";"))
        )
        .unwrap();
    }
    out
}

/// CSV of the dataset profiles in the report, one row per dataset.
pub fn profiles_csv(rep: &ExperimentReport) -> String {
    let mut out = format!("{}\n", DatasetProfile::CSV_HEADER);
    for p in rep.datasets.iter().filter_map(|d| d.profile.as_ref()) {
        writeln!(out, "{}", p.csv_row()).unwrap();
    }
    out
}

/// Writes `report.<ext>` per format plus the raw accuracy, audit and profile
/// CSVs into `dir`. Returns the written paths.
pub fn write_outputs(
    rep: &ExperimentReport,
    dir: &Path,
    formats: &[ReportFormat],
) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<(PathBuf, String)> = formats
        .iter()
        .map(|f| (dir.join(format!("report.{}", f.extension())), report_table(rep, *f)))
        .collect();
    files.push((dir.join("raw_accuracies.csv"), raw_accuracies_csv(rep)));
    files.push((dir.join("audit.csv"), experiment_audit_csv(rep)));
    files.push((dir.join("profiles.csv"), profiles_csv(rep)));
    for (path, body) in &files {
        std::fs::write(path, body)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

/// Mean accuracy per (dataset, augmenter), for comparisons across reports.
pub fn mean_table(rep: &ExperimentReport) -> HashMap<(String, String), f64> {
    rep.datasets
        .iter()
        .flat_map(|d| d.cells.iter().map(move |c| ((d.name.clone(), c.augmenter.clone()), c.mean)))
        .collect()
}
