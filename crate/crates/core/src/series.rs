//! Multivariate series and labeled datasets.
//!
//! Values are stored channel-major: channel `j` occupies
//! `values[j * len .. (j + 1) * len]`. The same order is used by [`Series::flatten`],
//! so distances between flattened series are reproducible.

use crate::augment::SynthesisRecord;
use crate::error::{Error, Result};

/// One multivariate series, `channels × len`, with an observation mask.
///
/// Missing positions hold `NaN` in `values` and `false` in the mask.
#[derive(Clone, Debug)]
pub struct Series {
    id: String,
    channels: usize,
    len: usize,
    values: Vec<f64>,
    observed: Vec<bool>,
}

impl Series {
    /// Fully observed series from per-channel rows.
    pub fn from_channels(id: impl Into<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let observed = rows.iter().map(|r| vec![true; r.len()]).collect();
        Self::with_mask(id, rows, observed)
    }

    /// Series from per-channel rows and a mask (`true` = observed).
    pub fn with_mask(
        id: impl Into<String>,
        rows: Vec<Vec<f64>>,
        mask: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let channels = rows.len();
        if channels == 0 {
            return Err(Error::InvalidSeries("no channels".into()));
        }
        let len = rows[0].len();
        if len == 0 {
            return Err(Error::InvalidSeries("zero-length series".into()));
        }
        if mask.len() != channels {
            return Err(Error::ShapeMismatch("mask channel count".into()));
        }
        let mut values = Vec::with_capacity(channels * len);
        let mut observed = Vec::with_capacity(channels * len);
        for (j, (row, m)) in rows.into_iter().zip(mask).enumerate() {
            if row.len() != len || m.len() != len {
                return Err(Error::ShapeMismatch(format!(
                    "channel {j} has length {} (mask {}), expected {len}",
                    row.len(),
                    m.len()
                )));
            }
            for (v, o) in row.into_iter().zip(m) {
                if o && !v.is_finite() {
                    return Err(Error::InvalidSeries(format!(
                        "non-finite observed value in channel {j}"
                    )));
                }
                values.push(if o { v } else { f64::NAN });
                observed.push(o);
            }
        }
        Ok(Self {
            id: id.into(),
            channels,
            len,
            values,
            observed,
        })
    }

    /// Inverse of [`Series::flatten`].
    pub fn from_flat(id: impl Into<String>, flat: Vec<f64>, channels: usize, len: usize) -> Result<Self> {
        if channels == 0 || len == 0 {
            return Err(Error::InvalidSeries("empty shape".into()));
        }
        if flat.len() != channels * len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {channels}x{len} series",
                flat.len()
            )));
        }
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries("non-finite value".into()));
        }
        Ok(Self {
            id: id.into(),
            channels,
            len,
            observed: vec![true; flat.len()],
            values: flat,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn n_channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Channel `j` (missing entries are `NaN`).
    pub fn channel(&self, j: usize) -> &[f64] {
        &self.values[j * self.len..(j + 1) * self.len]
    }

    pub fn channel_mask(&self, j: usize) -> &[bool] {
        &self.observed[j * self.len..(j + 1) * self.len]
    }

    pub fn get(&self, channel: usize, t: usize) -> Option<f64> {
        let i = channel * self.len + t;
        self.observed[i].then(|| self.values[i])
    }

    pub fn is_observed(&self, channel: usize, t: usize) -> bool {
        self.observed[channel * self.len + t]
    }

    pub fn is_fully_observed(&self) -> bool {
        self.observed.iter().all(|&o| o)
    }

    pub fn missing_count(&self) -> usize {
        self.observed.iter().filter(|&&o| !o).count()
    }

    /// Raw channel-major storage, `NaN` at missing positions.
    pub fn raw_values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|j| self.channel(j).to_vec()).collect()
    }

    pub fn mask_rows(&self) -> Vec<Vec<bool>> {
        (0..self.channels).map(|j| self.channel_mask(j).to_vec()).collect()
    }

    pub(crate) fn ensure_observed(&self) -> Result<()> {
        if self.is_fully_observed() {
            Ok(())
        } else {
            Err(Error::MissingData(format!(
                "series {:?} has {} missing entries",
                self.id,
                self.missing_count()
            )))
        }
    }

    /// Channel-major concatenation of all values.
    pub fn flatten(&self) -> Result<Vec<f64>> {
        self.ensure_observed()?;
        Ok(self.values.clone())
    }

    /// Population standard deviation of the observed values of each channel.
    pub fn per_channel_std(&self) -> Result<Vec<f64>> {
        (0..self.channels)
            .map(|j| {
                let obs: Vec<f64> = self
                    .channel(j)
                    .iter()
                    .zip(self.channel_mask(j))
                    .filter(|(_, &o)| o)
                    .map(|(&v, _)| v)
                    .collect();
                if obs.is_empty() {
                    return Err(Error::MissingData(format!("channel {j} fully missing")));
                }
                Ok(population_std(&obs))
            })
            .collect()
    }

    /// Same shape and id, new fully observed values produced by `f` over each channel.
    pub(crate) fn map_channels(&self, mut f: impl FnMut(usize, &[f64]) -> Vec<f64>) -> Series {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.channels {
            let out = f(j, self.channel(j));
            debug_assert_eq!(out.len(), self.len);
            values.extend(out);
        }
        Series {
            id: self.id.clone(),
            channels: self.channels,
            len: self.len,
            observed: vec![true; values.len()],
            values,
        }
    }
}

impl PartialEq for Series {
    /// Equal shape, id and mask, and bit-equal observed values.
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.channels == other.channels
            && self.len == other.len
            && self.observed == other.observed
            && self
                .values
                .iter()
                .zip(&other.values)
                .zip(&self.observed)
                .all(|((a, b), &o)| !o || a.to_bits() == b.to_bits())
    }
}

/// Population standard deviation (divide by `n`), two-pass.
pub fn population_std(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.max(0.0).sqrt()
}

/// A series with its class and, for synthetic items, how it was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledItem {
    pub series: Series,
    pub label: usize,
    pub origin: Option<SynthesisRecord>,
}

impl LabeledItem {
    pub fn new(series: Series, label: usize) -> Self {
        Self {
            series,
            label,
            origin: None,
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.origin.is_some()
    }
}

/// Ordered labeled series plus the label alphabet (in declaration order).
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    name: String,
    labels: Vec<String>,
    items: Vec<LabeledItem>,
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            labels,
            items: Vec::new(),
        }
    }

    pub fn from_items(
        name: impl Into<String>,
        labels: Vec<String>,
        items: Vec<LabeledItem>,
    ) -> Result<Self> {
        let mut ds = Self::new(name, labels);
        for item in items {
            ds.push_item(item)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, series: Series, label: usize) -> Result<()> {
        self.push_item(LabeledItem::new(series, label))
    }

    pub fn push_item(&mut self, item: LabeledItem) -> Result<()> {
        if item.label >= self.labels.len() {
            return Err(Error::LabelOutOfRange {
                index: item.label,
                n_labels: self.labels.len(),
            });
        }
        if let Some(first) = self.items.first() {
            let m = first.series.n_channels();
            if item.series.n_channels() != m {
                return Err(Error::ShapeMismatch(format!(
                    "series {:?} has {} channels, dataset has {m}",
                    item.series.id(),
                    item.series.n_channels()
                )));
            }
        }
        self.items.push(item);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn items(&self) -> &[LabeledItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Channel count shared by every series, `None` when empty.
    pub fn n_channels(&self) -> Option<usize> {
        self.items.first().map(|i| i.series.n_channels())
    }

    /// Common series length, `None` when empty or lengths differ.
    pub fn common_len(&self) -> Option<usize> {
        let first = self.items.first()?.series.len();
        self.items
            .iter()
            .all(|i| i.series.len() == first)
            .then_some(first)
    }

    pub fn max_len(&self) -> usize {
        self.items.iter().map(|i| i.series.len()).max().unwrap_or(0)
    }

    pub fn is_fully_observed(&self) -> bool {
        self.items.iter().all(|i| i.series.is_fully_observed())
    }

    /// Number of items per label index.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.labels.len()];
        for item in &self.items {
            counts[item.label] += 1;
        }
        counts
    }

    /// Indices of the items of class `class_idx`, in dataset order.
    pub fn class_members(&self, class_idx: usize) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.label == class_idx)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same name and alphabet, no items.
    pub fn empty_like(&self) -> Self {
        Self::new(self.name.clone(), self.labels.clone())
    }

    /// Items with the same alphabet; the caller guarantees label validity.
    pub(crate) fn replace_items(&self, items: Vec<LabeledItem>) -> Self {
        Self {
            name: self.name.clone(),
            labels: self.labels.clone(),
            items,
        }
    }

    pub(crate) fn ensure_observed_equal_len(&self) -> Result<(usize, usize)> {
        if self.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for item in &self.items {
            item.series.ensure_observed()?;
        }
        let len = self.common_len().ok_or_else(|| {
            Error::ShapeMismatch("series lengths differ; impute or pad first".into())
        })?;
        Ok((self.n_channels().unwrap_or(0), len))
    }
}
