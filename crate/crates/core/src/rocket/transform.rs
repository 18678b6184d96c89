use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::kernels::{Kernel, KernelBank};
use crate::error::{Error, Result};
use crate::series::{LabeledDataset, Series};

/// Proportion of positive outputs and maximum output of one kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelResponse {
    pub ppv: f64,
    pub max: f64,
}

/// Convolves `s` with `k` (zero padding outside the series).
///
/// Output `p` is `bias + Σ_r Σ_i w[r][i] · x[ch_r][p − padding + i·dilation]`.
pub fn apply_kernel(s: &Series, k: &Kernel) -> Result<KernelResponse> {
    s.ensure_observed()?;
    if let Some(&c) = k.channels.iter().find(|&&c| c >= s.n_channels()) {
        return Err(Error::ChannelOutOfRange {
            channel: c,
            channels: s.n_channels(),
        });
    }
    Ok(convolve(s, k))
}

fn convolve(s: &Series, k: &Kernel) -> KernelResponse {
    let t = s.len() as isize;
    let out_len = k.output_len(s.len());
    if out_len == 0 {
        return KernelResponse { ppv: 0.0, max: 0.0 };
    }
    let pad = k.padding as isize;
    let dil = k.dilation as isize;
    let mut positive = 0usize;
    let mut max = f64::NEG_INFINITY;
    for p in 0..out_len as isize {
        let start = p - pad;
        let mut acc = k.bias;
        for (r, &ch) in k.channels.iter().enumerate() {
            let xs = s.channel(ch);
            let w = k.row(r);
            for (i, wi) in w.iter().enumerate() {
                let idx = start + i as isize * dil;
                if idx >= 0 && idx < t {
                    acc += wi * xs[idx as usize];
                }
            }
        }
        if acc > 0.0 {
            positive += 1;
        }
        if acc > max {
            max = acc;
        }
    }
    KernelResponse {
        ppv: positive as f64 / out_len as f64,
        max,
    }
}

/// Feature row of one series: `(ppv, max)` per kernel, in kernel order.
pub fn transform_series(s: &Series, bank: &KernelBank) -> Result<Vec<f64>> {
    check_shape(s, bank)?;
    let mut row = Vec::with_capacity(bank.n_features());
    for k in &bank.kernels {
        let r = convolve(s, k);
        row.push(r.ppv);
        row.push(r.max);
    }
    Ok(row)
}

fn check_shape(s: &Series, bank: &KernelBank) -> Result<()> {
    s.ensure_observed()?;
    if s.len() != bank.input_length || s.n_channels() != bank.input_channels {
        return Err(Error::ShapeMismatch(format!(
            "series {:?} is {}x{}, kernel bank expects {}x{}",
            s.id(),
            s.n_channels(),
            s.len(),
            bank.input_channels,
            bank.input_length
        )));
    }
    Ok(())
}

/// `N × 2·|kernels|` feature matrix, one row per series.
///
/// Rows are computed in parallel; each row is computed by one thread in a
/// fixed order, so the result does not depend on scheduling.
pub fn transform(ds: &LabeledDataset, bank: &KernelBank) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = ds
        .items()
        .par_iter()
        .map(|item| transform_series(&item.series, bank))
        .collect::<Result<_>>()?;
    let mut flat = Vec::with_capacity(rows.len() * bank.n_features());
    for r in &rows {
        flat.extend_from_slice(r);
    }
    Ok(DMatrix::from_row_slice(rows.len(), bank.n_features(), &flat))
}

/// Z-normalizes every channel of every series (constant channels become 0).
pub fn normalize_series(ds: &LabeledDataset) -> Result<LabeledDataset> {
    let mut out = ds.empty_like();
    for item in ds.items() {
        item.series.ensure_observed()?;
        let stds = item.series.per_channel_std()?;
        let s = item.series.map_channels(|j, xs| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let sd = stds[j];
            xs.iter()
                .map(|x| if sd > 0.0 { (x - mean) / sd } else { 0.0 })
                .collect()
        });
        out.push_item(crate::series::LabeledItem {
            series: s,
            label: item.label,
            origin: item.origin.clone(),
        })?;
    }
    Ok(out)
}

/// Feature matrix as CSV with a `k0_ppv,k0_max,...` header.
pub fn features_csv(features: &DMatrix<f64>) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..features.ncols() / 2)
        .flat_map(|k| [format!("k{k}_ppv"), format!("k{k}_max")])
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in 0..features.nrows() {
        for c in 0..features.ncols() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{:?}", features[(r, c)]).unwrap();
        }
        out.push('\n');
    }
    out
}
