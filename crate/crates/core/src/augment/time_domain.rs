use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::Params;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::Series;

/// Value written into a masked window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MaskFill {
    #[default]
    Zero,
    ChannelMean,
}

fn check_ratio(name: &str, r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::RatioOutOfRange(format!("{name} = {r}")))
    }
}

fn window_len(ratio: f64, len: usize) -> usize {
    ((ratio * len as f64).ceil() as usize).clamp(1, len)
}

/// Linear resampling of `xs` onto `out_len` evenly spaced points spanning the
/// same support (first and last samples are kept).
pub(crate) fn resample(xs: &[f64], out_len: usize) -> Vec<f64> {
    let n = xs.len();
    if n == 1 || out_len == 1 {
        return vec![xs[0]; out_len];
    }
    let step = (n - 1) as f64 / (out_len - 1) as f64;
    (0..out_len)
        .map(|i| {
            let pos = i as f64 * step;
            let lo = (pos.floor() as usize).min(n - 1);
            let hi = (lo + 1).min(n - 1);
            let frac = pos - lo as f64;
            xs[lo] + frac * (xs[hi] - xs[lo])
        })
        .collect()
}

/// Multiplies every value by one factor drawn uniformly from `[low, high]`.
pub fn scale(s: &Series, factor_range: (f64, f64), rng: &mut RngStream) -> Result<Series> {
    scale_traced(s, factor_range, rng).map(|(s, _)| s)
}

pub(crate) fn scale_traced(
    s: &Series,
    (low, high): (f64, f64),
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    if !(low.is_finite() && high.is_finite() && low <= high) {
        return Err(Error::InvalidParameter(format!("scale range [{low}, {high}]")));
    }
    s.ensure_observed()?;
    let factor = if low == high { low } else { rng.random_range(low..=high) };
    let out = s.map_channels(|_, xs| xs.iter().map(|x| x * factor).collect());
    Ok((out, vec![("factor".into(), factor)]))
}

/// Applies one random orthogonal `M×M` matrix to the channel vector of every
/// time step. Haar-distributed for `M ≥ 2`; a sign flip for `M = 1`.
pub fn rotate(s: &Series, rng: &mut RngStream) -> Result<Series> {
    rotate_traced(s, rng).map(|(s, _)| s)
}

pub(crate) fn random_orthogonal(m: usize, rng: &mut RngStream) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub(crate) fn rotate_traced(s: &Series, rng: &mut RngStream) -> Result<(Series, Params)> {
    s.ensure_observed()?;
    let m = s.n_channels();
    let t = s.len();
    if m == 1 {
        let out = s.map_channels(|_, xs| xs.iter().map(|x| -x).collect());
        return Ok((out, vec![("sign".into(), -1.0)]));
    }
    let q = random_orthogonal(m, rng);
    let mut rows = vec![vec![0.0; t]; m];
    for step in 0..t {
        for (i, row) in rows.iter_mut().enumerate() {
            row[step] = (0..m).map(|j| q[(i, j)] * s.channel(j)[step]).sum();
        }
    }
    let out = Series::from_channels(s.id(), rows)?;
    let params = q.iter().enumerate().map(|(i, v)| (format!("q{i}"), *v)).collect();
    Ok((out, params))
}

/// Extracts a random contiguous window of `⌈ratio·T⌉` steps and stretches it
/// back to `T` steps.
pub fn slice_resize(s: &Series, ratio: f64, rng: &mut RngStream) -> Result<Series> {
    slice_traced(s, ratio, rng).map(|(s, _)| s)
}

pub(crate) fn slice_traced(s: &Series, ratio: f64, rng: &mut RngStream) -> Result<(Series, Params)> {
    check_ratio("slice ratio", ratio)?;
    s.ensure_observed()?;
    let t = s.len();
    let w = window_len(ratio, t);
    let start = rng.random_range(0..=t - w);
    let out = s.map_channels(|_, xs| resample(&xs[start..start + w], t));
    Ok((out, vec![("start".into(), start as f64), ("window".into(), w as f64)]))
}

/// Cuts the series into `n_segments` near-equal blocks and shuffles them.
pub fn permute_segments(s: &Series, n_segments: usize, rng: &mut RngStream) -> Result<Series> {
    permute_traced(s, n_segments, rng).map(|(s, _)| s)
}

pub(crate) fn permute_traced(
    s: &Series,
    n_segments: usize,
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    s.ensure_observed()?;
    let t = s.len();
    if n_segments < 2 || n_segments > t {
        return Err(Error::InvalidParameter(format!(
            "{n_segments} segments for a series of length {t}"
        )));
    }
    let bounds: Vec<usize> = (0..=n_segments).map(|i| i * t / n_segments).collect();
    let mut order: Vec<usize> = (0..n_segments).collect();
    order.shuffle(rng);
    let out = s.map_channels(|_, xs| {
        order
            .iter()
            .flat_map(|&b| xs[bounds[b]..bounds[b + 1]].iter().copied())
            .collect()
    });
    let params = order
        .iter()
        .enumerate()
        .map(|(i, &b)| (format!("segment{i}"), b as f64))
        .collect();
    Ok((out, params))
}

/// Overwrites a random window of `⌈ratio·T⌉` steps in every channel.
pub fn time_mask(s: &Series, ratio: f64, fill: MaskFill, rng: &mut RngStream) -> Result<Series> {
    time_mask_traced(s, ratio, fill, rng).map(|(s, _)| s)
}

pub(crate) fn time_mask_traced(
    s: &Series,
    ratio: f64,
    fill: MaskFill,
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    check_ratio("mask ratio", ratio)?;
    s.ensure_observed()?;
    let t = s.len();
    let w = window_len(ratio, t);
    let start = rng.random_range(0..=t - w);
    let out = s.map_channels(|_, xs| {
        let value = match fill {
            MaskFill::Zero => 0.0,
            MaskFill::ChannelMean => xs.iter().sum::<f64>() / t as f64,
        };
        let mut ys = xs.to_vec();
        ys[start..start + w].iter_mut().for_each(|v| *v = value);
        ys
    });
    Ok((out, vec![("start".into(), start as f64), ("window".into(), w as f64)]))
}

/// Stretches or squeezes one random window by a factor drawn from `scales`,
/// then resamples the whole series back to `T` steps.
pub fn window_warp(
    s: &Series,
    window_ratio: f64,
    scales: &[f64],
    rng: &mut RngStream,
) -> Result<Series> {
    window_warp_traced(s, window_ratio, scales, rng).map(|(s, _)| s)
}

pub(crate) fn window_warp_traced(
    s: &Series,
    window_ratio: f64,
    scales: &[f64],
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    check_ratio("window ratio", window_ratio)?;
    if scales.is_empty() || scales.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidParameter(format!("warp scales {scales:?}")));
    }
    s.ensure_observed()?;
    let t = s.len();
    let w = window_len(window_ratio, t);
    let start = rng.random_range(0..=t - w);
    let factor = scales[rng.random_range(0..scales.len())];
    let warped_len = ((w as f64 * factor).round() as usize).max(1);
    let out = s.map_channels(|_, xs| {
        let mut stitched = Vec::with_capacity(t - w + warped_len);
        stitched.extend_from_slice(&xs[..start]);
        stitched.extend(resample(&xs[start..start + w], warped_len));
        stitched.extend_from_slice(&xs[start + w..]);
        resample(&stitched, t)
    });
    Ok((
        out,
        vec![
            ("start".into(), start as f64),
            ("window".into(), w as f64),
            ("factor".into(), factor),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(m: usize, t: usize) -> Series {
        let rows = (0..m)
            .map(|j| (0..t).map(|i| ((i * 7 + j * 3) % 11) as f64 - 4.5 + j as f64).collect())
            .collect();
        Series::from_channels("x", rows).unwrap()
    }

    #[test]
    fn unit_scale_is_identity() {
        let s = sample(3, 20);
        assert_eq!(scale(&s, (1.0, 1.0), &mut RngStream::new(0, "s")).unwrap(), s);
    }

    #[test]
    fn scale_uses_one_factor() {
        let s = sample(2, 10);
        let out = scale(&s, (0.5, 2.0), &mut RngStream::new(1, "s")).unwrap();
        let f = out.channel(0)[1] / s.channel(0)[1];
        assert!((0.5..=2.0).contains(&f));
        for j in 0..2 {
            for (a, b) in s.channel(j).iter().zip(out.channel(j)) {
                assert!((a * f - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_preserves_step_norms() {
        for m in 1..6 {
            let s = sample(m, 25);
            let out = rotate(&s, &mut RngStream::new(m as u64, "r")).unwrap();
            for t in 0..25 {
                let n0: f64 = (0..m).map(|j| s.channel(j)[t].powi(2)).sum::<f64>().sqrt();
                let n1: f64 = (0..m).map(|j| out.channel(j)[t].powi(2)).sum::<f64>().sqrt();
                assert!((n0 - n1).abs() < 1e-9, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn orthogonal_matrix_is_orthogonal() {
        let q = random_orthogonal(4, &mut RngStream::new(3, "q"));
        let i = q.transpose() * &q;
        assert!((i - DMatrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn unit_permutation_keeps_step_multiset() {
        let s = sample(3, 12);
        let out = permute_segments(&s, 12, &mut RngStream::new(2, "p")).unwrap();
        let steps = |x: &Series| {
            let mut v: Vec<Vec<u64>> = (0..12)
                .map(|t| (0..3).map(|j| x.channel(j)[t].to_bits()).collect())
                .collect();
            v.sort();
            v
        };
        assert_eq!(steps(&s), steps(&out));
        assert!(permute_segments(&s, 13, &mut RngStream::new(2, "p")).is_err());
        assert!(permute_segments(&s, 1, &mut RngStream::new(2, "p")).is_err());
    }

    #[test]
    fn time_mask_zeroes_one_window() {
        let s = Series::from_channels("m", vec![vec![1.0; 20], vec![2.0; 20]]).unwrap();
        let out = time_mask(&s, 0.25, MaskFill::Zero, &mut RngStream::new(4, "m")).unwrap();
        for j in 0..2 {
            let zeros: Vec<usize> = (0..20).filter(|&t| out.channel(j)[t] == 0.0).collect();
            assert_eq!(zeros.len(), 5);
            assert_eq!(zeros[4] - zeros[0], 4);
        }
        let mean = time_mask(&s, 0.25, MaskFill::ChannelMean, &mut RngStream::new(4, "m")).unwrap();
        assert_eq!(mean, s);
    }

    #[test]
    fn slice_and_warp_keep_shape_and_range() {
        let s = sample(2, 30);
        let sl = slice_resize(&s, 0.5, &mut RngStream::new(5, "s")).unwrap();
        let ww = window_warp(&s, 0.2, &[0.5, 2.0], &mut RngStream::new(5, "w")).unwrap();
        for out in [&sl, &ww] {
            assert_eq!((out.n_channels(), out.len()), (2, 30));
            for j in 0..2 {
                let (lo, hi) = s.channel(j).iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
                assert!(out.channel(j).iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
            }
        }
        assert!(slice_resize(&s, 0.0, &mut RngStream::new(5, "s")).is_err());
        // Full-length slice is the identity.
        assert_eq!(slice_resize(&s, 1.0, &mut RngStream::new(5, "s")).unwrap(), s);
    }

    #[test]
    fn resample_endpoints_and_linear_ramp() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = resample(&xs, 7);
        assert_eq!(ys, vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(resample(&[5.0], 3), vec![5.0; 3]);
    }
}
