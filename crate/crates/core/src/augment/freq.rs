use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::Params;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::Series;

/// Zeroes one random contiguous band of `⌈ratio·T/2⌉` positive-frequency bins
/// (and their conjugate mirrors) in every channel. The DC bin is never masked.
/// `ratio = 0` is the identity; `ratio = 1` leaves only the channel mean.
pub fn freq_mask(s: &Series, ratio: f64, rng: &mut RngStream) -> Result<Series> {
    freq_mask_traced(s, ratio, rng).map(|(s, _, _)| s)
}

/// As [`freq_mask`], also returning the largest imaginary magnitude left by the
/// inverse transform before it was discarded.
pub fn freq_mask_with_residue(s: &Series, ratio: f64, rng: &mut RngStream) -> Result<(Series, f64)> {
    freq_mask_traced(s, ratio, rng).map(|(s, _, r)| (s, r))
}

pub(crate) fn freq_mask_traced(
    s: &Series,
    ratio: f64,
    rng: &mut RngStream,
) -> Result<(Series, Params, f64)> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::RatioOutOfRange(format!("frequency mask ratio = {ratio}")));
    }
    s.ensure_observed()?;
    let t = s.len();
    let positive = t / 2;
    let band = ((ratio * t as f64 / 2.0).ceil() as usize).min(positive);
    if band == 0 {
        return Ok((s.clone(), vec![("start".into(), 0.0), ("bins".into(), 0.0)], 0.0));
    }
    let start = rng.random_range(1..=positive - band + 1);

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(t);
    let inverse = planner.plan_fft_inverse(t);
    let mut residue = 0.0f64;
    let out = s.map_channels(|_, xs| {
        let mut buf: Vec<Complex<f64>> = xs.iter().map(|&x| Complex::new(x, 0.0)).collect();
        forward.process(&mut buf);
        for k in start..start + band {
            buf[k] = Complex::new(0.0, 0.0);
            buf[t - k] = Complex::new(0.0, 0.0);
        }
        inverse.process(&mut buf);
        let scale = 1.0 / t as f64;
        buf.iter()
            .map(|c| {
                residue = residue.max((c.im * scale).abs());
                c.re * scale
            })
            .collect()
    });
    Ok((
        out,
        vec![("start".into(), start as f64), ("bins".into(), band as f64)],
        residue,
    ))
}
