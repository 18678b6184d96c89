use rand::Rng;
use rand_distr::StandardNormal;

use super::SynthesisRecord;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::{LabeledDataset, Series};

/// Samples from `N(μ, (1−γ)·S + γ·diag(S))` fitted to the flattened members of
/// class `class_idx` (`S` the population covariance, `γ` the shrinkage).
///
/// The covariance is never formed. With `Z` the centred `n × d` member matrix,
/// `Σ = B·Bᵀ` for `B = [√((1−γ)/n)·Zᵀ | √γ·diag(S)^½]`, so a draw is
/// `μ + √((1−γ)/n)·Zᵀg + √γ·diag(S)^½·h` with `g ~ N(0, I_n)` and
/// `h ~ N(0, I_d)`. Rank-deficient `S` therefore needs no special handling.
pub fn gaussian_cov_synthesize(
    ds: &LabeledDataset,
    class_idx: usize,
    count: usize,
    shrinkage: f64,
    rng: &mut RngStream,
) -> Result<Vec<(Series, SynthesisRecord)>> {
    if !(0.0..=1.0).contains(&shrinkage) {
        return Err(Error::RatioOutOfRange(format!("shrinkage = {shrinkage}")));
    }
    let members = ds.class_members(class_idx);
    if members.is_empty() {
        return Err(Error::EmptyClass(class_idx));
    }
    let (m, t) = ds.ensure_observed_equal_len()?;
    let d = m * t;
    let n = members.len();
    let flats: Vec<Vec<f64>> = members
        .iter()
        .map(|&i| ds.items()[i].series.flatten())
        .collect::<Result<_>>()?;

    let mut mean = vec![0.0; d];
    for f in &flats {
        for (acc, v) in mean.iter_mut().zip(f) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= n as f64);
    let centred: Vec<Vec<f64>> = flats
        .iter()
        .map(|f| f.iter().zip(&mean).map(|(v, mu)| v - mu).collect())
        .collect();
    let diag_sd: Vec<f64> = (0..d)
        .map(|c| (centred.iter().map(|z| z[c] * z[c]).sum::<f64>() / n as f64).sqrt())
        .collect();

    let low_rank = ((1.0 - shrinkage) / n as f64).sqrt();
    let diag_scale = shrinkage.sqrt();
    let parent_ids: Vec<String> = members
        .iter()
        .map(|&i| ds.items()[i].series.id().to_string())
        .collect();

    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut x = mean.clone();
        if low_rank > 0.0 {
            for z in &centred {
                let g: f64 = rng.sample(StandardNormal);
                let w = low_rank * g;
                for (xi, zi) in x.iter_mut().zip(z) {
                    *xi += w * zi;
                }
            }
        }
        if diag_scale > 0.0 {
            for (xi, sd) in x.iter_mut().zip(&diag_sd) {
                let h: f64 = rng.sample(StandardNormal);
                *xi += diag_scale * sd * h;
            }
        }
        let id = format!("{}:class{class_idx}+gaussian-cov#{k}", ds.name());
        out.push((
            Series::from_flat(id, x, m, t)?,
            SynthesisRecord {
                parent_ids: parent_ids.clone(),
                technique: format!("gaussian-cov:{shrinkage}"),
                params: vec![("shrinkage".into(), shrinkage)],
            },
        ));
    }
    Ok(out)
}
