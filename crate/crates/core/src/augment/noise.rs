use rand::Rng;
use rand_distr::StandardNormal;

use super::Params;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::Series;

/// Adds `N(0, level · std_j)` noise to every value of channel `j`, where `std_j`
/// is the population standard deviation of that channel of `s`.
pub fn inject_noise(s: &Series, level: f64, rng: &mut RngStream) -> Result<Series> {
    inject_noise_traced(s, level, rng).map(|(s, _)| s)
}

pub(crate) fn inject_noise_traced(
    s: &Series,
    level: f64,
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    if !(level.is_finite() && level >= 0.0) {
        return Err(Error::InvalidParameter(format!("noise level {level}")));
    }
    s.ensure_observed()?;
    let stds = s.per_channel_std()?;
    let out = s.map_channels(|j, xs| {
        let sd = level * stds[j];
        xs.iter()
            .map(|&x| {
                let z: f64 = rng.sample(StandardNormal);
                x + sd * z
            })
            .collect()
    });
    Ok((out, vec![("level".to_string(), level)]))
}
