use rand::Rng;

use super::noise::inject_noise;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::{LabeledDataset, Series};

/// One noisy probe drawn during calibration.
#[derive(Clone, Debug)]
pub struct Probe {
    pub class: usize,
    pub level: f64,
    pub sample: Series,
    /// Label of the nearest original series.
    pub nearest_label: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassCalibration {
    pub level: f64,
    /// `false` when no level preserved labels and the smallest one was returned.
    pub qualified: bool,
}

#[derive(Clone, Debug)]
pub struct Calibration {
    pub per_class: Vec<ClassCalibration>,
    pub probes: Vec<Probe>,
}

/// Picks, per class, the largest noise level whose probes all keep their label
/// under 1-NN against the original items (Euclidean on flattened series).
///
/// Each (class, level) pair draws `trials` probes from the child stream
/// `class<c>/level<i>`: a uniformly drawn class member plus noise.
pub fn calibrate_noise_level(
    ds: &LabeledDataset,
    levels: &[f64],
    trials: usize,
    rng: &RngStream,
) -> Result<Calibration> {
    if ds.n_labels() < 2 {
        return Err(Error::InvalidParameter("calibration needs at least two classes".into()));
    }
    if levels.is_empty() || levels.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("levels must be non-empty and ascending".into()));
    }
    ds.ensure_observed_equal_len()?;
    let originals: Vec<(Vec<f64>, usize)> = ds
        .items()
        .iter()
        .filter(|i| !i.is_synthetic())
        .map(|i| Ok((i.series.flatten()?, i.label)))
        .collect::<Result<_>>()?;

    let mut per_class = Vec::with_capacity(ds.n_labels());
    let mut probes = Vec::new();
    for class in 0..ds.n_labels() {
        let members = ds.class_members(class);
        if members.is_empty() {
            return Err(Error::EmptyClass(class));
        }
        let mut best = None;
        for (li, &level) in levels.iter().enumerate() {
            let mut stream = rng.split(format!("class{class}/level{li}"));
            let mut preserved = true;
            for _ in 0..trials {
                let parent = &ds.items()[members[stream.random_range(0..members.len())]].series;
                let sample = inject_noise(parent, level, &mut stream)?;
                let nearest_label = nearest_label(&originals, &sample.flatten()?);
                preserved &= nearest_label == class;
                probes.push(Probe { class, level, sample, nearest_label });
            }
            if preserved {
                best = Some(level);
            }
        }
        per_class.push(match best {
            Some(level) => ClassCalibration { level, qualified: true },
            None => ClassCalibration { level: levels[0], qualified: false },
        });
    }
    Ok(Calibration { per_class, probes })
}

fn nearest_label(originals: &[(Vec<f64>, usize)], x: &[f64]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (v, label) in originals {
        let d: f64 = v.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best.0 {
            best = (d, *label);
        }
    }
    best.1
}
