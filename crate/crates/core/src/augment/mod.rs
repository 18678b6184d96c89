//! Augmentation operators and the balance-to-parity protocol.
//!
//! Per-series operators (noise, scaling, rotation, slicing, permutation,
//! masking, window warping, frequency masking) transform one parent series.
//! Class-level synthesizers (SMOTE, Gaussian covariance sampling) draw from the
//! whole class. Every synthetic series produced through [`synthesize`] or
//! [`balance_dataset`] carries a [`SynthesisRecord`].

mod balance;
mod calibrate;
mod freq;
mod gaussian;
mod noise;
mod smote;
mod time_domain;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::{LabeledDataset, LabeledItem, Series};

pub use balance::balance_dataset;
pub use calibrate::{calibrate_noise_level, Calibration, ClassCalibration, Probe};
pub use freq::{freq_mask, freq_mask_with_residue};
pub use gaussian::gaussian_cov_synthesize;
pub use noise::inject_noise;
pub use smote::{smote_neighbor_count, smote_synthesize};
pub use time_domain::{permute_segments, rotate, scale, slice_resize, time_mask, window_warp, MaskFill};

/// Drawn parameters of one synthesis, in draw order.
pub type Params = Vec<(String, f64)>;

/// Provenance of one synthetic series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisRecord {
    pub parent_ids: Vec<String>,
    pub technique: String,
    pub params: Params,
}

/// Which augmentation to apply, with its fixed parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Technique {
    Noise { level: f64 },
    Smote,
    GaussianCov { shrinkage: f64 },
    Scale { low: f64, high: f64 },
    Rotate,
    Slice { ratio: f64 },
    Permute { n_segments: usize },
    TimeMask { ratio: f64, fill: MaskFill },
    FreqMask { ratio: f64 },
    WindowWarp { window_ratio: f64, scales: Vec<f64> },
}

impl Technique {
    pub const DEFAULT_SHRINKAGE: f64 = 0.1;
    pub const DEFAULT_WARP_SCALES: [f64; 2] = [0.5, 2.0];
    pub const DEFAULT_WARP_WINDOW: f64 = 0.1;

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, r: f64| {
            if r > 0.0 && r <= 1.0 {
                Ok(())
            } else {
                Err(Error::RatioOutOfRange(format!("{name} = {r}")))
            }
        };
        match self {
            Technique::Noise { level } if !(level.is_finite() && *level >= 0.0) => {
                Err(Error::InvalidParameter(format!("noise level {level}")))
            }
            Technique::GaussianCov { shrinkage } if !(0.0..=1.0).contains(shrinkage) => {
                Err(Error::RatioOutOfRange(format!("shrinkage = {shrinkage}")))
            }
            Technique::Scale { low, high }
                if !(low.is_finite() && high.is_finite() && low <= high) =>
            {
                Err(Error::InvalidParameter(format!("scale range [{low}, {high}]")))
            }
            Technique::Slice { ratio } => unit("slice ratio", *ratio),
            Technique::TimeMask { ratio, .. } => unit("mask ratio", *ratio),
            Technique::FreqMask { ratio } if !(0.0..=1.0).contains(ratio) => {
                Err(Error::RatioOutOfRange(format!("frequency mask ratio = {ratio}")))
            }
            Technique::Permute { n_segments } if *n_segments < 2 => {
                Err(Error::InvalidParameter(format!("{n_segments} segments")))
            }
            Technique::WindowWarp { window_ratio, scales } => {
                unit("window ratio", *window_ratio)?;
                if scales.is_empty() || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return Err(Error::InvalidParameter(format!("warp scales {scales:?}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Short name used in reports and records.
    pub fn kind(&self) -> &'static str {
        match self {
            Technique::Noise { .. } => "noise",
            Technique::Smote => "smote",
            Technique::GaussianCov { .. } => "gaussian-cov",
            Technique::Scale { .. } => "scale",
            Technique::Rotate => "rotate",
            Technique::Slice { .. } => "slice",
            Technique::Permute { .. } => "permute",
            Technique::TimeMask { .. } => "time-mask",
            Technique::FreqMask { .. } => "freq-mask",
            Technique::WindowWarp { .. } => "window-warp",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Technique::Noise { level } => write!(f, "noise_{level}"),
            Technique::Smote => write!(f, "smote"),
            Technique::GaussianCov { shrinkage } => write!(f, "gaussian-cov:{shrinkage}"),
            Technique::Scale { low, high } => write!(f, "scale:{low}:{high}"),
            Technique::Rotate => write!(f, "rotate"),
            Technique::Slice { ratio } => write!(f, "slice:{ratio}"),
            Technique::Permute { n_segments } => write!(f, "permute:{n_segments}"),
            Technique::TimeMask { ratio, fill: MaskFill::Zero } => write!(f, "time-mask:{ratio}"),
            Technique::TimeMask { ratio, fill: MaskFill::ChannelMean } => {
                write!(f, "time-mask:{ratio}:mean")
            }
            Technique::FreqMask { ratio } => write!(f, "freq-mask:{ratio}"),
            Technique::WindowWarp { window_ratio, scales } => {
                let s: Vec<String> = scales.iter().map(|v| v.to_string()).collect();
                write!(f, "window-warp:{window_ratio}:{}", s.join(","))
            }
        }
    }
}

impl FromStr for Technique {
    type Err = Error;

    /// `name[:arg[:arg]]`, plus the `noise_<level>` shorthand.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse technique {s:?}"));
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        if let Some(level) = s.strip_prefix("noise_") {
            let t = Technique::Noise { level: num(level)? };
            t.validate()?;
            return Ok(t);
        }
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or("").to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let arg = |i: usize, default: f64| args.get(i).map_or(Ok(default), |v| num(v));
        let t = match name.as_str() {
            "noise" => Technique::Noise { level: arg(0, 1.0)? },
            "smote" => Technique::Smote,
            "gaussian-cov" | "gaussian_cov" => Technique::GaussianCov {
                shrinkage: arg(0, Self::DEFAULT_SHRINKAGE)?,
            },
            "scale" => {
                let low = arg(0, 0.8)?;
                Technique::Scale { low, high: arg(1, if args.is_empty() { 1.2 } else { low })? }
            }
            "rotate" => Technique::Rotate,
            "slice" => Technique::Slice { ratio: arg(0, 0.9)? },
            "permute" => Technique::Permute {
                n_segments: args
                    .first()
                    .map_or(Ok(4), |v| v.trim().parse::<usize>().map_err(|_| bad()))?,
            },
            "time-mask" | "time_mask" => {
                let fill = match args.get(1).map(|v| v.trim()) {
                    None | Some("zero") => MaskFill::Zero,
                    Some("mean") => MaskFill::ChannelMean,
                    Some(_) => return Err(bad()),
                };
                Technique::TimeMask { ratio: arg(0, 0.1)?, fill }
            }
            "freq-mask" | "freq_mask" => Technique::FreqMask { ratio: arg(0, 0.1)? },
            "window-warp" | "window_warp" => {
                let scales = match args.get(1) {
                    Some(v) => v.split(',').map(num).collect::<Result<Vec<_>>>()?,
                    None => Self::DEFAULT_WARP_SCALES.to_vec(),
                };
                Technique::WindowWarp {
                    window_ratio: arg(0, Self::DEFAULT_WARP_WINDOW)?,
                    scales,
                }
            }
            _ => return Err(bad()),
        };
        t.validate()?;
        Ok(t)
    }
}

/// A technique bound to the stream it draws from.
#[derive(Clone, Debug)]
pub struct AugmenterSpec {
    pub technique: Technique,
    pub stream: RngStream,
}

impl AugmenterSpec {
    pub fn new(technique: Technique, stream: RngStream) -> Self {
        Self { technique, stream }
    }
}

/// Applies a per-series technique to one parent. Class-level techniques are
/// not per-series and are rejected.
pub fn apply_to_series(
    s: &Series,
    technique: &Technique,
    rng: &mut RngStream,
) -> Result<(Series, Params)> {
    technique.validate()?;
    match technique {
        Technique::Noise { level } => noise::inject_noise_traced(s, *level, rng),
        Technique::Scale { low, high } => time_domain::scale_traced(s, (*low, *high), rng),
        Technique::Rotate => time_domain::rotate_traced(s, rng),
        Technique::Slice { ratio } => time_domain::slice_traced(s, *ratio, rng),
        Technique::Permute { n_segments } => time_domain::permute_traced(s, *n_segments, rng),
        Technique::TimeMask { ratio, fill } => time_domain::time_mask_traced(s, *ratio, *fill, rng),
        Technique::FreqMask { ratio } => {
            freq::freq_mask_traced(s, *ratio, rng).map(|(s, p, _)| (s, p))
        }
        Technique::WindowWarp { window_ratio, scales } => {
            time_domain::window_warp_traced(s, *window_ratio, scales, rng)
        }
        Technique::Smote | Technique::GaussianCov { .. } => Err(Error::InvalidParameter(format!(
            "{} synthesizes from a class, not from one series",
            technique.kind()
        ))),
    }
}

/// Synthesizes `count` new members of class `class_idx`.
///
/// Per-series techniques draw their parent uniformly (with replacement) from
/// the class members before transforming it.
pub fn synthesize(
    ds: &LabeledDataset,
    class_idx: usize,
    count: usize,
    technique: &Technique,
    rng: &mut RngStream,
) -> Result<Vec<(Series, SynthesisRecord)>> {
    technique.validate()?;
    match technique {
        Technique::Smote => smote_synthesize(ds, class_idx, count, rng),
        Technique::GaussianCov { shrinkage } => {
            gaussian_cov_synthesize(ds, class_idx, count, *shrinkage, rng)
        }
        _ => {
            let members = ds.class_members(class_idx);
            if members.is_empty() {
                return Err(Error::EmptyClass(class_idx));
            }
            (0..count)
                .map(|k| {
                    let parent = &ds.items()[members[rng.random_range(0..members.len())]].series;
                    let (out, params) = apply_to_series(parent, technique, rng)?;
                    let id = format!("{}+{}#{k}", parent.id(), technique.kind());
                    Ok((
                        out.with_id(id),
                        SynthesisRecord {
                            parent_ids: vec![parent.id().to_string()],
                            technique: technique.to_string(),
                            params,
                        },
                    ))
                })
                .collect()
        }
    }
}

/// CSV audit log of every synthetic item: `series_id,label,parent_ids,technique,parameters`.
///
/// Parent ids are `;`-separated, parameters are `name=value` pairs separated by `;`.
pub fn audit_csv(ds: &LabeledDataset) -> String {
    let mut out = String::from("series_id,label,parent_ids,technique,parameters\n");
    for item in ds.items() {
        if let Some(rec) = &item.origin {
            let params: Vec<String> = rec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(item.series.id()),
                csv_field(&ds.labels()[item.label]),
                csv_field(&rec.parent_ids.join(";")),
                csv_field(&rec.technique),
                csv_field(&params.join(";"))
            ));
        }
    }
    out
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub(crate) fn synthetic_item(series: Series, label: usize, rec: SynthesisRecord) -> LabeledItem {
    LabeledItem {
        series,
        label,
        origin: Some(rec),
    }
}
