use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const KERNEL_LENGTHS: [usize; 3] = [7, 9, 11];
pub const DEFAULT_KERNEL_COUNT: usize = 10_000;

/// One random dilated convolution kernel over a subset of channels.
///
/// `weights` is row-major, one row of `length` taps per entry of `channels`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub length: usize,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub dilation: usize,
    pub padding: usize,
    pub channels: Vec<usize>,
}

impl Kernel {
    pub fn row(&self, r: usize) -> &[f64] {
        &self.weights[r * self.length..(r + 1) * self.length]
    }

    /// Number of convolution outputs on a series of length `t`.
    pub fn output_len(&self, t: usize) -> usize {
        (t + 2 * self.padding).saturating_sub((self.length - 1) * self.dilation)
    }
}

/// A generated kernel collection plus the input shape it was drawn for.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBank {
    pub kernels: Vec<Kernel>,
    pub input_length: usize,
    pub input_channels: usize,
    pub seed: u64,
    pub stream_label: String,
}

impl KernelBank {
    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        2 * self.kernels.len()
    }
}

/// Draws `n` kernels for series of `t` steps and `m` channels.
///
/// Per kernel: length uniform over {7, 9, 11} (restricted to lengths ≤ `t`),
/// weights i.i.d. standard normal then centred per row, bias `U[−1, 1]`,
/// dilation `⌊2^x⌋` with `x ~ U[0, log₂((t−1)/(length−1))]`, padding
/// `(length−1)·dilation/2` with probability ½, and `2^c` channels with `c`
/// uniform over `0..=⌊log₂ m⌋`.
pub fn generate_kernels(n: usize, t: usize, m: usize, rng: &mut RngStream) -> Result<KernelBank> {
    if t < KERNEL_LENGTHS[0] {
        return Err(Error::SeriesTooShort(t));
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!("{n} kernels over {m} channels")));
    }
    let lengths: Vec<usize> = KERNEL_LENGTHS.iter().copied().filter(|&l| l <= t).collect();
    let max_pow = m.ilog2();
    let mut kernels = Vec::with_capacity(n);
    for _ in 0..n {
        let length = lengths[rng.random_range(0..lengths.len())];
        let n_chan = 1usize << rng.random_range(0..=max_pow);
        let mut channels = sample(rng, m, n_chan).into_vec();
        channels.sort_unstable();

        let mut weights: Vec<f64> = (0..n_chan * length)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        for row in weights.chunks_mut(length) {
            let mean = row.iter().sum::<f64>() / length as f64;
            row.iter_mut().for_each(|w| *w -= mean);
        }
        let bias = rng.random_range(-1.0..=1.0);

        let upper = ((t - 1) as f64 / (length - 1) as f64).log2();
        let x = if upper > 0.0 { rng.random_range(0.0..=upper) } else { 0.0 };
        let dilation = (2f64.powf(x) as usize).clamp(1, (t - 1) / (length - 1));
        let padding = if rng.random_bool(0.5) {
            (length - 1) * dilation / 2
        } else {
            0
        };
        kernels.push(Kernel {
            length,
            weights,
            bias,
            dilation,
            padding,
            channels,
        });
    }
    Ok(KernelBank {
        kernels,
        input_length: t,
        input_channels: m,
        seed: rng.seed(),
        stream_label: rng.label().to_string(),
    })
}

const BANK_MAGIC: &str = "tsaug-kernel-bank 1";

/// Text serialization; floats use shortest round-trip formatting, so
/// [`read_bank`] restores the bank exactly.
pub fn write_bank(bank: &KernelBank) -> String {
    let mut out = String::new();
    writeln!(out, "{BANK_MAGIC}").unwrap();
    writeln!(out, "input_length {}", bank.input_length).unwrap();
    writeln!(out, "input_channels {}", bank.input_channels).unwrap();
    writeln!(out, "seed {} {}", bank.seed, bank.stream_label).unwrap();
    writeln!(out, "kernels {}", bank.kernels.len()).unwrap();
    for k in &bank.kernels {
        let ch: Vec<String> = k.channels.iter().map(|c| c.to_string()).collect();
        let w: Vec<String> = k.weights.iter().map(|v| format!("{v:?}")).collect();
        writeln!(
            out,
            "{} {} {} {:?} {} {}",
            k.length,
            k.dilation,
            k.padding,
            k.bias,
            ch.join(","),
            w.join(",")
        )
        .unwrap();
    }
    out
}

pub fn read_bank(text: &str) -> Result<KernelBank> {
    let bad = |line: usize, msg: &str| Error::InvalidParameter(format!("kernel bank line {line}: {msg}"));
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| lines.next().ok_or_else(|| bad(0, &format!("missing {what}")));

    let (ln, magic) = next("magic")?;
    if magic.trim() != BANK_MAGIC {
        return Err(bad(ln, "unsupported format"));
    }
    let field = |(ln, l): (usize, &str), key: &str| -> Result<String> {
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(ln, &format!("expected {key}")))
    };
    let num = |ln: usize, s: &str| s.trim().parse::<usize>().map_err(|_| bad(ln, "bad integer"));

    let l = next("input_length")?;
    let input_length = num(l.0, &field(l, "input_length")?)?;
    let l = next("input_channels")?;
    let input_channels = num(l.0, &field(l, "input_channels")?)?;
    let l = next("seed")?;
    let seed_line = field(l, "seed")?;
    let (seed, stream_label) = seed_line.split_once(' ').unwrap_or((seed_line.as_str(), ""));
    let seed = seed.parse::<u64>().map_err(|_| bad(l.0, "bad seed"))?;
    let l = next("kernels")?;
    let count = num(l.0, &field(l, "kernels")?)?;

    let mut kernels = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, line) = next("kernel")?;
        let parts: Vec<&str> = line.split(' ').collect();
        if parts.len() != 6 {
            return Err(bad(ln, "expected 6 fields"));
        }
        let length = num(ln, parts[0])?;
        let dilation = num(ln, parts[1])?;
        let padding = num(ln, parts[2])?;
        let bias: f64 = parts[3].parse().map_err(|_| bad(ln, "bad bias"))?;
        let channels = parts[4]
            .split(',')
            .map(|c| num(ln, c))
            .collect::<Result<Vec<_>>>()?;
        let weights = parts[5]
            .split(',')
            .map(|w| w.parse::<f64>().map_err(|_| bad(ln, "bad weight")))
            .collect::<Result<Vec<_>>>()?;
        if length == 0 || dilation == 0 || weights.len() != channels.len() * length {
            return Err(bad(ln, "inconsistent kernel shape"));
        }
        kernels.push(Kernel {
            length,
            weights,
            bias,
            dilation,
            padding,
            channels,
        });
    }
    Ok(KernelBank {
        kernels,
        input_length,
        input_channels,
        seed,
        stream_label: stream_label.to_string(),
    })
}
