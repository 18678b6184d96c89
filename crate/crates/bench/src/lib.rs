//! Synthetic inputs shared by the criterion benchmarks.

use rand::Rng;
use tsaug::{LabeledDataset, RngStream, Series};

/// `counts[c]` series of class `c`, `channels × len`, class-dependent offset
/// plus uniform noise.
pub fn synthetic(counts: &[usize], channels: usize, len: usize, seed: u64) -> LabeledDataset {
    let mut rng = RngStream::new(seed, "bench/data");
    let labels = (0..counts.len()).map(|c| format!("c{c}")).collect();
    let mut ds = LabeledDataset::new("bench", labels);
    let mut id = 0;
    for (class, &n) in counts.iter().enumerate() {
        for _ in 0..n {
            let rows = (0..channels)
                .map(|_| (0..len).map(|_| class as f64 + rng.random_range(-1.0..1.0)).collect())
                .collect();
            ds.push(Series::from_channels(format!("s{id}"), rows).expect("valid shape"), class)
                .expect("valid label");
            id += 1;
        }
    }
    ds
}
