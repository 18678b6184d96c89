use rayon::prelude::*;

use super::{synthesize, synthetic_item, AugmenterSpec};
use crate::error::{Error, Result};
use crate::series::LabeledDataset;

/// Tops every class up to the largest class count with `spec.technique`.
///
/// Originals are kept unchanged and in order; synthetic items are appended
/// class by class. Class `c` draws from the child stream `class<c>` of
/// `spec.stream`, so classes can be synthesized concurrently.
pub fn balance_dataset(ds: &LabeledDataset, spec: &AugmenterSpec) -> Result<LabeledDataset> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    ds.ensure_observed_equal_len()?;
    spec.technique.validate()?;
    let counts = ds.class_counts();
    let target = counts.iter().copied().max().unwrap_or(0);

    let synthetic: Vec<Vec<_>> = counts
        .par_iter()
        .enumerate()
        .map(|(class, &n)| {
            if n == 0 || n >= target {
                return Ok(Vec::new());
            }
            let mut rng = spec.stream.split(format!("class{class}"));
            synthesize(ds, class, target - n, &spec.technique, &mut rng).map(|v| {
                v.into_iter()
                    .map(|(s, rec)| synthetic_item(s, class, rec))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;

    let mut items = ds.items().to_vec();
    items.extend(synthetic.into_iter().flatten());
    Ok(ds.replace_items(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::series::Series;

    fn abc(counts: &[usize]) -> LabeledDataset {
        let mut ds = LabeledDataset::new("b", vec!["A".into(), "B".into(), "C".into()]);
        let mut k = 0;
        for (c, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                let row = (0..8).map(|t| (t * (k + 1)) as f64 + c as f64 * 10.0).collect();
                ds.push(Series::from_channels(format!("s{k}"), vec![row]).unwrap(), c).unwrap();
                k += 1;
            }
        }
        ds
    }

    fn spec(t: &str) -> AugmenterSpec {
        AugmenterSpec::new(t.parse().unwrap(), RngStream::new(11, "bal"))
    }

    #[test]
    fn tops_up_to_majority() {
        let ds = abc(&[5, 3, 5]);
        let out = balance_dataset(&ds, &spec("noise_1")).unwrap();
        assert_eq!(out.class_counts(), vec![5, 5, 5]);
        assert_eq!(&out.items()[..13], ds.items());
        let added: Vec<_> = out.items()[13..].iter().collect();
        assert_eq!(added.len(), 2);
        assert!(added.iter().all(|i| i.label == 1 && i.is_synthetic()));
    }

    #[test]
    fn balanced_input_unchanged() {
        let ds = abc(&[4, 4, 4]);
        assert_eq!(balance_dataset(&ds, &spec("smote")).unwrap(), ds);
    }

    #[test]
    fn every_technique_balances_and_keeps_shape() {
        let ds = abc(&[6, 2, 1]);
        for t in [
            "noise_3", "smote", "gaussian-cov", "scale", "rotate", "slice:0.5", "permute:3",
            "time-mask:0.2", "freq-mask:0.3", "window-warp:0.3:0.5,2",
        ] {
            let out = balance_dataset(&ds, &spec(t)).unwrap();
            assert_eq!(out.class_counts(), vec![6, 6, 6], "{t}");
            for item in out.items() {
                assert_eq!((item.series.n_channels(), item.series.len()), (1, 8), "{t}");
            }
            // Replay is bit-identical.
            assert_eq!(out, balance_dataset(&ds, &spec(t)).unwrap(), "{t}");
        }
    }

    #[test]
    fn parents_belong_to_the_class() {
        let ds = abc(&[7, 2, 4]);
        let out = balance_dataset(&ds, &spec("noise_5")).unwrap();
        for item in out.items().iter().filter(|i| i.is_synthetic()) {
            let rec = item.origin.as_ref().unwrap();
            for pid in &rec.parent_ids {
                let parent = ds.items().iter().find(|i| i.series.id() == pid).unwrap();
                assert_eq!(parent.label, item.label);
            }
        }
    }
}
