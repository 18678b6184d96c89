use rand::Rng;

use super::SynthesisRecord;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::{LabeledDataset, Series};

/// Neighbour count for a class of `n` members: `min(5, n − 1)`.
pub fn smote_neighbor_count(n: usize) -> usize {
    n.saturating_sub(1).min(5)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// SMOTE interpolation inside class `class_idx`.
///
/// Each synthetic vector is `x + λ·(nbr − x)` with `x` a uniformly drawn class
/// member, `nbr` one of its `min(5, n − 1)` nearest same-class neighbours
/// (Euclidean on flattened series, ties broken by position) and `λ ~ U[0, 1)`.
/// A singleton class is duplicated.
pub fn smote_synthesize(
    ds: &LabeledDataset,
    class_idx: usize,
    count: usize,
    rng: &mut RngStream,
) -> Result<Vec<(Series, SynthesisRecord)>> {
    let members = ds.class_members(class_idx);
    if members.is_empty() {
        return Err(Error::EmptyClass(class_idx));
    }
    let (m, t) = ds.ensure_observed_equal_len()?;
    let flats: Vec<Vec<f64>> = members
        .iter()
        .map(|&i| ds.items()[i].series.flatten())
        .collect::<Result<_>>()?;
    let k = smote_neighbor_count(members.len());

    let neighbours: Vec<Vec<usize>> = (0..members.len())
        .map(|a| {
            let mut others: Vec<(f64, usize)> = (0..members.len())
                .filter(|&b| b != a)
                .map(|b| (sq_dist(&flats[a], &flats[b]), b))
                .collect();
            others.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            others.into_iter().take(k).map(|(_, b)| b).collect()
        })
        .collect();

    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let a = rng.random_range(0..members.len());
        let parent = &ds.items()[members[a]].series;
        let (flat, record) = if k == 0 {
            (
                flats[a].clone(),
                SynthesisRecord {
                    parent_ids: vec![parent.id().to_string()],
                    technique: "smote".into(),
                    params: vec![("duplicate".into(), 1.0)],
                },
            )
        } else {
            let b = neighbours[a][rng.random_range(0..k)];
            let lambda: f64 = rng.random();
            let flat = flats[a]
                .iter()
                .zip(&flats[b])
                .map(|(x, y)| x + lambda * (y - x))
                .collect();
            (
                flat,
                SynthesisRecord {
                    parent_ids: vec![
                        parent.id().to_string(),
                        ds.items()[members[b]].series.id().to_string(),
                    ],
                    technique: "smote".into(),
                    params: vec![("lambda".into(), lambda), ("k".into(), k as f64)],
                },
            )
        };
        let id = format!("{}+smote#{n}", parent.id());
        out.push((Series::from_flat(id, flat, m, t)?, record));
    }
    Ok(out)
}
