//! Duplicate removal, rating averaging and k-core pruning.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{dataset_stats, Interaction, InteractionDataset, StatsRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCoreParams {
    k: usize,
}

impl KCoreParams {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k-core threshold must be at least 1"));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Collapses exact duplicate rows, then averages the remaining ratings of
/// each (user, item) pair. The merged row keeps the group's latest timestamp
/// and sits at the position of the group's first row.
pub fn dedup_average(ds: &InteractionDataset) -> InteractionDataset {
    struct Group {
        rows: Vec<(u64, Option<i64>)>,
    }
    let mut order: Vec<(u32, u32)> = Vec::new();
    let mut groups: HashMap<(u32, u32), Group> = HashMap::with_capacity(ds.len());
    for it in ds.interactions() {
        let key = (it.user, it.item);
        let row = (it.rating.to_bits(), it.timestamp);
        match groups.entry(key) {
            Entry::Vacant(v) => {
                order.push(key);
                v.insert(Group { rows: vec![row] });
            }
            Entry::Occupied(mut o) => {
                let g = o.get_mut();
                if !g.rows.contains(&row) {
                    g.rows.push(row);
                }
            }
        }
    }
    let merged = order.into_iter().map(|(user, item)| {
        let g = &groups[&(user, item)];
        let sum: f64 = g.rows.iter().map(|(bits, _)| f64::from_bits(*bits)).sum();
        Interaction {
            user,
            item,
            rating: sum / g.rows.len() as f64,
            timestamp: g.rows.iter().filter_map(|(_, ts)| *ts).max(),
        }
    });
    ds.reindexed(merged)
}

/// Maximal sub-dataset where every user and item has at least `k`
/// interactions, found by peeling violators until a fixed point.
///
/// Expects unique (user, item) pairs.
pub fn k_core(ds: &InteractionDataset, params: KCoreParams) -> InteractionDataset {
    let k = params.k();
    let rows = ds.interactions();
    let (n_users, n_items) = (ds.n_users(), ds.n_items());

    // node ids: users in [0, n_users), items in [n_users, n_users + n_items)
    let n_nodes = n_users + n_items;
    let mut degree = vec![0usize; n_nodes];
    for it in rows {
        degree[it.user as usize] += 1;
        degree[n_users + it.item as usize] += 1;
    }
    let mut offsets = vec![0usize; n_nodes + 1];
    for (node, d) in degree.iter().enumerate() {
        offsets[node + 1] = offsets[node] + d;
    }
    let mut fill = offsets.clone();
    let mut neighbors = vec![0u32; offsets[n_nodes]];
    for it in rows {
        let (u, i) = (it.user as usize, n_users + it.item as usize);
        neighbors[fill[u]] = i as u32;
        fill[u] += 1;
        neighbors[fill[i]] = u as u32;
        fill[i] += 1;
    }

    let mut alive = vec![true; n_nodes];
    let mut stack: Vec<usize> = (0..n_nodes).filter(|&n| degree[n] < k).collect();
    while let Some(node) = stack.pop() {
        if !alive[node] {
            continue;
        }
        alive[node] = false;
        for &other in &neighbors[offsets[node]..offsets[node + 1]] {
            let other = other as usize;
            if alive[other] {
                degree[other] -= 1;
                if degree[other] + 1 == k {
                    stack.push(other);
                }
            }
        }
    }

    ds.reindexed(
        rows.iter()
            .filter(|it| alive[it.user as usize] && alive[n_users + it.item as usize])
            .copied(),
    )
}

/// One round of pruning against the original counts (no cascade).
pub fn k_core_single_pass(ds: &InteractionDataset, params: KCoreParams) -> InteractionDataset {
    let k = params.k();
    let mut user_deg = vec![0usize; ds.n_users()];
    let mut item_deg = vec![0usize; ds.n_items()];
    for it in ds.interactions() {
        user_deg[it.user as usize] += 1;
        item_deg[it.item as usize] += 1;
    }
    ds.reindexed(
        ds.interactions()
            .iter()
            .filter(|it| user_deg[it.user as usize] >= k && item_deg[it.item as usize] >= k)
            .copied(),
    )
}

pub fn preprocess_pipeline(ds: &InteractionDataset, k: usize) -> Result<InteractionDataset> {
    let params = KCoreParams::new(k)?;
    Ok(k_core(&dedup_average(ds), params))
}

/// Before/after statistics written next to a preprocessed dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessSummary {
    pub k: usize,
    pub before: Option<StatsRow>,
    pub after: Option<StatsRow>,
    /// Statistics of one non-cascading pruning round over the deduplicated
    /// data, kept for comparison with the fixed-point result.
    pub single_pass_after: Option<StatsRow>,
}

/// Runs the pipeline and collects the summary alongside the result.
pub fn preprocess_with_summary(
    ds: &InteractionDataset,
    k: usize,
) -> Result<(InteractionDataset, PreprocessSummary)> {
    let params = KCoreParams::new(k)?;
    let deduped = dedup_average(ds);
    let out = k_core(&deduped, params);
    let single = k_core_single_pass(&deduped, params);
    let summary = PreprocessSummary {
        k,
        before: dataset_stats(ds).ok(),
        after: dataset_stats(&out).ok(),
        single_pass_after: dataset_stats(&single).ok(),
    };
    Ok((out, summary))
}
