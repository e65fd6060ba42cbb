//! nDCG@k with binary relevance, per user and averaged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Recommender;
use crate::par;
use crate::split::{InteractionSet, SplitBundle};

/// DCG of `ranked` (cut at `k`) over the ideal DCG for `relevant`, with
/// discount `1 / log2(position + 1)` and positions counted from 1.
pub fn ndcg_at_k(ranked: &[u32], relevant: &[u32], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("nDCG cutoff must be at least 1"));
    }
    let mut rel = relevant.to_vec();
    rel.sort_unstable();
    rel.dedup();
    if rel.is_empty() {
        return Err(Error::invalid("nDCG needs at least one relevant item"));
    }
    let discount = |pos: usize| 1.0 / ((pos + 1) as f64).log2();
    let dcg: f64 = ranked
        .iter()
        .take(k)
        .enumerate()
        .filter(|(_, item)| rel.binary_search(item).is_ok())
        .map(|(p, _)| discount(p + 1))
        .sum();
    let idcg: f64 = (1..=k.min(rel.len())).map(discount).sum();
    Ok(dcg / idcg)
}

/// Compensated (Neumaier) summation in slice order.
pub fn stable_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub mean: f64,
    pub n_evaluated: usize,
    /// `(user index, nDCG)` in user order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_user: Vec<(usize, f64)>,
}

impl MetricResult {
    pub fn from_per_user(per_user: Vec<(usize, f64)>) -> Self {
        let n = per_user.len();
        let mean = if n == 0 {
            0.0
        } else {
            stable_sum(per_user.iter().map(|&(_, v)| v)) / n as f64
        };
        MetricResult {
            mean,
            n_evaluated: n,
            per_user,
        }
    }

    /// Copy without the per-user breakdown (for compact JSON).
    pub fn summary(&self) -> MetricResult {
        MetricResult {
            mean: self.mean,
            n_evaluated: self.n_evaluated,
            per_user: Vec::new(),
        }
    }
}

/// Scores every user with a nonempty judgment list. Candidates exclude the
/// user's `train` items and `excluded` items.
pub fn evaluate_against<R: Recommender + ?Sized>(
    model: &R,
    train: &InteractionSet,
    excluded: &InteractionSet,
    judgments: &InteractionSet,
    k: usize,
) -> Result<MetricResult> {
    let users: Vec<usize> = judgments.active_users().collect();
    let results = par::map_slice(&users, |&u| -> Result<(usize, f64)> {
        let train_items: Vec<u32> = train.user(u).iter().map(|it| it.item).collect();
        let excluded_items: Vec<u32> = excluded.user(u).iter().map(|it| it.item).collect();
        let relevant: Vec<u32> = judgments.user(u).iter().map(|it| it.item).collect();
        let ranked = model.recommend(u, &train_items, &excluded_items, k)?;
        Ok((u, ndcg_at_k(&ranked.item_ids(), &relevant, k)?))
    });
    let per_user = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MetricResult::from_per_user(per_user))
}

/// Test-set nDCG@k for a model fitted on `downsampled_train`. Validation
/// items are removed from the candidates; training items dropped by
/// downsampling stay in.
pub fn evaluate_model<R: Recommender + ?Sized>(
    model: &R,
    bundle: &SplitBundle,
    downsampled_train: &InteractionSet,
    k: usize,
) -> Result<MetricResult> {
    evaluate_against(model, downsampled_train, &bundle.validation, &bundle.test, k)
}
