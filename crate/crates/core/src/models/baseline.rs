//! Random, popularity and damped-bias baselines.

use serde::{Deserialize, Serialize};

use super::matrix::RatingMatrix;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomScorer {
    pub seed: u64,
}

impl RandomScorer {
    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        for (item, s) in out.iter_mut().enumerate() {
            *s = rng::hash_unit(self.seed, user as u64, item as u64);
        }
    }
}

/// Scores every item by its number of training interactions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Popularity {
    pub counts: Vec<f64>,
}

impl Popularity {
    pub fn fit(m: &RatingMatrix) -> Self {
        Popularity {
            counts: (0..m.n_items()).map(|i| m.col_len(i) as f64).collect(),
        }
    }

    pub fn score_into(&self, out: &mut [f64]) {
        out.copy_from_slice(&self.counts);
    }
}

/// Global mean plus damped item and user offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasModel {
    pub global_mean: f64,
    pub item_offsets: Vec<f64>,
    pub user_offsets: Vec<f64>,
}

impl BiasModel {
    pub fn fit(m: &RatingMatrix, damping: f64) -> Result<Self> {
        let global_mean = m
            .mean()
            .ok_or_else(|| Error::model("bias", "cannot fit on an empty matrix"))?;
        let damped = |sum: f64, n: usize| {
            let den = damping + n as f64;
            if den > 0.0 {
                sum / den
            } else {
                0.0
            }
        };
        let item_offsets: Vec<f64> = (0..m.n_items())
            .map(|i| {
                let (_, vals) = m.col(i);
                damped(vals.iter().map(|r| r - global_mean).sum(), vals.len())
            })
            .collect();
        let user_offsets = (0..m.n_users())
            .map(|u| {
                let (items, vals) = m.row(u);
                let sum = items
                    .iter()
                    .zip(vals)
                    .map(|(&i, r)| r - global_mean - item_offsets[i as usize])
                    .sum();
                damped(sum, items.len())
            })
            .collect();
        Ok(BiasModel {
            global_mean,
            item_offsets,
            user_offsets,
        })
    }

    pub fn predict(&self, user: usize, item: usize) -> f64 {
        self.global_mean + self.item_offsets[item] + self.user_offsets[user]
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        let base = self.global_mean + self.user_offsets[user];
        for (s, b) in out.iter_mut().zip(&self.item_offsets) {
            *s = base + b;
        }
    }
}
