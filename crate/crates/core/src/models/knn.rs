//! Item-item and user-user nearest-neighbor scoring.
//!
//! Scores that would need an empty or zero-weight neighbor sum are reported
//! as NaN ("undefined") and never ranked.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::matrix::RatingMatrix;
use crate::par;

/// Similarity list entry: neighbor index and cosine similarity.
pub type Neighbor = (u32, f64);

fn by_similarity(a: &Neighbor, b: &Neighbor) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

/// Item column vectors used for cosine similarity: either mean-centered
/// ratings or raw (binary) values.
struct ItemVectors {
    /// value per column entry, aligned with `RatingMatrix::col`
    values: Vec<Vec<f64>>,
    norms: Vec<f64>,
    means: Vec<f64>,
}

fn item_vectors(m: &RatingMatrix, center: bool) -> ItemVectors {
    let mut values = Vec::with_capacity(m.n_items());
    let mut norms = Vec::with_capacity(m.n_items());
    let mut means = Vec::with_capacity(m.n_items());
    for i in 0..m.n_items() {
        let (_, vals) = m.col(i);
        let mean = if center && !vals.is_empty() {
            vals.iter().sum::<f64>() / vals.len() as f64
        } else {
            0.0
        };
        let v: Vec<f64> = vals.iter().map(|r| r - mean).collect();
        norms.push(v.iter().map(|x| x * x).sum::<f64>().sqrt());
        values.push(v);
        means.push(mean);
    }
    ItemVectors { values, norms, means }
}

/// All positive item-item cosine similarities (untruncated), sorted by
/// descending similarity. Pairs whose cosine is 0/0 are omitted.
pub fn item_similarities(m: &RatingMatrix, center: bool) -> Vec<Vec<Neighbor>> {
    item_similarities_inner(m, &item_vectors(m, center), None)
}

fn item_similarities_inner(m: &RatingMatrix, vecs: &ItemVectors, limit: Option<usize>) -> Vec<Vec<Neighbor>> {
    // row-aligned copies of the column values, so sums run over co-raters
    // in the same user order for (i, j) and (j, i)
    let mut row_vals = vec![0.0; m.nnz()];
    let mut row_start = Vec::with_capacity(m.n_users() + 1);
    row_start.push(0usize);
    for u in 0..m.n_users() {
        row_start.push(row_start[u] + m.row_len(u));
    }
    for i in 0..m.n_items() {
        let (users, _) = m.col(i);
        for (k, &u) in users.iter().enumerate() {
            let (items, _) = m.row(u as usize);
            let pos = items.binary_search(&(i as u32)).expect("row/column views agree");
            row_vals[row_start[u as usize] + pos] = vecs.values[i][k];
        }
    }

    par::map_range(m.n_items(), |i| {
        if vecs.norms[i] == 0.0 {
            return Vec::new();
        }
        let mut dots = vec![0.0; m.n_items()];
        let mut seen = vec![false; m.n_items()];
        let mut touched: Vec<u32> = Vec::new();
        let (users, _) = m.col(i);
        for (k, &u) in users.iter().enumerate() {
            let ci = vecs.values[i][k];
            let (items, _) = m.row(u as usize);
            let vals = &row_vals[row_start[u as usize]..row_start[u as usize + 1]];
            for (&j, &cj) in items.iter().zip(vals) {
                if j as usize == i {
                    continue;
                }
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    touched.push(j);
                }
                dots[j as usize] += ci * cj;
            }
        }
        let mut out: Vec<Neighbor> = touched
            .into_iter()
            .filter_map(|j| {
                let nj = vecs.norms[j as usize];
                if nj == 0.0 {
                    return None;
                }
                let sim = dots[j as usize] / (vecs.norms[i] * nj);
                (sim > 0.0).then_some((j, sim))
            })
            .collect();
        out.sort_unstable_by(by_similarity);
        if let Some(limit) = limit {
            out.truncate(limit);
        }
        out
    })
}

/// Inverts per-item neighbor lists: `rev[j]` holds every `(i, sim)` with
/// `j` in the list of `i`.
fn reverse_lists(lists: &[Vec<Neighbor>]) -> Vec<Vec<Neighbor>> {
    let mut rev: Vec<Vec<Neighbor>> = vec![Vec::new(); lists.len()];
    for (i, list) in lists.iter().enumerate() {
        for &(j, s) in list {
            rev[j as usize].push((i as u32, s));
        }
    }
    rev
}

/// Item-item kNN on mean-centered ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemKnn {
    pub nnbrs: usize,
    pub min_nbrs: usize,
    pub item_means: Vec<f64>,
    /// Truncated per-item neighbor lists.
    pub neighbors: Vec<Vec<Neighbor>>,
    reverse: Vec<Vec<Neighbor>>,
    pub train: RatingMatrix,
}

impl ItemKnn {
    pub fn fit(m: &RatingMatrix, nnbrs: usize, max_sim_list: usize, min_nbrs: usize) -> Self {
        let vecs = item_vectors(m, true);
        let neighbors = item_similarities_inner(m, &vecs, Some(max_sim_list));
        let reverse = reverse_lists(&neighbors);
        ItemKnn {
            nnbrs,
            min_nbrs: min_nbrs.max(1),
            item_means: vecs.means,
            neighbors,
            reverse,
            train: m.clone(),
        }
    }

    /// Weighted average of the user's ratings on the (at most `nnbrs`) most
    /// similar rated neighbors of each item.
    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|s| *s = f64::NAN);
        let (items, ratings) = self.train.row(user);
        // (candidate, sim, neighbor, rating)
        let mut hits: Vec<(u32, f64, u32, f64)> = Vec::new();
        for (&j, &r) in items.iter().zip(ratings) {
            for &(i, s) in &self.reverse[j as usize] {
                hits.push((i, s, j, r));
            }
        }
        hits.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.total_cmp(&a.1)).then(a.2.cmp(&b.2)));
        for group in hits.chunk_by(|a, b| a.0 == b.0) {
            let used = &group[..group.len().min(self.nnbrs)];
            if used.len() < self.min_nbrs {
                continue;
            }
            let (num, den) = used
                .iter()
                .fold((0.0, 0.0), |(n, d), &(_, s, _, r)| (n + s * r, d + s.abs()));
            if den > 0.0 {
                out[group[0].0 as usize] = num / den;
            }
        }
    }
}

/// Item-item kNN on the binarized matrix: sum of similarities to the user's items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemKnnBinary {
    pub neighbors: Vec<Vec<Neighbor>>,
    reverse: Vec<Vec<Neighbor>>,
    pub train: RatingMatrix,
}

impl ItemKnnBinary {
    pub fn fit(m: &RatingMatrix, max_sim_list: usize) -> Self {
        let bin = if m.is_binarized() { m.clone() } else { m.binarized() };
        let vecs = item_vectors(&bin, false);
        let neighbors = item_similarities_inner(&bin, &vecs, Some(max_sim_list));
        let reverse = reverse_lists(&neighbors);
        ItemKnnBinary {
            neighbors,
            reverse,
            train: bin,
        }
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|s| *s = f64::NAN);
        let (items, _) = self.train.row(user);
        for &j in items {
            for &(i, s) in &self.reverse[j as usize] {
                let slot = &mut out[i as usize];
                *slot = if slot.is_nan() { s } else { *slot + s };
            }
        }
    }
}

/// User-user kNN on mean-centered ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserKnn {
    pub nnbrs: usize,
    pub min_nbrs: usize,
    pub user_means: Vec<f64>,
    user_norms: Vec<f64>,
    pub train: RatingMatrix,
}

impl UserKnn {
    pub fn fit(m: &RatingMatrix, nnbrs: usize, min_nbrs: usize) -> Self {
        let mut user_means = Vec::with_capacity(m.n_users());
        let mut user_norms = Vec::with_capacity(m.n_users());
        for u in 0..m.n_users() {
            let (_, vals) = m.row(u);
            let mean = if vals.is_empty() {
                0.0
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            };
            user_means.push(mean);
            user_norms.push(vals.iter().map(|r| (r - mean).powi(2)).sum::<f64>().sqrt());
        }
        UserKnn {
            nnbrs,
            min_nbrs: min_nbrs.max(1),
            user_means,
            user_norms,
            train: m.clone(),
        }
    }

    /// Cosine similarity of `user`'s centered vector to every user (NaN when undefined).
    pub fn similarities(&self, user: usize) -> Vec<f64> {
        let m = &self.train;
        let mut sims = vec![f64::NAN; m.n_users()];
        if self.user_norms[user] == 0.0 {
            return sims;
        }
        let mut dots = vec![0.0; m.n_users()];
        let (items, vals) = m.row(user);
        for (&i, &r) in items.iter().zip(vals) {
            let cu = r - self.user_means[user];
            let (users, rs) = m.col(i as usize);
            for (&v, &rv) in users.iter().zip(rs) {
                dots[v as usize] += cu * (rv - self.user_means[v as usize]);
            }
        }
        for (v, s) in sims.iter_mut().enumerate() {
            let nv = self.user_norms[v];
            if v != user && nv > 0.0 {
                *s = dots[v] / (self.user_norms[user] * nv);
            }
        }
        sims
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|s| *s = f64::NAN);
        let sims = self.similarities(user);
        let m = &self.train;
        let mut nbrs: Vec<(u32, f64, f64)> = Vec::new();
        for (i, slot) in out.iter_mut().enumerate() {
            nbrs.clear();
            let (users, rs) = m.col(i);
            for (&v, &rv) in users.iter().zip(rs) {
                let s = sims[v as usize];
                if s > 0.0 {
                    nbrs.push((v, s, rv - self.user_means[v as usize]));
                }
            }
            if nbrs.len() < self.min_nbrs {
                continue;
            }
            let cmp = |a: &(u32, f64, f64), b: &(u32, f64, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
            if nbrs.len() > self.nnbrs {
                nbrs.select_nth_unstable_by(self.nnbrs - 1, cmp);
                nbrs.truncate(self.nnbrs);
            }
            nbrs.sort_unstable_by(cmp);
            let (num, den) = nbrs
                .iter()
                .fold((0.0, 0.0), |(n, d), &(_, s, c)| (n + s * c, d + s.abs()));
            if den > 0.0 {
                *slot = self.user_means[user] + num / den;
            }
        }
    }
}
