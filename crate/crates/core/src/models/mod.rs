//! The recommender roster behind one fit/recommend contract.

pub mod baseline;
pub mod knn;
pub mod matrix;
pub mod mf;
pub mod nmf;
pub mod spec;
pub mod svd;

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ingest::Interaction;

pub use matrix::{build_matrix, RatingMatrix};
pub use spec::{AlgorithmKind, AlgorithmSpec, Hyperparams};

use baseline::{BiasModel, Popularity, RandomScorer};
use knn::{ItemKnn, ItemKnnBinary, UserKnn};
use mf::{BiasedMf, FunkSvd, SgdParams};
use nmf::Nmf;
use svd::TruncatedSvd;

/// Bumped whenever the serialized layout of [`FittedModel`] changes.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Top-k recommendations for one user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub user: usize,
    /// `(item, score)`, best first.
    pub items: Vec<(u32, f64)>,
}

impl RankedList {
    pub fn item_ids(&self) -> Vec<u32> {
        self.items.iter().map(|&(i, _)| i).collect()
    }
}

/// Anything that can score every item for a user. Undefined scores are NaN.
pub trait Recommender: Sync {
    fn n_users(&self) -> usize;
    fn n_items(&self) -> usize;
    fn score_into(&self, user: usize, out: &mut [f64]);

    /// Top-`k` scoreable items outside `train_items` and `excluded`, by
    /// descending score with ties going to the lower item index.
    fn recommend(&self, user: usize, train_items: &[u32], excluded: &[u32], k: usize) -> Result<RankedList> {
        if user >= self.n_users() {
            return Err(Error::invalid(format!(
                "unknown user index {user} (model has {} users)",
                self.n_users()
            )));
        }
        let mut scores = vec![0.0; self.n_items()];
        self.score_into(user, &mut scores);
        for &i in train_items.iter().chain(excluded) {
            if let Some(s) = scores.get_mut(i as usize) {
                *s = f64::NAN;
            }
        }
        Ok(RankedList {
            user,
            items: top_k(&scores, k),
        })
    }
}

fn rank_order(a: &(u32, f64), b: &(u32, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

/// Best `k` non-NaN entries of `scores` as `(index, score)`.
pub fn top_k(scores: &[f64], k: usize) -> Vec<(u32, f64)> {
    let mut best: Vec<(u32, f64)> = Vec::with_capacity(k + 1);
    if k == 0 {
        return best;
    }
    // indices arrive in ascending order, so an equal score never displaces
    for (i, &s) in scores.iter().enumerate() {
        if s.is_nan() {
            continue;
        }
        if best.len() == k && s.total_cmp(&best[k - 1].1) != Ordering::Greater {
            continue;
        }
        let cand = (i as u32, s);
        let pos = best.partition_point(|x| rank_order(x, &cand) == Ordering::Less);
        best.insert(pos, cand);
        best.truncate(k);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelState {
    Random(RandomScorer),
    Popularity(Popularity),
    Bias(BiasModel),
    UserKnn(UserKnn),
    ItemKnn(ItemKnn),
    ItemKnnBinary(ItemKnnBinary),
    FunkSvd(FunkSvd),
    BiasedMf(BiasedMf),
    Svd(TruncatedSvd),
    Nmf(Nmf),
}

/// Immutable trained state of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub format_version: u32,
    pub spec: AlgorithmSpec,
    pub n_users: usize,
    pub n_items: usize,
    /// SHA-256 over the training triples the model saw.
    pub training_fingerprint: String,
    pub state: ModelState,
}

impl FittedModel {
    pub fn save_json(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: FittedModel = serde_json::from_str(&text)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "model artifact version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                model.format_version
            )));
        }
        Ok(model)
    }
}

impl Recommender for FittedModel {
    fn n_users(&self) -> usize {
        self.n_users
    }

    fn n_items(&self) -> usize {
        self.n_items
    }

    fn score_into(&self, user: usize, out: &mut [f64]) {
        match &self.state {
            ModelState::Random(m) => m.score_into(user, out),
            ModelState::Popularity(m) => m.score_into(out),
            ModelState::Bias(m) => m.score_into(user, out),
            ModelState::UserKnn(m) => m.score_into(user, out),
            ModelState::ItemKnn(m) => m.score_into(user, out),
            ModelState::ItemKnnBinary(m) => m.score_into(user, out),
            ModelState::FunkSvd(m) => m.score_into(user, out),
            ModelState::BiasedMf(m) => m.score_into(user, out),
            ModelState::Svd(m) => m.score_into(user, out),
            ModelState::Nmf(m) => m.score_into(user, out),
        }
    }
}

fn matrix_fingerprint(m: &RatingMatrix) -> String {
    let mut h = Sha256::new();
    h.update((m.n_users() as u64).to_le_bytes());
    h.update((m.n_items() as u64).to_le_bytes());
    for (u, i, v) in m.triples() {
        h.update((u as u32).to_le_bytes());
        h.update((i as u32).to_le_bytes());
        h.update(v.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn wrap(spec: &AlgorithmSpec, m: &RatingMatrix, state: ModelState) -> FittedModel {
    FittedModel {
        format_version: MODEL_FORMAT_VERSION,
        spec: spec.clone(),
        n_users: m.n_users(),
        n_items: m.n_items(),
        training_fingerprint: matrix_fingerprint(m),
        state,
    }
}

fn expect_kind(spec: &AlgorithmSpec, allowed: &[AlgorithmKind], family: &str) -> Result<()> {
    if allowed.contains(&spec.kind) {
        spec.validate()
    } else {
        Err(Error::model(spec.kind, format!("not a {family} algorithm")))
    }
}

pub fn fit_baseline(spec: &AlgorithmSpec, m: &RatingMatrix) -> Result<FittedModel> {
    use AlgorithmKind::*;
    expect_kind(spec, &[Random, Popularity, PopularityBinary, Bias], "baseline")?;
    let state = match spec.kind {
        Random => ModelState::Random(RandomScorer { seed: spec.seed }),
        Popularity | PopularityBinary => ModelState::Popularity(baseline::Popularity::fit(m)),
        Bias => ModelState::Bias(BiasModel::fit(m, spec.float("damping"))?),
        _ => unreachable!(),
    };
    Ok(wrap(spec, m, state))
}

pub fn fit_neighborhood(spec: &AlgorithmSpec, m: &RatingMatrix) -> Result<FittedModel> {
    use AlgorithmKind::*;
    expect_kind(spec, &[UserKnn, ItemKnn, ItemKnnBinary], "neighborhood")?;
    let state = match spec.kind {
        UserKnn => ModelState::UserKnn(knn::UserKnn::fit(m, spec.count("nnbrs"), spec.count("min_nbrs"))),
        ItemKnn => ModelState::ItemKnn(knn::ItemKnn::fit(
            m,
            spec.count("nnbrs"),
            spec.count("max_sim_list"),
            spec.count("min_nbrs"),
        )),
        ItemKnnBinary => ModelState::ItemKnnBinary(knn::ItemKnnBinary::fit(m, spec.count("max_sim_list"))),
        _ => unreachable!(),
    };
    Ok(wrap(spec, m, state))
}

pub fn fit_factorization(spec: &AlgorithmSpec, m: &RatingMatrix) -> Result<FittedModel> {
    use AlgorithmKind::*;
    expect_kind(spec, &[FunkSvd, BiasedMf, Svd, Nmf], "factorization")?;
    let sgd = || SgdParams {
        factors: spec.count("factors"),
        lr: spec.float("lr"),
        reg: spec.float("reg"),
        epochs: spec.count("epochs"),
    };
    let state = match spec.kind {
        FunkSvd => ModelState::FunkSvd(mf::FunkSvd::fit(m, sgd(), spec.seed)?),
        BiasedMf => ModelState::BiasedMf(mf::BiasedMf::fit(m, sgd(), spec.float("damping"), spec.seed)?),
        Svd => ModelState::Svd(TruncatedSvd::fit(
            m,
            spec.count("factors"),
            spec.count("power_iters"),
            spec.count("oversample"),
            spec.seed,
        )?),
        Nmf => ModelState::Nmf(nmf::Nmf::fit(m, spec.count("factors"), spec.count("iterations"), spec.seed)?),
        _ => unreachable!(),
    };
    Ok(wrap(spec, m, state))
}

/// Fits any kind, binarizing the matrix first when the spec asks for it.
pub fn fit(spec: &AlgorithmSpec, m: &RatingMatrix) -> Result<FittedModel> {
    let binarized;
    let m = if spec.binarize() && !m.is_binarized() {
        binarized = m.binarized();
        &binarized
    } else {
        m
    };
    use AlgorithmKind::*;
    match spec.kind {
        Random | Popularity | PopularityBinary | Bias => fit_baseline(spec, m),
        UserKnn | ItemKnn | ItemKnnBinary => fit_neighborhood(spec, m),
        FunkSvd | BiasedMf | Svd | Nmf => fit_factorization(spec, m),
    }
}

/// Builds the matrix for `train` and fits `spec` on it.
pub fn fit_on<'a, I>(spec: &AlgorithmSpec, train: I, n_users: usize, n_items: usize) -> Result<FittedModel>
where
    I: IntoIterator<Item = &'a Interaction>,
{
    let m = build_matrix(train, n_users, n_items, spec.binarize())?;
    fit(spec, &m)
}
