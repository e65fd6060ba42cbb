//! SGD-trained matrix factorization: FunkSVD and biased MF.

use serde::{Deserialize, Serialize};

use super::baseline::BiasModel;
use super::matrix::RatingMatrix;
use crate::error::{Error, Result};
use crate::rng;

/// Dense row-major factor matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factors {
    pub rows: usize,
    pub width: usize,
    pub data: Vec<f64>,
}

impl Factors {
    pub fn filled(rows: usize, width: usize, value: f64) -> Self {
        Factors {
            rows,
            width,
            data: vec![value; rows * width],
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.width..(r + 1) * self.width]
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdParams {
    pub factors: usize,
    pub lr: f64,
    pub reg: f64,
    pub epochs: usize,
}

impl SgdParams {
    fn validate(&self, kind: &str) -> Result<()> {
        if self.factors == 0 || self.epochs == 0 {
            return Err(Error::model(kind, "factor and epoch counts must be at least 1"));
        }
        if !(self.lr > 0.0) {
            return Err(Error::model(kind, format!("learning rate must be positive, got {}", self.lr)));
        }
        if !(self.reg >= 0.0) {
            return Err(Error::model(kind, "regularization must be non-negative"));
        }
        Ok(())
    }
}

fn training_triples(m: &RatingMatrix) -> Vec<(u32, u32, f64)> {
    m.triples().map(|(u, i, r)| (u as u32, i as u32, r)).collect()
}

/// Features trained one at a time on the residual of all earlier features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunkSvd {
    pub user_factors: Factors,
    pub item_factors: Factors,
}

/// Starting value of every factor entry when its feature begins training.
const FUNK_INIT: f64 = 0.1;

impl FunkSvd {
    pub fn fit(m: &RatingMatrix, p: SgdParams, seed: u64) -> Result<Self> {
        p.validate("funk_svd")?;
        let mut triples = training_triples(m);
        let mut users = Factors::filled(m.n_users(), p.factors, FUNK_INIT);
        let mut items = Factors::filled(m.n_items(), p.factors, FUNK_INIT);
        // prediction contribution of already-trained features, per triple
        let mut base: Vec<f64> = vec![0.0; triples.len()];
        let mut order: Vec<usize> = (0..triples.len()).collect();
        let mut stream = rng::stream(seed);

        for f in 0..p.factors {
            for _ in 0..p.epochs {
                rng::shuffle(&mut stream, &mut order);
                for &t in &order {
                    let (u, i, r) = triples[t];
                    let uf = users.data[u as usize * p.factors + f];
                    let itf = items.data[i as usize * p.factors + f];
                    let err = r - (base[t] + uf * itf);
                    users.data[u as usize * p.factors + f] = uf + p.lr * (err * itf - p.reg * uf);
                    items.data[i as usize * p.factors + f] = itf + p.lr * (err * uf - p.reg * itf);
                }
            }
            for (t, &(u, i, _)) in triples.iter().enumerate() {
                base[t] += users.data[u as usize * p.factors + f] * items.data[i as usize * p.factors + f];
            }
        }
        triples.clear();
        Ok(FunkSvd {
            user_factors: users,
            item_factors: items,
        })
    }

    pub fn predict(&self, user: usize, item: usize) -> f64 {
        dot(self.user_factors.row(user), self.item_factors.row(item))
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        let pu = self.user_factors.row(user);
        for (i, s) in out.iter_mut().enumerate() {
            *s = dot(pu, self.item_factors.row(i));
        }
    }
}

/// `mu + b_u + b_i + <p_u, q_i>`, all terms trained jointly by SGD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasedMf {
    pub global_mean: f64,
    pub user_bias: Vec<f64>,
    pub item_bias: Vec<f64>,
    pub user_factors: Factors,
    pub item_factors: Factors,
}

/// Standard deviation of the initial factor entries.
const MF_INIT_SCALE: f64 = 0.1;

impl BiasedMf {
    pub fn fit(m: &RatingMatrix, p: SgdParams, damping: f64, seed: u64) -> Result<Self> {
        p.validate("biased_mf")?;
        let bias = BiasModel::fit(m, damping).map_err(|_| Error::model("biased_mf", "cannot fit on an empty matrix"))?;
        let mut init = rng::stream(rng::derive_seed(&[seed, 1]));
        let mut gauss = |n: usize| -> Vec<f64> { (0..n).map(|_| rng::normal(&mut init) * MF_INIT_SCALE).collect() };
        let mut users = Factors {
            rows: m.n_users(),
            width: p.factors,
            data: gauss(m.n_users() * p.factors),
        };
        let mut items = Factors {
            rows: m.n_items(),
            width: p.factors,
            data: gauss(m.n_items() * p.factors),
        };
        let mut user_bias = bias.user_offsets;
        let mut item_bias = bias.item_offsets;
        let mu = bias.global_mean;

        let triples = training_triples(m);
        let mut order: Vec<usize> = (0..triples.len()).collect();
        let mut stream = rng::stream(rng::derive_seed(&[seed, 2]));
        for _ in 0..p.epochs {
            rng::shuffle(&mut stream, &mut order);
            for &t in &order {
                let (u, i, r) = triples[t];
                let (u, i) = (u as usize, i as usize);
                let pu = users.row(u);
                let qi = items.row(i);
                let err = r - (mu + user_bias[u] + item_bias[i] + dot(pu, qi));
                user_bias[u] += p.lr * (err - p.reg * user_bias[u]);
                item_bias[i] += p.lr * (err - p.reg * item_bias[i]);
                let (pu, qi) = (users.row_mut(u), items.row_mut(i));
                for (a, b) in pu.iter_mut().zip(qi.iter_mut()) {
                    let (ua, ib) = (*a, *b);
                    *a = ua + p.lr * (err * ib - p.reg * ua);
                    *b = ib + p.lr * (err * ua - p.reg * ib);
                }
            }
        }
        Ok(BiasedMf {
            global_mean: mu,
            user_bias,
            item_bias,
            user_factors: users,
            item_factors: items,
        })
    }

    pub fn predict(&self, user: usize, item: usize) -> f64 {
        self.global_mean
            + self.user_bias[user]
            + self.item_bias[item]
            + dot(self.user_factors.row(user), self.item_factors.row(item))
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        let pu = self.user_factors.row(user);
        let base = self.global_mean + self.user_bias[user];
        for (i, s) in out.iter_mut().enumerate() {
            *s = base + self.item_bias[i] + dot(pu, self.item_factors.row(i));
        }
    }
}
