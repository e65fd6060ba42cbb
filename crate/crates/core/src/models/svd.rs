//! Rank-f truncated SVD by randomized range finding with power iterations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::RatingMatrix;
use super::mf::Factors;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSvd {
    /// Left singular vectors, `n_users x f`.
    pub u: Factors,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors, `n_items x f`.
    pub v: Factors,
    /// `u * diag(sigma)`, cached for scoring.
    scaled_u: Factors,
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

fn orthonormal_basis(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, data).qr().q()
}

impl TruncatedSvd {
    pub fn fit(m: &RatingMatrix, factors: usize, power_iters: usize, oversample: usize, seed: u64) -> Result<Self> {
        let (n_users, n_items) = (m.n_users(), m.n_items());
        let max_rank = n_users.min(n_items);
        if factors == 0 || factors > max_rank {
            return Err(Error::model(
                "svd",
                format!("factor count {factors} must lie in [1, {max_rank}] for a {n_users}x{n_items} matrix"),
            ));
        }
        let width = (factors + oversample).min(max_rank);

        let mut stream = rng::stream(seed);
        let omega: Vec<f64> = (0..n_items * width).map(|_| rng::normal(&mut stream)).collect();
        let mut y = vec![0.0; n_users * width];
        let mut z = vec![0.0; n_items * width];
        m.mul_dense(&omega, width, &mut y);
        let mut q = orthonormal_basis(n_users, width, &y);
        for _ in 0..power_iters {
            m.tmul_dense(&row_major(&q), width, &mut z);
            let qz = orthonormal_basis(n_items, width, &z);
            m.mul_dense(&row_major(&qz), width, &mut y);
            q = orthonormal_basis(n_users, width, &y);
        }

        // B^T = A^T Q  (n_items x width); B^T = U' S V'^T gives A ~ (Q V') S U'^T
        m.tmul_dense(&row_major(&q), width, &mut z);
        let bt = DMatrix::from_row_slice(n_items, width, &z);
        let svd = bt.svd(true, true);
        let (left, right_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::model("svd", "dense decomposition did not converge")),
        };
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        order.truncate(factors);

        let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
        let user_vecs = &q * right_t.transpose();
        let mut u = Factors::filled(n_users, factors, 0.0);
        let mut v = Factors::filled(n_items, factors, 0.0);
        for (c, &k) in order.iter().enumerate() {
            for r in 0..n_users {
                u.data[r * factors + c] = user_vecs[(r, k)];
            }
            for r in 0..n_items {
                v.data[r * factors + c] = left[(r, k)];
            }
        }
        let mut scaled_u = u.clone();
        for r in 0..n_users {
            for (x, s) in scaled_u.row_mut(r).iter_mut().zip(&sigma) {
                *x *= s;
            }
        }
        Ok(TruncatedSvd { u, sigma, v, scaled_u })
    }

    pub fn factors(&self) -> usize {
        self.sigma.len()
    }

    /// Entry `(user, item)` of the rank-f reconstruction.
    pub fn reconstruct(&self, user: usize, item: usize) -> f64 {
        super::mf::dot(self.scaled_u.row(user), self.v.row(item))
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        let su = self.scaled_u.row(user);
        for (i, s) in out.iter_mut().enumerate() {
            *s = super::mf::dot(su, self.v.row(i));
        }
    }
}
