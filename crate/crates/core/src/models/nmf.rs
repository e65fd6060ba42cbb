//! Nonnegative matrix factorization with multiplicative updates on the
//! squared Frobenius error `||V - W H||^2` (all cells, unobserved ones as 0).

use serde::{Deserialize, Serialize};

use super::matrix::RatingMatrix;
use super::mf::{dot, Factors};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nmf {
    /// `n_users x f`
    pub w: Factors,
    /// Transposed item factors `H^T`, `n_items x f`.
    pub ht: Factors,
}

/// `a^T b` for two row-major matrices with the same row count.
fn gram(a: &Factors, b: &Factors) -> Vec<f64> {
    let f = a.width;
    let mut g = vec![0.0; f * f];
    for r in 0..a.rows {
        let (ra, rb) = (a.row(r), b.row(r));
        for (k, &x) in ra.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let dst = &mut g[k * f..(k + 1) * f];
            dst.iter_mut().zip(rb).for_each(|(d, y)| *d += x * y);
        }
    }
    g
}

/// In place: `x <- x * num / (x g)` elementwise, with `g` symmetric `f x f`.
fn multiplicative_step(x: &mut Factors, num: &[f64], g: &[f64]) {
    let f = x.width;
    let mut den = vec![0.0; f];
    for r in 0..x.rows {
        let row = x.row_mut(r);
        den.iter_mut().for_each(|d| *d = 0.0);
        for (k, &v) in row.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            den.iter_mut().zip(&g[k * f..(k + 1) * f]).for_each(|(d, gk)| *d += v * gk);
        }
        let nrow = &num[r * f..(r + 1) * f];
        for ((v, &n), &d) in row.iter_mut().zip(nrow).zip(&den) {
            *v = if d > 0.0 { *v * n / d } else { 0.0 };
        }
    }
}

impl Nmf {
    /// Factors drawn uniformly from (0, 1).
    pub fn init(n_users: usize, n_items: usize, factors: usize, seed: u64) -> Result<Self> {
        if factors == 0 {
            return Err(Error::model("nmf", "factor count must be at least 1"));
        }
        let mut stream = rng::stream(seed);
        let mut draw = |rows: usize| Factors {
            rows,
            width: factors,
            data: (0..rows * factors).map(|_| rng::open_unit_f64(&mut stream)).collect(),
        };
        let w = draw(n_users);
        let ht = draw(n_items);
        Ok(Nmf { w, ht })
    }

    pub fn fit(m: &RatingMatrix, factors: usize, iterations: usize, seed: u64) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::model("nmf", "iteration count must be at least 1"));
        }
        let mut model = Nmf::init(m.n_users(), m.n_items(), factors, seed)?;
        for _ in 0..iterations {
            model.update_h(m);
            model.update_w(m);
        }
        Ok(model)
    }

    /// `H <- H * (W^T V) / (W^T W H)`
    pub fn update_h(&mut self, m: &RatingMatrix) {
        let f = self.w.width;
        let mut num = vec![0.0; m.n_items() * f];
        m.tmul_dense(&self.w.data, f, &mut num);
        let g = gram(&self.w, &self.w);
        multiplicative_step(&mut self.ht, &num, &g);
    }

    /// `W <- W * (V H^T) / (W H H^T)`
    pub fn update_w(&mut self, m: &RatingMatrix) {
        let f = self.w.width;
        let mut num = vec![0.0; m.n_users() * f];
        m.mul_dense(&self.ht.data, f, &mut num);
        let g = gram(&self.ht, &self.ht);
        multiplicative_step(&mut self.w, &num, &g);
    }

    /// `||V||^2 - 2 <V, WH> + <W^T W, H H^T>`
    pub fn objective(&self, m: &RatingMatrix) -> f64 {
        let cross: f64 = m
            .triples()
            .map(|(u, i, v)| v * dot(self.w.row(u), self.ht.row(i)))
            .sum();
        let gw = gram(&self.w, &self.w);
        let gh = gram(&self.ht, &self.ht);
        let quad: f64 = gw.iter().zip(&gh).map(|(a, b)| a * b).sum();
        m.frobenius_sq() - 2.0 * cross + quad
    }

    pub fn predict(&self, user: usize, item: usize) -> f64 {
        dot(self.w.row(user), self.ht.row(item))
    }

    pub fn score_into(&self, user: usize, out: &mut [f64]) {
        let wu = self.w.row(user);
        for (i, s) in out.iter_mut().enumerate() {
            *s = dot(wu, self.ht.row(i));
        }
    }
}
