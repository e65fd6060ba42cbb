use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Interaction;

/// Sparse user-item matrix with both row (user) and column (item) views.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingMatrix {
    n_users: usize,
    n_items: usize,
    binarized: bool,
    row_ptr: Vec<usize>,
    row_items: Vec<u32>,
    row_vals: Vec<f64>,
    col_ptr: Vec<usize>,
    col_users: Vec<u32>,
    col_vals: Vec<f64>,
}

pub fn build_matrix<'a, I>(train: I, n_users: usize, n_items: usize, binarize: bool) -> Result<RatingMatrix>
where
    I: IntoIterator<Item = &'a Interaction>,
{
    let mut triples: Vec<(u32, u32, f64)> = Vec::new();
    for it in train {
        if it.user as usize >= n_users || it.item as usize >= n_items {
            return Err(Error::invalid(format!(
                "interaction ({}, {}) outside a {n_users}x{n_items} matrix",
                it.user, it.item
            )));
        }
        triples.push((it.user, it.item, if binarize { 1.0 } else { it.rating }));
    }
    RatingMatrix::from_triples(n_users, n_items, triples, binarize)
}

impl RatingMatrix {
    fn from_triples(n_users: usize, n_items: usize, mut triples: Vec<(u32, u32, f64)>, binarized: bool) -> Result<Self> {
        triples.sort_unstable_by_key(|&(u, i, _)| (u, i));
        if let Some(w) = triples.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::invalid(format!("duplicate entry for user {} item {}", w[0].0, w[0].1)));
        }
        let nnz = triples.len();
        let mut row_ptr = vec![0usize; n_users + 1];
        let mut col_ptr = vec![0usize; n_items + 1];
        for &(u, i, _) in &triples {
            row_ptr[u as usize + 1] += 1;
            col_ptr[i as usize + 1] += 1;
        }
        for k in 0..n_users {
            row_ptr[k + 1] += row_ptr[k];
        }
        for k in 0..n_items {
            col_ptr[k + 1] += col_ptr[k];
        }
        let row_items: Vec<u32> = triples.iter().map(|t| t.1).collect();
        let row_vals: Vec<f64> = triples.iter().map(|t| t.2).collect();

        // rows are visited in user order, so each column fills in increasing user order
        let mut col_users = vec![0u32; nnz];
        let mut col_vals = vec![0.0; nnz];
        let mut fill = col_ptr.clone();
        for &(u, i, v) in &triples {
            let slot = &mut fill[i as usize];
            col_users[*slot] = u;
            col_vals[*slot] = v;
            *slot += 1;
        }
        Ok(RatingMatrix {
            n_users,
            n_items,
            binarized,
            row_ptr,
            row_items,
            row_vals,
            col_ptr,
            col_users,
            col_vals,
        })
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn nnz(&self) -> usize {
        self.row_items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_items.is_empty()
    }

    pub fn is_binarized(&self) -> bool {
        self.binarized
    }

    /// Item indices and values of one user's row, sorted by item.
    pub fn row(&self, user: usize) -> (&[u32], &[f64]) {
        let r = self.row_ptr[user]..self.row_ptr[user + 1];
        (&self.row_items[r.clone()], &self.row_vals[r])
    }

    /// User indices and values of one item's column, sorted by user.
    pub fn col(&self, item: usize) -> (&[u32], &[f64]) {
        let r = self.col_ptr[item]..self.col_ptr[item + 1];
        (&self.col_users[r.clone()], &self.col_vals[r])
    }

    pub fn row_len(&self, user: usize) -> usize {
        self.row_ptr[user + 1] - self.row_ptr[user]
    }

    pub fn col_len(&self, item: usize) -> usize {
        self.col_ptr[item + 1] - self.col_ptr[item]
    }

    /// All `(user, item, value)` triples in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_users).flat_map(move |u| {
            let (items, vals) = self.row(u);
            items.iter().zip(vals).map(move |(&i, &v)| (u, i as usize, v))
        })
    }

    pub fn mean(&self) -> Option<f64> {
        if self.is_empty() {
            None
        } else {
            Some(self.row_vals.iter().sum::<f64>() / self.nnz() as f64)
        }
    }

    /// Copy with every stored value replaced by 1.0.
    pub fn binarized(&self) -> RatingMatrix {
        let mut m = self.clone();
        m.row_vals.iter_mut().for_each(|v| *v = 1.0);
        m.col_vals.iter_mut().for_each(|v| *v = 1.0);
        m.binarized = true;
        m
    }

    /// `out = self * dense`, with `dense` row-major `n_items x width`
    /// and `out` row-major `n_users x width`.
    pub fn mul_dense(&self, dense: &[f64], width: usize, out: &mut [f64]) {
        debug_assert_eq!(dense.len(), self.n_items * width);
        debug_assert_eq!(out.len(), self.n_users * width);
        out.iter_mut().for_each(|v| *v = 0.0);
        for u in 0..self.n_users {
            let (items, vals) = self.row(u);
            let dst = &mut out[u * width..(u + 1) * width];
            for (&i, &v) in items.iter().zip(vals) {
                let src = &dense[i as usize * width..(i as usize + 1) * width];
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += v * s);
            }
        }
    }

    /// `out = self^T * dense`, with `dense` row-major `n_users x width`
    /// and `out` row-major `n_items x width`.
    pub fn tmul_dense(&self, dense: &[f64], width: usize, out: &mut [f64]) {
        debug_assert_eq!(dense.len(), self.n_users * width);
        debug_assert_eq!(out.len(), self.n_items * width);
        out.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n_items {
            let (users, vals) = self.col(i);
            let dst = &mut out[i * width..(i + 1) * width];
            for (&u, &v) in users.iter().zip(vals) {
                let src = &dense[u as usize * width..(u as usize + 1) * width];
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += v * s);
            }
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.row_vals.iter().map(|v| v * v).sum()
    }
}
