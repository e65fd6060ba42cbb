//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use greenlens::ingest::{parse_interactions, DatasetBuilder, Format, InteractionDataset, ParseOptions, RatingScale};
use greenlens::runner::DATA_DIR_ENV;

pub const ML100K: &str = "ml-100k/u.data";
pub const ML1M: &str = "ml-1m/ratings.dat";

fn data_root() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

/// Location of a MovieLens file, if it is installed.
pub fn dataset_path(relative: &str) -> Option<PathBuf> {
    let path = data_root().join(relative);
    path.is_file().then_some(path)
}

pub fn load(relative: &str, format: Format) -> Option<InteractionDataset> {
    let path = dataset_path(relative)?;
    Some(parse_interactions(&path, format, &ParseOptions::default()).expect("dataset parses"))
}

/// Dataset from `(user, item, rating)` index triples, ids rendered as `u{n}` / `i{n}`.
pub fn from_triples(rows: &[(u32, u32, f64)]) -> InteractionDataset {
    let mut b = DatasetBuilder::new(RatingScale::new(0.5, 5.0, None));
    for &(u, i, r) in rows {
        b.push(&format!("u{u}"), &format!("i{i}"), r, None).unwrap();
    }
    b.build()
}

/// DCG / IDCG straight from the definition.
pub fn ndcg_oracle(ranked: &[u32], relevant: &BTreeSet<u32>, k: usize) -> f64 {
    let gain = |pos: usize| std::f64::consts::LN_2 / ((pos + 1) as f64).ln();
    let mut dcg = 0.0;
    for (idx, item) in ranked.iter().enumerate() {
        if idx >= k {
            break;
        }
        if relevant.contains(item) {
            dcg += gain(idx + 1);
        }
    }
    let mut idcg = 0.0;
    for pos in 1..=relevant.len().min(k) {
        idcg += gain(pos);
    }
    dcg / idcg
}

/// Remove every user and item below `k` until nothing changes.
pub fn k_core_oracle(edges: &BTreeSet<(String, String)>, k: usize) -> BTreeSet<(String, String)> {
    let mut live = edges.clone();
    loop {
        let mut users: BTreeMap<&str, usize> = BTreeMap::new();
        let mut items: BTreeMap<&str, usize> = BTreeMap::new();
        for (u, i) in &live {
            *users.entry(u).or_default() += 1;
            *items.entry(i).or_default() += 1;
        }
        let next: BTreeSet<(String, String)> = live
            .iter()
            .filter(|(u, i)| users[u.as_str()] >= k && items[i.as_str()] >= k)
            .cloned()
            .collect();
        if next.len() == live.len() {
            return next;
        }
        live = next;
    }
}

pub fn edge_set(ds: &InteractionDataset) -> BTreeSet<(String, String)> {
    ds.interactions()
        .iter()
        .map(|it| (ds.users().id(it.user).to_string(), ds.items().id(it.item).to_string()))
        .collect()
}
