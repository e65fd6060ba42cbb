//! Per-user train/validation/test holdout and nested training downsampling.
//!
//! Each user's interactions are shuffled with an independent stream keyed by
//! `(seed, dense user index)` (see [`crate::rng`]); the shuffled list is cut
//! into test, validation and train, and the train part keeps its shuffled
//! order so that downsampled sets are prefixes of it.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Interaction, InteractionDataset, CANONICAL_HEADER};
use crate::{par, rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub test_frac: f64,
    pub valid_frac: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            test_frac: 0.1,
            valid_frac: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn new(test_frac: f64, valid_frac: f64) -> Result<Self> {
        let r = SplitRatios { test_frac, valid_frac };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.test_frac) || !open_unit(self.valid_frac) {
            return Err(Error::invalid(format!(
                "split fractions must lie in (0, 1), got test={} validation={}",
                self.test_frac, self.valid_frac
            )));
        }
        if self.test_frac + self.valid_frac >= 1.0 {
            return Err(Error::invalid("test and validation fractions must sum below 1"));
        }
        Ok(())
    }
}

/// A training-set fraction in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DownsampleLevel(f64);

impl DownsampleLevel {
    pub const FULL: DownsampleLevel = DownsampleLevel(1.0);

    pub fn new(fraction: f64) -> Result<Self> {
        if fraction > 0.0 && fraction <= 1.0 {
            Ok(DownsampleLevel(fraction))
        } else {
            Err(Error::invalid(format!("downsample fraction {fraction} outside (0, 1]")))
        }
    }

    pub fn fraction(self) -> f64 {
        self.0
    }

    /// 0.1, 0.2, ..., 1.0
    pub fn default_grid() -> Vec<DownsampleLevel> {
        (1..=10).map(|i| DownsampleLevel(i as f64 / 10.0)).collect()
    }

    pub fn label(self) -> String {
        format!("{:.2}", self.0)
    }
}

impl TryFrom<f64> for DownsampleLevel {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        DownsampleLevel::new(v)
    }
}

impl From<DownsampleLevel> for f64 {
    fn from(l: DownsampleLevel) -> f64 {
        l.0
    }
}

/// `max(1, round_half_up(frac * n))`. The small epsilon absorbs binary
/// representation error, so 0.1 * 15 counts as exactly 1.5.
pub fn part_size(frac: f64, n: usize) -> usize {
    let x = frac * n as f64;
    ((x + 0.5 + 1e-9).floor() as usize).max(1)
}

/// Interactions grouped by dense user index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteractionSet {
    by_user: Vec<Vec<Interaction>>,
}

impl InteractionSet {
    pub fn from_user_lists(by_user: Vec<Vec<Interaction>>) -> Self {
        Self { by_user }
    }

    /// Groups a flat list; `n_users` fixes the number of slots.
    pub fn from_flat(n_users: usize, rows: impl IntoIterator<Item = Interaction>) -> Self {
        let mut by_user = vec![Vec::new(); n_users];
        for it in rows {
            by_user[it.user as usize].push(it);
        }
        Self { by_user }
    }

    pub fn n_users(&self) -> usize {
        self.by_user.len()
    }

    pub fn user(&self, user: usize) -> &[Interaction] {
        self.by_user.get(user).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.by_user.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_user.iter().all(Vec::is_empty)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interaction> + '_ {
        self.by_user.iter().flatten()
    }

    /// Users holding at least one interaction.
    pub fn active_users(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_user
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(u, _)| u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserCounts {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitBundle {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub n_users: usize,
    pub n_items: usize,
    /// Per-user training interactions in their stored shuffle order.
    pub train: InteractionSet,
    pub validation: InteractionSet,
    pub test: InteractionSet,
    pub dataset_fingerprint: String,
}

pub fn user_holdout_split(ds: &InteractionDataset, ratios: SplitRatios, seed: u64) -> Result<SplitBundle> {
    ratios.validate()?;
    let grouped = InteractionSet::from_flat(ds.n_users(), ds.interactions().iter().copied());

    let parts = par::map_range(ds.n_users(), |u| {
        let mut rows = grouped.by_user[u].clone();
        let n = rows.len();
        if n < 3 {
            return Err(Error::invalid(format!(
                "user '{}' has {n} interaction(s); at least 3 are needed for a train/validation/test split \
                 (was the dataset preprocessed?)",
                ds.users().id(u as u32)
            )));
        }
        let n_test = part_size(ratios.test_frac, n);
        let n_valid = part_size(ratios.valid_frac, n);
        if n_test + n_valid >= n {
            return Err(Error::invalid(format!(
                "user '{}' has {n} interactions, too few for ratios test={} validation={}",
                ds.users().id(u as u32),
                ratios.test_frac,
                ratios.valid_frac
            )));
        }
        let mut stream = rng::indexed_stream(seed, u as u64);
        rng::shuffle(&mut stream, &mut rows);
        let train = rows.split_off(n_test + n_valid);
        let valid = rows.split_off(n_test);
        Ok((train, valid, rows))
    });

    let mut train = Vec::with_capacity(ds.n_users());
    let mut validation = Vec::with_capacity(ds.n_users());
    let mut test = Vec::with_capacity(ds.n_users());
    for part in parts {
        let (tr, va, te) = part?;
        train.push(tr);
        validation.push(va);
        test.push(te);
    }
    Ok(SplitBundle {
        seed,
        ratios,
        n_users: ds.n_users(),
        n_items: ds.n_items(),
        train: InteractionSet::from_user_lists(train),
        validation: InteractionSet::from_user_lists(validation),
        test: InteractionSet::from_user_lists(test),
        dataset_fingerprint: ds.fingerprint(),
    })
}

/// First `max(1, round(fraction * n_u))` training interactions of each user's
/// stored shuffle. Prefixes make the result nested across fractions.
pub fn downsample_train(bundle: &SplitBundle, level: DownsampleLevel) -> InteractionSet {
    let by_user = par::map_range(bundle.train.n_users(), |u| {
        let rows = bundle.train.user(u);
        if rows.is_empty() {
            return Vec::new();
        }
        let keep = part_size(level.fraction(), rows.len()).min(rows.len());
        rows[..keep].to_vec()
    });
    InteractionSet::from_user_lists(by_user)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub n_users: usize,
    pub n_items: usize,
    pub dataset_fingerprint: String,
    pub counts: Vec<UserCountsEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserCountsEntry {
    pub user: String,
    #[serde(flatten)]
    pub counts: UserCounts,
}

impl SplitBundle {
    pub fn user_counts(&self, user: usize) -> UserCounts {
        UserCounts {
            train: self.train.user(user).len(),
            validation: self.validation.user(user).len(),
            test: self.test.user(user).len(),
        }
    }

    pub fn manifest(&self, ds: &InteractionDataset) -> SplitManifest {
        SplitManifest {
            seed: self.seed,
            ratios: self.ratios,
            n_users: self.n_users,
            n_items: self.n_items,
            dataset_fingerprint: self.dataset_fingerprint.clone(),
            counts: (0..self.n_users)
                .map(|u| UserCountsEntry {
                    user: ds.users().id(u as u32).to_string(),
                    counts: self.user_counts(u),
                })
                .collect(),
        }
    }

    /// Writes `train.csv`, `validation.csv`, `test.csv` (canonical format,
    /// training rows in stored shuffle order) and `manifest.json`.
    pub fn save(&self, ds: &InteractionDataset, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, set) in [
            ("train.csv", &self.train),
            ("validation.csv", &self.validation),
            ("test.csv", &self.test),
        ] {
            let path = dir.join(name);
            write_set(ds, set, &path)?;
        }
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&self.manifest(ds))?;
        fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))
    }
}

fn write_set(ds: &InteractionDataset, set: &InteractionSet, path: &Path) -> Result<()> {
    let sub = ds.reindexed(set.iter().copied());
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res = if sub.is_empty() {
        writeln!(w, "{CANONICAL_HEADER}")
    } else {
        sub.write_canonical(&mut w)
    };
    res.and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}
