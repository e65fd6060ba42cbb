use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Random,
    Popularity,
    PopularityBinary,
    Bias,
    UserKnn,
    ItemKnn,
    ItemKnnBinary,
    FunkSvd,
    BiasedMf,
    Svd,
    Nmf,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 11] = [
        AlgorithmKind::Random,
        AlgorithmKind::Popularity,
        AlgorithmKind::PopularityBinary,
        AlgorithmKind::Bias,
        AlgorithmKind::UserKnn,
        AlgorithmKind::ItemKnn,
        AlgorithmKind::ItemKnnBinary,
        AlgorithmKind::FunkSvd,
        AlgorithmKind::BiasedMf,
        AlgorithmKind::Svd,
        AlgorithmKind::Nmf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Random => "random",
            AlgorithmKind::Popularity => "popularity",
            AlgorithmKind::PopularityBinary => "popularity_binary",
            AlgorithmKind::Bias => "bias",
            AlgorithmKind::UserKnn => "user_knn",
            AlgorithmKind::ItemKnn => "item_knn",
            AlgorithmKind::ItemKnnBinary => "item_knn_binary",
            AlgorithmKind::FunkSvd => "funk_svd",
            AlgorithmKind::BiasedMf => "biased_mf",
            AlgorithmKind::Svd => "svd",
            AlgorithmKind::Nmf => "nmf",
        }
    }

    /// Implicit-feedback style algorithms train on the binarized matrix by default.
    pub fn binarized_by_default(self) -> bool {
        matches!(
            self,
            AlgorithmKind::PopularityBinary | AlgorithmKind::ItemKnnBinary | AlgorithmKind::Svd | AlgorithmKind::Nmf
        )
    }

    /// Default hyperparameters.
    pub fn defaults(self) -> Hyperparams {
        let pairs: &[(&str, f64)] = match self {
            AlgorithmKind::Random | AlgorithmKind::Popularity | AlgorithmKind::PopularityBinary => &[],
            AlgorithmKind::Bias => &[("damping", 5.0)],
            AlgorithmKind::UserKnn => &[("nnbrs", 20.0), ("min_nbrs", 1.0)],
            AlgorithmKind::ItemKnn => &[("nnbrs", 20.0), ("max_sim_list", 100.0), ("min_nbrs", 1.0)],
            AlgorithmKind::ItemKnnBinary => &[("max_sim_list", 100.0)],
            AlgorithmKind::FunkSvd => &[("factors", 50.0), ("lr", 0.005), ("reg", 0.02), ("epochs", 10.0)],
            AlgorithmKind::BiasedMf => &[
                ("factors", 50.0),
                ("lr", 0.005),
                ("reg", 0.02),
                ("epochs", 20.0),
                ("damping", 5.0),
            ],
            AlgorithmKind::Svd => &[("factors", 100.0), ("power_iters", 2.0), ("oversample", 10.0)],
            AlgorithmKind::Nmf => &[("factors", 50.0), ("iterations", 100.0)],
        };
        let mut hp = Hyperparams::from_pairs(pairs);
        if matches!(self, AlgorithmKind::Svd | AlgorithmKind::Nmf) {
            hp.set("binarize", 1.0);
        }
        hp
    }

    /// Ten-point tuning grid (singleton for parameter-free kinds).
    pub fn default_grid(self) -> Vec<Hyperparams> {
        let base = self.defaults();
        let vary = |key: &str, values: &[f64]| -> Vec<Hyperparams> {
            values
                .iter()
                .map(|&v| {
                    let mut hp = base.clone();
                    hp.set(key, v);
                    hp
                })
                .collect()
        };
        let pairs = |(ka, kb): (&str, &str), values: &[(f64, f64)]| -> Vec<Hyperparams> {
            values
                .iter()
                .map(|&(a, b)| {
                    let mut hp = base.clone();
                    hp.set(ka, a);
                    hp.set(kb, b);
                    hp
                })
                .collect()
        };
        match self {
            AlgorithmKind::Random | AlgorithmKind::Popularity | AlgorithmKind::PopularityBinary => vec![base],
            AlgorithmKind::Bias => vary("damping", &[0.0, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0, 250.0, 500.0]),
            // rating predictors rank thinly supported items too high unless
            // a minimum neighbor count is enforced, so min_nbrs is tuned as well
            AlgorithmKind::UserKnn | AlgorithmKind::ItemKnn => pairs(
                ("nnbrs", "min_nbrs"),
                &[
                    (20.0, 1.0),
                    (20.0, 5.0),
                    (20.0, 10.0),
                    (20.0, 20.0),
                    (30.0, 10.0),
                    (30.0, 20.0),
                    (50.0, 10.0),
                    (50.0, 20.0),
                    (50.0, 30.0),
                    (100.0, 20.0),
                ],
            ),
            AlgorithmKind::ItemKnnBinary => {
                vary("max_sim_list", &[10.0, 20.0, 30.0, 50.0, 75.0, 100.0, 150.0, 200.0, 300.0, 500.0])
            }
            AlgorithmKind::FunkSvd => {
                let mut grid = Vec::new();
                for &f in &[10.0, 25.0, 50.0, 75.0, 100.0] {
                    for &lr in &[0.001, 0.005] {
                        let mut hp = base.clone();
                        hp.set("factors", f);
                        hp.set("lr", lr);
                        grid.push(hp);
                    }
                }
                grid
            }
            AlgorithmKind::BiasedMf => {
                let mut grid = Vec::new();
                for &lr in &[0.005, 0.001] {
                    for &damping in &[5.0, 25.0, 100.0, 250.0, 500.0] {
                        let mut hp = base.clone();
                        hp.set("lr", lr);
                        hp.set("damping", damping);
                        grid.push(hp);
                    }
                }
                grid
            }
            AlgorithmKind::Svd => vary("factors", &[5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0, 75.0, 100.0, 150.0]),
            AlgorithmKind::Nmf => vary("factors", &[5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0, 75.0, 100.0, 150.0]),
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            AlgorithmKind::Random | AlgorithmKind::Popularity | AlgorithmKind::PopularityBinary => &[],
            AlgorithmKind::Bias => &["damping"],
            AlgorithmKind::UserKnn => &["nnbrs", "min_nbrs"],
            AlgorithmKind::ItemKnn => &["nnbrs", "max_sim_list", "min_nbrs"],
            AlgorithmKind::ItemKnnBinary => &["max_sim_list"],
            AlgorithmKind::FunkSvd => &["factors", "lr", "reg", "epochs"],
            AlgorithmKind::BiasedMf => &["factors", "lr", "reg", "epochs", "damping"],
            AlgorithmKind::Svd => &["factors", "power_iters", "oversample"],
            AlgorithmKind::Nmf => &["factors", "iterations"],
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm '{s}'")))
    }
}

/// Named numeric hyperparameters, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperparams(BTreeMap<String, f64>);

impl Hyperparams {
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        Hyperparams(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_string(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Overlays `other` on top of `self`.
    pub fn merged(&self, other: &Hyperparams) -> Hyperparams {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k, v);
        }
        out
    }

    /// Compact `key=value;...` rendering in name order.
    pub fn fingerprint(&self) -> String {
        if self.0.is_empty() {
            return "default".to_string();
        }
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// An algorithm choice plus its hyperparameters and random seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    pub params: Hyperparams,
    #[serde(default)]
    pub seed: u64,
}

impl AlgorithmSpec {
    /// Spec with the kind's defaults overlaid by `params`, validated.
    pub fn new(kind: AlgorithmKind, params: &Hyperparams, seed: u64) -> Result<Self> {
        let spec = AlgorithmSpec {
            kind,
            params: kind.defaults().merged(params),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_defaults(kind: AlgorithmKind, seed: u64) -> Self {
        AlgorithmSpec {
            kind,
            params: kind.defaults(),
            seed,
        }
    }

    pub fn fingerprint(&self) -> String {
        self.params.fingerprint()
    }

    pub fn binarize(&self) -> bool {
        match self.params.get("binarize") {
            Some(v) => v != 0.0,
            None => self.kind.binarized_by_default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::model(self.kind, msg));
        for key in self.kind.required() {
            match self.params.get(key) {
                None => return bad(format!("missing hyperparameter '{key}'")),
                Some(v) if !v.is_finite() => return bad(format!("hyperparameter '{key}' is not finite")),
                _ => {}
            }
        }
        for (key, v) in self.params.iter() {
            let ok = match key {
                "damping" | "reg" => v >= 0.0,
                "lr" => v > 0.0,
                "nnbrs" | "max_sim_list" | "factors" | "epochs" | "iterations" => v >= 1.0 && v.fract() == 0.0,
                "min_nbrs" | "power_iters" | "oversample" => v >= 0.0 && v.fract() == 0.0,
                "binarize" => v == 0.0 || v == 1.0,
                _ => return bad(format!("unknown hyperparameter '{key}'")),
            };
            if !ok {
                return bad(format!("hyperparameter {key}={v} out of range"));
            }
        }
        if let (Some(min), Some(n)) = (self.params.get("min_nbrs"), self.params.get("nnbrs")) {
            if min > n {
                return bad(format!("min_nbrs={min} exceeds nnbrs={n}"));
            }
        }
        Ok(())
    }

    pub(crate) fn float(&self, key: &str) -> f64 {
        self.params
            .get(key)
            .or_else(|| self.kind.defaults().get(key))
            .unwrap_or_else(|| panic!("{} has no hyperparameter '{key}'", self.kind))
    }

    pub(crate) fn count(&self, key: &str) -> usize {
        self.float(key) as usize
    }
}
