//! Experiment grid: dataset x algorithm x fraction x seed, with validation
//! tuning and an append-only results CSV.

use std::collections::{BTreeSet, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{evaluate_against, evaluate_model};
use crate::green::time_phase;
use crate::ingest::{parse_interactions, ColumnOrder, Format, InteractionDataset, ParseOptions, RatingScale};
use crate::models::matrix::build_matrix;
use crate::models::spec::{AlgorithmKind, AlgorithmSpec, Hyperparams};
use crate::models::{self, Recommender};
use crate::preprocess::preprocess_pipeline;
use crate::split::{downsample_train, user_holdout_split, DownsampleLevel, InteractionSet, SplitBundle, SplitRatios};
use crate::{par, rng};

pub const RESULTS_HEADER: [&str; 12] = [
    "dataset",
    "algorithm",
    "params_fingerprint",
    "fraction",
    "seed",
    "ndcg_mean",
    "n_evaluated",
    "fit_seconds",
    "eval_seconds",
    "status",
    "error",
    "completed_at",
];

pub const RESULTS_FILE: &str = "results.csv";

/// Environment variable naming the root that relative dataset paths resolve against.
pub const DATA_DIR_ENV: &str = "GREENLENS_DATA_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    /// Label written to the `dataset` column; defaults to the file stem.
    #[serde(default)]
    pub id: Option<String>,
    pub path: PathBuf,
    pub format: Format,
    /// e.g. `"item,user,rating,timestamp"`
    #[serde(default)]
    pub column_order: Option<String>,
    /// `"min:max[:step]"`
    #[serde(default)]
    pub scale: Option<String>,
}

impl DatasetConfig {
    pub fn dataset_id(&self) -> String {
        self.id.clone().unwrap_or_else(|| {
            self.path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string())
        })
    }

    /// Absolute paths are used as is; relative ones resolve against
    /// `GREENLENS_DATA_DIR` when set, else the working directory.
    pub fn resolved_path(&self) -> PathBuf {
        resolve_data_path(&self.path)
    }

    pub fn parse_options(&self) -> Result<ParseOptions> {
        Ok(ParseOptions {
            column_order: self.column_order.as_deref().map(ColumnOrder::from_str).transpose()?,
            scale: self.scale.as_deref().map(RatingScale::from_str).transpose()?,
        })
    }

    pub fn load(&self) -> Result<InteractionDataset> {
        let path = self.resolved_path();
        if !path.exists() {
            return Err(Error::io(
                &path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "dataset file not found"),
            ));
        }
        parse_interactions(&path, self.format, &self.parse_options()?)
    }
}

pub fn resolve_data_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(DATA_DIR_ENV) {
        Some(root) if !root.is_empty() => PathBuf::from(root).join(path),
        _ => path.to_path_buf(),
    }
}

/// One algorithm in a config: fixed `params`, an explicit `grid`, or neither
/// (the kind's default grid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    pub kind: AlgorithmKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Hyperparams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Hyperparams>>,
}

impl AlgorithmEntry {
    pub fn new(kind: AlgorithmKind) -> Self {
        AlgorithmEntry {
            kind,
            params: None,
            grid: None,
        }
    }

    pub fn tuning_grid(&self) -> Vec<Hyperparams> {
        match (&self.params, &self.grid) {
            (Some(p), _) => vec![p.clone()],
            (None, Some(g)) => g.clone(),
            (None, None) => self.kind.default_grid(),
        }
    }
}

fn default_k_core() -> usize {
    10
}
fn default_cutoff() -> usize {
    10
}
fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3]
}
fn default_jobs() -> usize {
    1
}
fn default_fractions() -> Vec<DownsampleLevel> {
    DownsampleLevel::default_grid()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    #[serde(default = "default_k_core")]
    pub k_core: usize,
    #[serde(default)]
    pub ratios: SplitRatios,
    #[serde(default = "default_fractions")]
    pub fractions: Vec<DownsampleLevel>,
    pub algorithms: Vec<AlgorithmEntry>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_cutoff")]
    pub k: usize,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub exclusive_timing: bool,
    /// Cells run concurrently; ignored under exclusive timing.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.fractions.is_empty() {
            return Err(Error::invalid("config lists no fractions"));
        }
        if self.seeds.is_empty() {
            return Err(Error::invalid("config lists no seeds"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("config lists no algorithms"));
        }
        if self.k == 0 {
            return Err(Error::invalid("evaluation cutoff k must be at least 1"));
        }
        if self.k_core == 0 {
            return Err(Error::invalid("k_core must be at least 1"));
        }
        self.ratios.validate()?;
        let mut seen = HashSet::new();
        for f in &self.fractions {
            if !seen.insert(f.label()) {
                return Err(Error::invalid(format!("fraction {} listed twice", f.label())));
            }
        }
        let mut kinds = HashSet::new();
        for a in &self.algorithms {
            if !kinds.insert(a.kind) {
                return Err(Error::invalid(format!("algorithm {} listed twice", a.kind)));
            }
            if a.tuning_grid().is_empty() {
                return Err(Error::invalid(format!("algorithm {} has an empty grid", a.kind)));
            }
        }
        let unique: BTreeSet<u64> = self.seeds.iter().copied().collect();
        if unique.len() != self.seeds.len() {
            return Err(Error::invalid("seeds must be distinct"));
        }
        Ok(())
    }

    pub fn results_path(&self) -> PathBuf {
        self.output_dir.join(RESULTS_FILE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    Failed,
}

impl CellStatus {
    fn as_str(self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::Failed => "failed",
        }
    }
}

impl FromStr for CellStatus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(CellStatus::Ok),
            "failed" => Ok(CellStatus::Failed),
            _ => Err(Error::invalid(format!("unknown cell status '{s}'"))),
        }
    }
}

/// Unique key of a result row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub dataset: String,
    pub algorithm: AlgorithmKind,
    pub params_fingerprint: String,
    pub fraction: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub dataset: String,
    pub algorithm: AlgorithmKind,
    pub params_fingerprint: String,
    pub fraction: DownsampleLevel,
    pub seed: u64,
    /// `None` for failed cells.
    pub ndcg_mean: Option<f64>,
    pub n_evaluated: usize,
    pub fit_seconds: f64,
    pub eval_seconds: f64,
    pub status: CellStatus,
    pub error: String,
    pub completed_at: String,
}

impl ExperimentRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            dataset: self.dataset.clone(),
            algorithm: self.algorithm,
            params_fingerprint: self.params_fingerprint.clone(),
            fraction: self.fraction.label(),
            seed: self.seed,
        }
    }

    pub fn total_seconds(&self) -> f64 {
        self.fit_seconds + self.eval_seconds
    }

    pub fn is_ok(&self) -> bool {
        self.status == CellStatus::Ok
    }

    fn to_row(&self) -> [String; 12] {
        [
            self.dataset.clone(),
            self.algorithm.name().to_string(),
            self.params_fingerprint.clone(),
            self.fraction.label(),
            self.seed.to_string(),
            self.ndcg_mean.map(|v| v.to_string()).unwrap_or_default(),
            self.n_evaluated.to_string(),
            self.fit_seconds.to_string(),
            self.eval_seconds.to_string(),
            self.status.as_str().to_string(),
            self.error.clone(),
            self.completed_at.clone(),
        ]
    }

    fn from_row(row: &csv::StringRecord, line: usize, path: &Path) -> Result<Self> {
        let bad = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: msg,
        };
        if row.len() != RESULTS_HEADER.len() {
            return Err(bad(format!("expected {} fields, found {}", RESULTS_HEADER.len(), row.len())));
        }
        let num = |i: usize| -> Result<f64> {
            row[i]
                .parse::<f64>()
                .map_err(|_| bad(format!("column {} is not a number: '{}'", RESULTS_HEADER[i], &row[i])))
        };
        let fraction = DownsampleLevel::new(num(3)?).map_err(|e| bad(e.to_string()))?;
        let ndcg_mean = if row[5].is_empty() { None } else { Some(num(5)?) };
        Ok(ExperimentRecord {
            dataset: row[0].to_string(),
            algorithm: row[1].parse().map_err(|e: Error| bad(e.to_string()))?,
            params_fingerprint: row[2].to_string(),
            fraction,
            seed: row[4].parse().map_err(|_| bad(format!("bad seed '{}'", &row[4])))?,
            ndcg_mean,
            n_evaluated: row[6].parse().map_err(|_| bad(format!("bad n_evaluated '{}'", &row[6])))?,
            fit_seconds: num(7)?,
            eval_seconds: num(8)?,
            status: row[9].parse().map_err(|e: Error| bad(e.to_string()))?,
            error: row[10].to_string(),
            completed_at: row[11].to_string(),
        })
    }
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header = rdr.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header; want {}", RESULTS_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        out.push(ExperimentRecord::from_row(&row?, i + 2, path)?);
    }
    Ok(out)
}

pub fn write_records(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(RESULTS_HEADER)?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Appends rows, writing the header first if the file is new or empty.
pub fn append_records(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    if fresh {
        w.write_record(RESULTS_HEADER)?;
    }
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Seed of one (dataset, algorithm, fraction) cell under `master_seed`.
pub fn cell_seed(master_seed: u64, dataset: &str, kind: AlgorithmKind, fraction: DownsampleLevel) -> u64 {
    rng::label_seed(&[&master_seed.to_string(), dataset, kind.name(), &fraction.label()])
}

/// Validation score of each grid point; `None` when the configuration failed.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningOutcome {
    pub best: AlgorithmSpec,
    pub scores: Vec<(String, Option<f64>)>,
}

/// Fits each candidate with `fit_fn` on the full training set and keeps the
/// highest validation nDCG@k; earlier candidates win ties.
pub fn tune_with<F>(candidates: &[AlgorithmSpec], bundle: &SplitBundle, k: usize, fit_fn: F) -> Result<TuningOutcome>
where
    F: Fn(&AlgorithmSpec) -> Result<Box<dyn Recommender>>,
{
    let Some(first) = candidates.first() else {
        return Err(Error::invalid("tuning grid is empty"));
    };
    if candidates.len() == 1 {
        return Ok(TuningOutcome {
            best: first.clone(),
            scores: vec![(first.fingerprint(), None)],
        });
    }
    let none = InteractionSet::from_user_lists(vec![Vec::new(); bundle.n_users]);
    let mut best: Option<(usize, f64)> = None;
    let mut scores = Vec::with_capacity(candidates.len());
    for (idx, spec) in candidates.iter().enumerate() {
        let score = fit_fn(spec).and_then(|m| evaluate_against(m.as_ref(), &bundle.train, &none, &bundle.validation, k));
        match score {
            Ok(r) => {
                log::debug!("tune {} [{}] validation nDCG@{k} = {}", spec.kind, spec.fingerprint(), r.mean);
                scores.push((spec.fingerprint(), Some(r.mean)));
                if best.is_none_or(|(_, b)| r.mean > b) {
                    best = Some((idx, r.mean));
                }
            }
            Err(e) => {
                log::warn!("skipping {} [{}]: {e}", spec.kind, spec.fingerprint());
                scores.push((spec.fingerprint(), None));
            }
        }
    }
    match best {
        Some((idx, _)) => Ok(TuningOutcome {
            best: candidates[idx].clone(),
            scores,
        }),
        None => Err(Error::model(first.kind, "every configuration in the tuning grid failed")),
    }
}

/// Tunes `kind` over `grid` using models fitted on the full training set.
/// Invalid grid points are skipped like failed fits.
pub fn tune_hyperparameters(
    kind: AlgorithmKind,
    grid: &[Hyperparams],
    bundle: &SplitBundle,
    seed: u64,
    k: usize,
) -> Result<TuningOutcome> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("tuning grid for {kind} is empty")));
    }
    let mut candidates = Vec::new();
    for hp in grid {
        match AlgorithmSpec::new(kind, hp, seed) {
            Ok(spec) => candidates.push(spec),
            Err(e) => log::warn!("skipping {kind} [{}]: {e}", hp.fingerprint()),
        }
    }
    if candidates.is_empty() {
        return Err(Error::model(kind, "no valid configuration in the tuning grid"));
    }
    let matrix = build_matrix(bundle.train.iter(), bundle.n_users, bundle.n_items, false)?;
    tune_with(&candidates, bundle, k, |spec| {
        models::fit(spec, &matrix).map(|m| Box::new(m) as Box<dyn Recommender>)
    })
}

fn now_stamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Downsamples, fits and evaluates one cell. Model errors become a failed
/// record; `spec.seed` is replaced by the cell seed. `fit_seconds` covers
/// matrix construction and training, `eval_seconds` ranking and scoring;
/// downsampling is untimed.
pub fn run_cell(
    dataset_id: &str,
    bundle: &SplitBundle,
    spec: &AlgorithmSpec,
    fraction: DownsampleLevel,
    k: usize,
) -> ExperimentRecord {
    let mut spec = spec.clone();
    spec.seed = cell_seed(bundle.seed, dataset_id, spec.kind, fraction);
    let train = downsample_train(bundle, fraction);

    let mut record = ExperimentRecord {
        dataset: dataset_id.to_string(),
        algorithm: spec.kind,
        params_fingerprint: spec.fingerprint(),
        fraction,
        seed: bundle.seed,
        ndcg_mean: None,
        n_evaluated: 0,
        fit_seconds: 0.0,
        eval_seconds: 0.0,
        status: CellStatus::Failed,
        error: String::new(),
        completed_at: String::new(),
    };
    let outcome = (|| {
        // building the matrix is part of training: its cost scales with the data
        let (model, fit_s) = time_phase(|| {
            let matrix = build_matrix(train.iter(), bundle.n_users, bundle.n_items, false)?;
            models::fit(&spec, &matrix)
        })
        .map_err(|t| {
            record.fit_seconds = t.seconds;
            t.error
        })?;
        record.fit_seconds = fit_s;
        let (metric, eval_s) = time_phase(|| evaluate_model(&model, bundle, &train, k)).map_err(|t| {
            record.eval_seconds = t.seconds;
            t.error
        })?;
        record.eval_seconds = eval_s;
        Ok::<_, Error>(metric)
    })();
    match outcome {
        Ok(metric) => {
            record.ndcg_mean = Some(metric.mean);
            record.n_evaluated = metric.n_evaluated;
            record.status = CellStatus::Ok;
        }
        Err(e) => {
            log::warn!("{} [{}] at {} failed: {e}", spec.kind, spec.fingerprint(), fraction.label());
            record.error = e.to_string();
        }
    }
    record.completed_at = now_stamp();
    record
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    /// Rows of this grid in grid order, whether run now or found on disk.
    pub records: Vec<ExperimentRecord>,
    pub executed: usize,
    pub skipped: usize,
}

/// Runs every missing cell of `config`, appending to `<output_dir>/results.csv`.
pub fn run_grid(config: &ExperimentConfig) -> Result<GridOutcome> {
    config.validate()?;
    let raw = config.dataset.load()?;
    let ds = preprocess_pipeline(&raw, config.k_core)?;
    drop(raw);
    run_grid_on(config, &ds)
}

/// [`run_grid`] on an already preprocessed dataset.
pub fn run_grid_on(config: &ExperimentConfig, ds: &InteractionDataset) -> Result<GridOutcome> {
    config.validate()?;
    let dataset_id = config.dataset.dataset_id();
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    let results = config.results_path();
    let existing = if results.exists() {
        read_records(&results)?
    } else {
        Vec::new()
    };
    let jobs = if config.exclusive_timing { 1 } else { config.jobs.max(1) };

    let mut collected = Vec::new();
    let (mut executed, mut skipped) = (0, 0);
    for &seed in &config.seeds {
        let bundle = user_holdout_split(ds, config.ratios, seed)?;
        for entry in &config.algorithms {
            let on_disk = |fraction: DownsampleLevel| {
                existing.iter().find(|r| {
                    r.dataset == dataset_id
                        && r.algorithm == entry.kind
                        && r.seed == seed
                        && r.fraction.label() == fraction.label()
                })
            };
            if config.fractions.iter().all(|&f| on_disk(f).is_some()) {
                log::info!("{dataset_id} seed {seed} {}: all cells present, skipping", entry.kind);
                collected.extend(config.fractions.iter().filter_map(|&f| on_disk(f).cloned()));
                skipped += config.fractions.len();
                continue;
            }
            let tune_seed = cell_seed(seed, &dataset_id, entry.kind, DownsampleLevel::FULL);
            let tuned = match tune_hyperparameters(entry.kind, &entry.tuning_grid(), &bundle, tune_seed, config.k) {
                Ok(t) => t.best,
                Err(e @ Error::Model { .. }) => {
                    // no usable configuration: record every cell as failed
                    log::warn!("tuning {} failed: {e}", entry.kind);
                    let failed: Vec<ExperimentRecord> = config
                        .fractions
                        .iter()
                        .map(|&fraction| ExperimentRecord {
                            dataset: dataset_id.clone(),
                            algorithm: entry.kind,
                            params_fingerprint: "untuned".to_string(),
                            fraction,
                            seed,
                            ndcg_mean: None,
                            n_evaluated: 0,
                            fit_seconds: 0.0,
                            eval_seconds: 0.0,
                            status: CellStatus::Failed,
                            error: e.to_string(),
                            completed_at: now_stamp(),
                        })
                        .filter(|r| !existing.iter().any(|x| x.key() == r.key()))
                        .collect();
                    append_records(&results, &failed)?;
                    executed += failed.len();
                    collected.extend(failed);
                    continue;
                }
                Err(e) => return Err(e),
            };
            log::info!("{dataset_id} seed {seed} {}: tuned to [{}]", entry.kind, tuned.fingerprint());

            let mut pending = Vec::new();
            for &fraction in &config.fractions {
                let key = RecordKey {
                    dataset: dataset_id.clone(),
                    algorithm: entry.kind,
                    params_fingerprint: tuned.fingerprint(),
                    fraction: fraction.label(),
                    seed,
                };
                match existing.iter().find(|r| r.key() == key) {
                    Some(r) => {
                        collected.push(r.clone());
                        skipped += 1;
                    }
                    None => pending.push(fraction),
                }
            }
            for chunk in pending.chunks(jobs) {
                let records = if jobs > 1 {
                    par::with_workers(jobs, || {
                        par::map_slice(chunk, |&f| run_cell(&dataset_id, &bundle, &tuned, f, config.k))
                    })
                } else {
                    chunk.iter().map(|&f| run_cell(&dataset_id, &bundle, &tuned, f, config.k)).collect()
                };
                append_records(&results, &records)?;
                executed += records.len();
                collected.extend(records);
            }
        }
    }
    Ok(GridOutcome {
        records: collected,
        executed,
        skipped,
    })
}

/// Writes the config next to the results so a run can be reproduced.
pub fn save_config(config: &ExperimentConfig, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(config)?;
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(json.as_bytes())
        .and_then(|_| f.write_all(b"\n"))
        .map_err(|e| Error::io(path, e))
}
