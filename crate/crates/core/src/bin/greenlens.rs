use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greenlens::green::{EnergyParams, EnergyReport};
use greenlens::ingest::{dataset_stats, parse_interactions, ColumnOrder, Format, InteractionDataset, ParseOptions, RatingScale};
use greenlens::preprocess::preprocess_with_summary;
use greenlens::report::{emit_report, GroupMap};
use greenlens::runner::{read_records, resolve_data_path, run_grid, save_config, ExperimentConfig};
use greenlens::split::{downsample_train, user_holdout_split, DownsampleLevel, SplitRatios};
use greenlens::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "greenlens", version, about = "Dataset-downsampling benchmarks for top-N recommenders")]
struct Cli {
    /// Log progress to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a raw ratings file and write it as canonical CSV.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Deduplicate and k-core prune a ratings file.
    Preprocess {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-user train/validation/test split of a (preprocessed) dataset.
    Split {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        test_frac: f64,
        #[arg(long, default_value_t = 0.1)]
        valid_frac: f64,
        /// Also write downsampled training sets, e.g. `0.1,0.5`.
        #[arg(long, value_delimiter = ',')]
        fractions: Vec<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run an experiment grid described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Concurrent cells (ignored with --exclusive-timing).
        #[arg(long)]
        jobs: Option<usize>,
        /// Run cells one at a time so runtimes are not contaminated.
        #[arg(long)]
        exclusive_timing: bool,
        /// Override the config's output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Aggregate results CSVs into curves, group drops, runtime ratios and charts.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// CO2e savings for a runtime ratio.
    Estimate {
        #[arg(long)]
        runtime_ratio: f64,
        #[arg(long, default_value_t = 0.51)]
        kwh_per_run: f64,
        #[arg(long, default_value_t = 10.0)]
        n_configs: f64,
        #[arg(long, default_value_t = 481.0)]
        intensity: f64,
        #[arg(long, default_value_t = 40.0)]
        overhead_factor: f64,
        #[arg(long, default_value_t = 200.0)]
        device_power_watts: f64,
        /// Measured runtime; energy then comes from device power instead of the per-run constant.
        #[arg(long)]
        seconds: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Ratings file; relative paths resolve against GREENLENS_DATA_DIR when set.
    #[arg(long = "in")]
    input: PathBuf,
    /// ml100k_tsv, ml_dat, amazon_csv or canonical.
    #[arg(long, default_value = "canonical")]
    format: Format,
    /// Column names in file order, e.g. `item,user,rating,timestamp`.
    #[arg(long)]
    column_order: Option<ColumnOrder>,
    /// Rating range `min:max[:step]`.
    #[arg(long)]
    scale: Option<RatingScale>,
}

impl InputArgs {
    fn load(&self) -> Result<InteractionDataset> {
        let path = existing(&resolve_data_path(&self.input))?;
        let opts = ParseOptions {
            column_order: self.column_order,
            scale: self.scale,
        };
        parse_interactions(&path, self.format, &opts)
    }
}

fn existing(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        Ok(path.to_path_buf())
    } else {
        Err(Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        })
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest { input, out } => {
            let ds = input.load()?;
            ds.save_canonical(&out)?;
            print_json(&dataset_stats(&ds)?)
        }
        Command::Preprocess { input, k, out } => {
            let ds = input.load()?;
            let (clean, summary) = preprocess_with_summary(&ds, k)?;
            if clean.is_empty() {
                return Err(Error::Invalid(format!("no interactions survive {k}-core pruning")));
            }
            clean.save_canonical(&out)?;
            print_json(&summary)
        }
        Command::Split {
            input,
            seed,
            test_frac,
            valid_frac,
            fractions,
            out_dir,
        } => {
            let ds = input.load()?;
            let ratios = SplitRatios::new(test_frac, valid_frac)?;
            let levels = fractions
                .iter()
                .map(|&f| DownsampleLevel::new(f))
                .collect::<Result<Vec<_>>>()?;
            let bundle = user_holdout_split(&ds, ratios, seed)?;
            bundle.save(&ds, &out_dir)?;
            for level in levels {
                let sub = downsample_train(&bundle, level);
                let path = out_dir.join(format!("train_{}.csv", level.label()));
                ds.reindexed(sub.iter().copied()).save_canonical(&path)?;
            }
            let m = bundle.manifest(&ds);
            println!(
                "{{\"seed\": {}, \"train\": {}, \"validation\": {}, \"test\": {}, \"dataset_fingerprint\": \"{}\"}}",
                m.seed,
                bundle.train.len(),
                bundle.validation.len(),
                bundle.test.len(),
                m.dataset_fingerprint
            );
            Ok(())
        }
        Command::Run {
            config,
            jobs,
            exclusive_timing,
            output_dir,
        } => {
            let mut cfg = ExperimentConfig::load(&existing(&config)?)?;
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            cfg.exclusive_timing |= exclusive_timing;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Io {
                path: cfg.output_dir.clone(),
                source: e,
            })?;
            save_config(&cfg, &cfg.output_dir.join("config.json"))?;
            let outcome = run_grid(&cfg)?;
            let failed = outcome.records.iter().filter(|r| !r.is_ok()).count();
            println!(
                "{{\"results\": \"{}\", \"executed\": {}, \"skipped\": {}, \"failed\": {failed}}}",
                cfg.results_path().display(),
                outcome.executed,
                outcome.skipped
            );
            Ok(())
        }
        Command::Report { results, out_dir } => {
            let mut records = Vec::new();
            for path in &results {
                records.extend(read_records(&existing(path)?)?);
            }
            for path in emit_report(&records, &GroupMap::default(), &out_dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Estimate {
            runtime_ratio,
            kwh_per_run,
            n_configs,
            intensity,
            overhead_factor,
            device_power_watts,
            seconds,
        } => {
            let params = EnergyParams {
                kwh_per_run,
                n_configs,
                intensity_g_per_kwh: intensity,
                overhead_factor,
                device_power_watts,
            };
            let report = match seconds {
                Some(s) => EnergyReport::from_runtime(s, runtime_ratio, params)?,
                None => EnergyReport::new(runtime_ratio, params)?,
            };
            print_json(&report)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("greenlens: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 3 })
        }
    }
}
