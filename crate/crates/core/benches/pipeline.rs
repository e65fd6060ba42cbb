//! Hot paths of a grid cell. Compare the rayon build against the sequential
//! one with
//!
//! ```text
//! cargo bench --bench pipeline -- --save-baseline parallel
//! cargo bench --bench pipeline --no-default-features -- --baseline parallel
//! ```

use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};

use greenlens::eval::evaluate_model;
use greenlens::ingest::{parse_interactions, DatasetBuilder, Format, InteractionDataset, ParseOptions, RatingScale};
use greenlens::models::knn::item_similarities;
use greenlens::models::{build_matrix, fit, AlgorithmKind, AlgorithmSpec};
use greenlens::preprocess::preprocess_pipeline;
use greenlens::runner::DATA_DIR_ENV;
use greenlens::split::{downsample_train, user_holdout_split, DownsampleLevel, SplitRatios};

/// MovieLens 100K when installed, otherwise a synthetic set of similar shape.
fn dataset() -> InteractionDataset {
    let root = std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    let path = root.join("ml-100k/u.data");
    let raw = if path.is_file() {
        parse_interactions(&path, Format::Ml100kTsv, &ParseOptions::default()).unwrap()
    } else {
        let mut b = DatasetBuilder::new(RatingScale::new(1.0, 5.0, Some(1.0)));
        let mut state = 0x9e37_79b9_u64;
        for u in 0..900u64 {
            for _ in 0..100 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let item = (state >> 33) % 1200;
                let rating = 1 + (state >> 20) % 5;
                b.push(&u.to_string(), &item.to_string(), rating as f64, None).unwrap();
            }
        }
        b.build()
    };
    preprocess_pipeline(&raw, 10).unwrap()
}

fn benches(c: &mut Criterion) {
    let ds = dataset();
    let ratios = SplitRatios::new(0.1, 0.1).unwrap();
    c.bench_function("split", |b| b.iter(|| user_holdout_split(black_box(&ds), ratios, 1).unwrap()));

    let bundle = user_holdout_split(&ds, ratios, 1).unwrap();
    let train = downsample_train(&bundle, DownsampleLevel::new(1.0).unwrap());
    let m = build_matrix(train.iter(), bundle.n_users, bundle.n_items, false).unwrap();
    c.bench_function("item_similarities", |b| b.iter(|| item_similarities(black_box(&m), true)));

    let mut group = c.benchmark_group("evaluate");
    group.sample_size(20);
    for kind in [AlgorithmKind::Popularity, AlgorithmKind::ItemKnn, AlgorithmKind::UserKnn] {
        let model = fit(&AlgorithmSpec::with_defaults(kind, 1), &m).unwrap();
        group.bench_function(kind.name(), |b| b.iter(|| evaluate_model(&model, &bundle, &train, 10).unwrap()));
    }
    group.finish();
}

criterion_group!(pipeline, benches);
criterion_main!(pipeline);
