//! Dataset statistics after 10-core preprocessing.

mod common;

use greenlens::ingest::{dataset_stats, Format, StatsRow};
use greenlens::preprocess::preprocess_pipeline;

fn check(relative: &str, format: Format, raw: (usize, usize, usize), after: StatsRow) {
    let Some(ds) = common::load(relative, format) else {
        eprintln!("skipping: {relative} is not installed");
        return;
    };
    let before = dataset_stats(&ds).unwrap();
    assert_eq!((before.n_users, before.n_items, before.n_interactions), raw);
    let clean = preprocess_pipeline(&ds, 10).unwrap();
    assert_eq!(dataset_stats(&clean).unwrap(), after);
}

#[test]
fn movielens_100k() {
    check(
        common::ML100K,
        Format::Ml100kTsv,
        (943, 1682, 100_000),
        StatsRow {
            n_users: 943,
            n_items: 1152,
            n_interactions: 97_953,
            avg_int_per_user: 103,
            avg_int_per_item: 85,
        },
    );
}

#[test]
fn movielens_1m() {
    check(
        common::ML1M,
        Format::MlDat,
        (6040, 3706, 1_000_209),
        StatsRow {
            n_users: 6040,
            n_items: 3260,
            n_interactions: 998_539,
            avg_int_per_user: 165,
            avg_int_per_item: 306,
        },
    );
}
