use greenlens::models::AlgorithmKind;
use greenlens::report::{emit_report, GroupMap};
use greenlens::runner::{CellStatus, ExperimentRecord};
use greenlens::split::DownsampleLevel;

fn records() -> Vec<ExperimentRecord> {
    let kinds = [AlgorithmKind::Svd, AlgorithmKind::Nmf, AlgorithmKind::Bias, AlgorithmKind::Random];
    let mut out = Vec::new();
    for (a, kind) in kinds.into_iter().enumerate() {
        for fraction in [0.1, 0.5, 1.0] {
            for seed in 1..=3u64 {
                out.push(ExperimentRecord {
                    dataset: "toy".into(),
                    algorithm: kind,
                    params_fingerprint: "f".into(),
                    fraction: DownsampleLevel::new(fraction).unwrap(),
                    seed,
                    ndcg_mean: Some(0.05 * (a + 1) as f64 * fraction + 0.001 * seed as f64),
                    n_evaluated: 50,
                    fit_seconds: fraction,
                    eval_seconds: 0.05,
                    status: CellStatus::Ok,
                    error: String::new(),
                    completed_at: "2026-01-01T00:00:00Z".into(),
                });
            }
        }
    }
    out
}

#[test]
fn charts_are_well_formed_svg() {
    let dir = tempfile::tempdir().unwrap();
    let files = emit_report(&records(), &GroupMap::default(), dir.path()).unwrap();
    let svgs: Vec<_> = files.iter().filter(|p| p.extension().is_some_and(|e| e == "svg")).collect();
    assert_eq!(svgs.len(), 3, "{files:?}");
    for path in svgs {
        let text = std::fs::read_to_string(path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let class_count = |class: &str| {
            doc.descendants()
                .filter(|n| n.attribute("class") == Some(class))
                .count()
        };
        let name = path.file_name().unwrap().to_string_lossy();
        if name.ends_with("_groups_50v100.svg") {
            // two groups, each at 0.50 and 1.00
            assert_eq!(class_count("box"), 4);
        } else {
            assert_eq!(class_count("curve"), 4, "{name}");
        }
    }
}

#[test]
fn tables_have_expected_headers() {
    let dir = tempfile::tempdir().unwrap();
    emit_report(&records(), &GroupMap::default(), dir.path()).unwrap();
    for (file, header) in [
        ("curves.csv", "dataset,algorithm,fraction,mean,std,relative,n"),
        ("groups.csv", "dataset,group,fraction,drop_pct"),
        ("runtime_ratios.csv", "dataset,algorithm,fraction,ratio,savings_gco2e"),
    ] {
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{file}");
    }
    let curves = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 4 * 3);
}
