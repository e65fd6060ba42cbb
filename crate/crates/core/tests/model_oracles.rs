//! Fitted models checked against dense brute-force computations.

use approx::assert_relative_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use greenlens::ingest::Interaction;
use greenlens::models::baseline::Popularity;
use greenlens::models::knn::{item_similarities, UserKnn};
use greenlens::models::svd::TruncatedSvd;
use greenlens::models::{build_matrix, fit, AlgorithmKind, AlgorithmSpec, RatingMatrix, Recommender};

fn interactions(rows: &[(u32, u32, f64)]) -> Vec<Interaction> {
    rows.iter()
        .map(|&(user, item, rating)| Interaction {
            user,
            item,
            rating,
            timestamp: None,
        })
        .collect()
}

/// About half of a `users x items` grid filled with ratings 1..=5.
fn random_rows(users: u32, items: u32, seed: u64) -> Vec<(u32, u32, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for u in 0..users {
        for i in 0..items {
            if rng.next_u32() % 2 == 0 {
                rows.push((u, i, (1 + rng.next_u32() % 5) as f64));
            }
        }
    }
    rows
}

fn matrix(rows: &[(u32, u32, f64)], users: usize, items: usize) -> RatingMatrix {
    build_matrix(interactions(rows).iter(), users, items, false).unwrap()
}

fn dense(m: &RatingMatrix) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(m.n_users(), m.n_items());
    for (u, i, r) in m.triples() {
        a[(u, i)] = r;
    }
    a
}

#[test]
fn svd_matches_eigendecomposition() {
    let rows = [
        (0, 0, 5.0), (0, 1, 3.0), (0, 3, 1.0),
        (1, 0, 4.0), (1, 3, 1.0),
        (2, 0, 1.0), (2, 1, 1.0), (2, 3, 5.0),
        (3, 0, 1.0), (3, 3, 4.0),
        (4, 1, 1.0), (4, 2, 5.0), (4, 3, 4.0),
    ];
    let m = matrix(&rows, 5, 4);
    let a = dense(&m);
    let mut expected: Vec<f64> = SymmetricEigen::new(a.transpose() * &a)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    expected.sort_by(|x, y| y.total_cmp(x));

    let svd = TruncatedSvd::fit(&m, 4, 4, 0, 11).unwrap();
    for (got, want) in svd.sigma.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
    for (f, cols) in [(svd.u.rows, &svd.u), (svd.v.rows, &svd.v)] {
        for p in 0..4 {
            for q in 0..4 {
                let dot: f64 = (0..f).map(|r| cols.row(r)[p] * cols.row(r)[q]).sum();
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-9, "gram[{p}][{q}] = {dot}");
            }
        }
    }
    for u in 0..5 {
        for i in 0..4 {
            assert!((svd.reconstruct(u, i) - a[(u, i)]).abs() < 1e-9);
        }
    }
}

#[test]
fn truncated_svd_keeps_leading_values() {
    let rows = random_rows(30, 20, 3);
    let m = matrix(&rows, 30, 20);
    let a = dense(&m);
    let full = a.clone().svd(false, false).singular_values;
    let svd = TruncatedSvd::fit(&m, 5, 6, 10, 5).unwrap();
    for k in 0..5 {
        assert_relative_eq!(svd.sigma[k], full[k], max_relative = 1e-6);
    }
}

#[test]
fn item_similarities_match_dense_cosine() {
    let rows = random_rows(25, 15, 9);
    let m = matrix(&rows, 25, 15);
    let a = dense(&m);
    let centered: Vec<Vec<f64>> = (0..15)
        .map(|i| {
            let rated: Vec<usize> = (0..25).filter(|&u| a[(u, i)] != 0.0).collect();
            let mean = rated.iter().map(|&u| a[(u, i)]).sum::<f64>() / rated.len() as f64;
            (0..25).map(|u| if a[(u, i)] != 0.0 { a[(u, i)] - mean } else { 0.0 }).collect()
        })
        .collect();
    let cosine = |x: &[f64], y: &[f64]| {
        let dot: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
        let nx = x.iter().map(|p| p * p).sum::<f64>().sqrt();
        let ny = y.iter().map(|q| q * q).sum::<f64>().sqrt();
        dot / (nx * ny)
    };

    let sims = item_similarities(&m, true);
    for i in 0..15 {
        for j in 0..15 {
            let want = cosine(&centered[i], &centered[j]);
            let got = sims[i].iter().find(|&&(n, _)| n as usize == j).map(|&(_, s)| s);
            match got {
                Some(s) => {
                    assert!(i != j);
                    assert!((s - want).abs() < 1e-12, "sim({i},{j}) = {s}, expected {want}");
                    let back = sims[j].iter().find(|&&(n, _)| n as usize == i).unwrap().1;
                    assert!((s - back).abs() < 1e-12);
                }
                None => assert!(i == j || !(want > 1e-12), "sim({i},{j}) = {want} is missing"),
            }
        }
        assert!(sims[i].windows(2).all(|w| w[0].1 >= w[1].1));
    }
}

#[test]
fn binary_cosine_of_half_overlap() {
    // item 0 rated by users 0 and 1, item 1 only by user 0
    let m = matrix(&[(0, 0, 4.0), (1, 0, 2.0), (0, 1, 5.0)], 2, 2).binarized();
    let sims = item_similarities(&m, false);
    assert_eq!(sims[0].len(), 1);
    assert!((sims[0][0].1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn user_similarities_match_dense_cosine() {
    let rows = random_rows(12, 18, 4);
    let m = matrix(&rows, 12, 18);
    let a = dense(&m);
    let centered: Vec<Vec<f64>> = (0..12)
        .map(|u| {
            let rated: Vec<usize> = (0..18).filter(|&i| a[(u, i)] != 0.0).collect();
            let mean = rated.iter().map(|&i| a[(u, i)]).sum::<f64>() / rated.len() as f64;
            (0..18).map(|i| if a[(u, i)] != 0.0 { a[(u, i)] - mean } else { 0.0 }).collect()
        })
        .collect();
    let knn = UserKnn::fit(&m, 5, 1);
    for u in 0..12 {
        let sims = knn.similarities(u);
        for v in 0..12 {
            let x = &centered[u];
            let y = &centered[v];
            let nx = x.iter().map(|p| p * p).sum::<f64>().sqrt();
            let ny = y.iter().map(|q| q * q).sum::<f64>().sqrt();
            if u == v || nx == 0.0 || ny == 0.0 {
                assert!(sims[v].is_nan());
                continue;
            }
            let want = x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>() / (nx * ny);
            assert!((sims[v] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn recommendations_skip_training_items() {
    let rows = random_rows(20, 30, 1);
    let train = interactions(&rows);
    for kind in AlgorithmKind::ALL {
        let spec = AlgorithmSpec::with_defaults(kind, 3);
        let m = build_matrix(train.iter(), 20, 30, spec.binarize()).unwrap();
        let Ok(model) = fit(&spec, &m) else {
            continue;
        };
        for u in 0..20 {
            let seen: Vec<u32> = train.iter().filter(|it| it.user == u as u32).map(|it| it.item).collect();
            let list = model.recommend(u, &seen, &[0], 10).unwrap();
            assert!(list.items.len() <= 10);
            for (item, score) in &list.items {
                assert!(!seen.contains(item) && *item != 0, "{kind:?} recommended item {item}");
                assert!(score.is_finite());
            }
            assert!(list.items.windows(2).all(|w| w[0].1 >= w[1].1));
        }
    }
}

#[test]
fn popularity_ignores_rating_values() {
    let rows = random_rows(15, 10, 6);
    let halved: Vec<(u32, u32, f64)> = rows.iter().map(|&(u, i, r)| (u, i, r / 2.0)).collect();
    let a = Popularity::fit(&matrix(&rows, 15, 10));
    let b = Popularity::fit(&matrix(&halved, 15, 10));
    assert_eq!(a.counts, b.counts);
    let per_item: Vec<f64> = (0..10u32)
        .map(|i| rows.iter().filter(|r| r.1 == i).count() as f64)
        .collect();
    assert_eq!(a.counts, per_item);
}
