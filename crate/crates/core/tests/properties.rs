use nalgebra::DMatrix;
use proptest::prelude::*;

use logpr::embedding::{log_pagerank_embedding, log_transform, sample_seeds, EmbeddingConfig, SampleMatrix};
use logpr::evaluation::approximation_error;
use logpr::io::{parse_edge_list, write_edge_list, IndexBase};
use logpr::linalg::dense::orthonormality_defect;
use logpr::pagerank::{prepare, residual, PageRankConfig};
use logpr::{Graph, LaplacianKind, WalkKind};

/// Connected weighted graph: a random tree plus extra edges.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (3usize..40)
        .prop_flat_map(|n| {
            let tree = proptest::collection::vec((any::<prop::sample::Index>(), 0.1f64..5.0), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n, 0.1f64..5.0), 0..2 * n);
            (Just(n), tree, extra)
        })
        .prop_map(|(n, tree, extra)| {
            let mut edges: Vec<(usize, usize, f64)> =
                tree.into_iter().enumerate().map(|(i, (p, w))| (p.index(i + 1), i + 1, w)).collect();
            edges.extend(extra);
            Graph::from_edges(n, &edges).unwrap().0
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_symmetric_and_degrees_consistent(g in connected_graph()) {
        for u in 0..g.n() {
            let mut d = 0.0;
            for (v, w) in g.neighbors(u) {
                prop_assert_eq!(g.weight(v, u), Some(w));
                prop_assert!(v != u);
                d += w;
            }
            prop_assert!((d - g.degree(u)).abs() <= 1e-12 * d.max(1.0));
        }
        prop_assert!(g.is_connected());
    }

    #[test]
    fn pagerank_is_a_distribution(g in connected_graph(), alpha in 0.01f64..0.999, lazy in any::<bool>(), seed in any::<prop::sample::Index>()) {
        let cfg = PageRankConfig { alpha, walk: if lazy { WalkKind::Lazy } else { WalkKind::Standard }, ..Default::default() };
        let s = seed.index(g.n());
        let x = prepare(&g, cfg).unwrap().solve_seed(s).unwrap().values;
        prop_assert!(x.iter().all(|&v| v > 0.0));
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let mut v = vec![0.0; g.n()];
        v[s] = 1.0;
        prop_assert!(residual(&g, &cfg, &x, &v).unwrap() < 1e-10);
    }

    #[test]
    fn edge_list_round_trips(g in connected_graph()) {
        let (h, _) = parse_edge_list(&write_edge_list(&g), IndexBase::Zero).unwrap();
        prop_assert_eq!(g, h);
    }

    #[test]
    fn seeds_are_distinct_and_in_range(n in 1usize..500, frac in 0.0f64..1.0, rng in any::<u64>()) {
        let s = ((n as f64) * frac) as usize;
        let mut seeds = sample_seeds(n, s, rng).unwrap();
        prop_assert_eq!(seeds.len(), s);
        prop_assert!(seeds.iter().all(|&v| v < n));
        seeds.sort_unstable();
        seeds.dedup();
        prop_assert_eq!(seeds.len(), s);
    }

    #[test]
    fn log_transform_is_finite(cols in proptest::collection::vec(proptest::collection::vec(prop_oneof![Just(0.0), 1e-300f64..1.0], 5), 1..6)) {
        prop_assume!(cols.iter().all(|c| c.iter().any(|&v| v > 0.0)));
        let m = DMatrix::from_fn(5, cols.len(), |i, j| cols[j][i]);
        let x = SampleMatrix { columns: m, seeds: (0..cols.len()).collect() };
        let (y, replaced) = log_transform(&x, 0.1).unwrap();
        prop_assert!(y.columns.iter().all(|v| v.is_finite()));
        prop_assert_eq!(replaced, cols.iter().flatten().filter(|&&v| v == 0.0).count());
        // A replaced zero sits strictly below its column's smallest positive entry.
        for (c, lc) in cols.iter().zip(y.columns.column_iter()) {
            let min_pos = c.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min).ln();
            for (v, l) in c.iter().zip(lc) {
                if *v == 0.0 {
                    prop_assert!(*l < min_pos);
                }
            }
        }
    }

    #[test]
    fn embedding_columns_orthonormal_and_sign_fixed(g in connected_graph(), rng in any::<u64>()) {
        prop_assume!(g.n() >= 8);
        let cfg = EmbeddingConfig { rng_seed: rng, ..Default::default() };
        let z = log_pagerank_embedding(&g, &cfg).unwrap().z;
        prop_assert!(orthonormality_defect(&z) < 1e-10);
        for col in z.column_iter() {
            let (mut best, mut at) = (0.0f64, 0);
            for (i, v) in col.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    at = i;
                }
            }
            prop_assert!(col[at] > 0.0);
        }
    }

    #[test]
    fn error_ignores_scale_and_sign(g in connected_graph(), scale in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
        let n = g.n();
        let z: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.3).collect();
        let u: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
        let us: Vec<f64> = u.iter().map(|v| v * scale).collect();
        for kind in [LaplacianKind::Normalized, LaplacianKind::RandomWalk, LaplacianKind::Combinatorial] {
            let a = approximation_error(&g, &u, &z, kind).unwrap().error;
            let b = approximation_error(&g, &us, &z, kind).unwrap().error;
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
