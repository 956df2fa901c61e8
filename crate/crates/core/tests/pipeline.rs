use std::io::Write;

use logpr::embedding::{log_pagerank_embedding, EmbeddingConfig, SvdMethod, Transform};
use logpr::evaluation::{approximation_error, subspace_angle};
use logpr::generators::{chain, GeneratorSpec};
use logpr::hypergraph::{hypergraph_pagerank, HypergraphDiffusionConfig};
use logpr::io::{load_edge_list, load_hypergraph, load_point_graph, IndexBase};
use logpr::linalg::SolverKind;
use logpr::pagerank::{prepare, PageRankConfig};
use logpr::spectral::{laplacian_eigenpairs, lazy_walk_eigenpairs, EigenMethod};
use logpr::{LaplacianKind, WalkKind};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn direct_and_iterative_solvers_agree() {
    let g = GeneratorSpec::knn(800, 6, 2).generate_connected(20).unwrap().graph;
    for walk in [WalkKind::Lazy, WalkKind::Standard] {
        let base = PageRankConfig { alpha: 0.999, walk, tol: 1e-13, ..Default::default() };
        let d = prepare(&g, base).unwrap().solve_seed(17).unwrap().values;
        let it = prepare(&g, PageRankConfig { solver: SolverKind::Iterative, ..base }).unwrap().solve_seed(17).unwrap().values;
        assert!(max_abs_diff(&d, &it) < 1e-12, "{walk:?}");
    }
}

#[test]
fn sparse_and_dense_eigensolvers_agree() {
    let g = GeneratorSpec::knn(300, 6, 5).generate_connected(20).unwrap().graph;
    for kind in [LaplacianKind::Normalized, LaplacianKind::RandomWalk, LaplacianKind::Combinatorial] {
        let d = laplacian_eigenpairs(&g, 3, kind, EigenMethod::Dense).unwrap();
        let s = laplacian_eigenpairs(&g, 3, kind, EigenMethod::ShiftInvert).unwrap();
        assert!(max_abs_diff(&d.eigenvalues, &s.eigenvalues) < 1e-8, "{kind:?}");
        assert!(subspace_angle(&d.embedding(), &s.embedding()).unwrap() < 1e-6, "{kind:?}");
    }
}

#[test]
fn regular_graph_walk_and_laplacian_share_vectors() {
    let n = 20;
    let (g, _) = logpr::Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n, 1.0)).collect::<Vec<_>>()).unwrap();
    let w = lazy_walk_eigenpairs(&g, 4).unwrap();
    let l = laplacian_eigenpairs(&g, 4, LaplacianKind::Normalized, EigenMethod::Dense).unwrap();
    for (mu, lambda) in w.eigenvalues.iter().zip(&l.eigenvalues) {
        assert!((mu - (1.0 - lambda / 2.0)).abs() < 1e-12);
    }
    assert!((w.eigenvalues[0] - 1.0).abs() < 1e-14);
    assert!(w.eigenvalues.iter().all(|&m| (0.0..=1.0 + 1e-14).contains(&m)));
}

#[test]
fn log_beats_raw_on_a_long_chain() {
    let g = chain(1000).unwrap();
    let z = laplacian_eigenpairs(&g, 1, LaplacianKind::default(), EigenMethod::Auto).unwrap().vector(1);
    let err = |transform| {
        let cfg = EmbeddingConfig { transform, pagerank: PageRankConfig::with_alpha(0.9999), ..Default::default() };
        let u = log_pagerank_embedding(&g, &cfg).unwrap().z;
        let u2: Vec<f64> = u.column(0).iter().copied().collect();
        approximation_error(&g, &u2, &z, LaplacianKind::default()).unwrap().error.abs()
    };
    let (log, raw) = (err(Transform::Log), err(Transform::Identity));
    assert!(log < 0.05 && raw > 5.0 * log, "log {log}, raw {raw}");
}

#[test]
fn randomized_svd_matches_dense_span() {
    let g = GeneratorSpec::knn(600, 6, 8).generate_connected(20).unwrap().graph;
    let dense = log_pagerank_embedding(&g, &EmbeddingConfig::default()).unwrap().z;
    let cfg = EmbeddingConfig { svd: SvdMethod::Randomized, ..Default::default() };
    let rand = log_pagerank_embedding(&g, &cfg).unwrap().z;
    assert!(subspace_angle(&dense, &rand).unwrap() < 1e-6);
}

#[test]
fn embeddings_are_reproducible() {
    let g = GeneratorSpec::sbm(40, 3, 0.3, 0.02, 1).generate_connected(20).unwrap().graph;
    let cfg = EmbeddingConfig { rng_seed: 77, k: 3, ..Default::default() };
    let a = log_pagerank_embedding(&g, &cfg).unwrap();
    let b = log_pagerank_embedding(&g, &cfg).unwrap();
    assert_eq!(a.z, b.z);
    assert_eq!(a.provenance, b.provenance);
}

#[test]
fn loaders_read_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::File::create(&p).unwrap().write_all(text.as_bytes()).unwrap();
        p
    };
    let (g, _) = load_edge_list(write("g.txt", "1 2\n2 3\n3 1 2.0\n"), IndexBase::One).unwrap();
    assert_eq!((g.n(), g.edge_count()), (3, 3));
    let p = load_point_graph(write("p.txt", "@coordinates\n0 0\n1 0\n@edges\n0 1\n"), IndexBase::Zero).unwrap();
    assert_eq!(p.coordinates.len(), 2);
    let (h, dropped) = load_hypergraph(write("h.txt", "0 1 2\n5\n1 3\n2 4 5\n"), IndexBase::Zero).unwrap();
    assert_eq!(dropped, 1);
    let x = hypergraph_pagerank(&h, HypergraphDiffusionConfig::default(), 0).unwrap();
    assert_eq!(x.values.len(), 6);
    assert!(load_edge_list(dir.path().join("missing.txt"), IndexBase::Zero).is_err());
}
