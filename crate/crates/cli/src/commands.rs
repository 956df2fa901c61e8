use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use logpr::embedding::{log_pagerank_embedding, EmbeddingConfig, EmbeddingMatrix, Sampling, SvdMethod, Transform};
use logpr::evaluation::{
    approximation_error, joint_correlation, reproduce_table1, subspace_angle, variance_study, Table1Config,
    TrialSeeding, VarianceConfig,
};
use logpr::generators::GeneratorSpec;
use logpr::hypergraph::{hypergraph_log_pr_embedding, Expansion, HypergraphDiffusionConfig, PlantedSpec};
use logpr::io::{self, IndexBase};
use logpr::linalg::SolverKind;
use logpr::pagerank::{prepare, PageRankConfig};
use logpr::spectral::{laplacian_eigenpairs, EigenMethod};
use logpr::{Graph, LaplacianKind, WalkKind};

use crate::output::{sibling, Run};
use crate::plot;
use crate::*;

impl From<WalkArg> for WalkKind {
    fn from(w: WalkArg) -> Self {
        match w {
            WalkArg::Lazy => WalkKind::Lazy,
            WalkArg::Standard => WalkKind::Standard,
        }
    }
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Direct => SolverKind::Direct,
            SolverArg::Iterative => SolverKind::Iterative,
        }
    }
}

impl From<LaplacianArg> for LaplacianKind {
    fn from(l: LaplacianArg) -> Self {
        match l {
            LaplacianArg::Normalized => LaplacianKind::Normalized,
            LaplacianArg::RandomWalk => LaplacianKind::RandomWalk,
            LaplacianArg::Combinatorial => LaplacianKind::Combinatorial,
        }
    }
}

impl PageRankArgs {
    fn config(&self) -> PageRankConfig {
        PageRankConfig { alpha: self.alpha, walk: self.walk.into(), solver: self.solver.into(), tol: self.tol }
    }
}

impl EmbeddingArgs {
    fn config(&self, pagerank: PageRankConfig) -> EmbeddingConfig {
        EmbeddingConfig {
            k: self.k,
            samples: self.samples,
            pagerank,
            transform: match self.transform {
                TransformArg::Log => Transform::Log,
                TransformArg::Identity => Transform::Identity,
            },
            rng_seed: self.rng_seed,
            zero_replacement_factor: self.zero_factor,
            normalize_columns: self.normalize_columns,
            sampling: match self.sampling {
                SamplingArg::WithoutReplacement => Sampling::WithoutReplacement,
                SamplingArg::WithReplacement => Sampling::WithReplacement,
            },
            svd: match self.svd {
                SvdArg::Dense => SvdMethod::Dense,
                SvdArg::Randomized => SvdMethod::Randomized,
            },
        }
    }
}

struct LoadedGraph {
    graph: Graph,
    coordinates: Option<Vec<[f64; 2]>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn load_graph(path: &Path, base: IndexBase) -> Result<LoadedGraph, CliError> {
    let text = read(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first == Some("@coordinates") {
        let p = io::parse_point_graph(&text, base)?;
        Ok(LoadedGraph { graph: p.graph, coordinates: Some(p.coordinates) })
    } else {
        Ok(LoadedGraph { graph: io::parse_edge_list(&text, base)?.0, coordinates: None })
    }
}

fn load_input(input: &GraphInput, run: &mut Run) -> Result<LoadedGraph, CliError> {
    run.input(&input.graph);
    let g = load_graph(&input.graph, input.index_base.into())?;
    run.stage("load");
    Ok(g)
}

/// Side data for `generate` and `hypergraph` outputs.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub coordinates: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

#[derive(Serialize)]
struct EmbeddingSidecar<'a> {
    n: usize,
    k: usize,
    singular_values: &'a [f64],
    flagged_columns: &'a [usize],
    provenance: &'a logpr::embedding::Provenance,
}

fn write_embedding(run: &mut Run, out: &Path, emb: &EmbeddingMatrix) -> Result<(), CliError> {
    run.write(out, io::write_embedding_csv(&emb.z)?.as_bytes())?;
    let side = EmbeddingSidecar {
        n: emb.z.nrows(),
        k: emb.z.ncols(),
        singular_values: &emb.singular_values,
        flagged_columns: &emb.flagged_columns,
        provenance: &emb.provenance,
    };
    run.write_json(&sibling(out, ".json"), &side)
}

pub fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let mut run = Run::new("generate", &a)?;
    let spec = match a.family {
        FamilyArg::Chain => GeneratorSpec::chain(a.n),
        FamilyArg::Knn => GeneratorSpec::knn(a.n, a.k, a.rng_seed),
        FamilyArg::Sbm => GeneratorSpec::sbm(a.n, a.blocks, a.p, a.q, a.rng_seed),
    };
    let g = if a.reconnect_attempts == 0 {
        let g = spec.generate()?;
        if !g.graph.is_connected() {
            log::warn!("{} is disconnected", spec.label());
        }
        g
    } else {
        spec.generate_connected(a.reconnect_attempts)?
    };
    run.seed(g.spec.rng_seed);
    run.stage("generate");
    run.write(&a.out, io::write_edge_list(&g.graph).as_bytes())?;
    let side = Sidecar {
        label: spec.label(),
        rng_seed: Some(g.spec.rng_seed),
        coordinates: g.coordinates,
        labels: g.labels.map(|l| l.iter().map(|b| b.to_string()).collect()),
        parameters: serde_json::to_value(g.spec)?,
    };
    run.write_json(&sibling(&a.out, ".json"), &side)?;
    println!("{}: n={} m={} seed={}", spec.label(), g.graph.n(), g.graph.edge_count(), g.spec.rng_seed);
    run.finish(&a.out)
}

pub fn embed(a: EmbedCmd) -> Result<(), CliError> {
    let mut run = Run::new("embed", &a)?;
    let g = load_input(&a.input, &mut run)?;
    run.seed(a.embedding.rng_seed);
    let emb = log_pagerank_embedding(&g.graph, &a.embedding.config(a.pagerank.config()))?;
    run.stage("embed");
    if !emb.flagged_columns.is_empty() {
        log::warn!("columns beyond the numerical rank: {:?}", emb.flagged_columns);
    }
    write_embedding(&mut run, &a.out, &emb)?;
    run.finish(&a.out)
}

#[derive(Serialize)]
struct SpectralSidecar<'a> {
    laplacian: LaplacianKind,
    eigenvalues: &'a [f64],
    residuals: &'a [f64],
    degenerate: &'a [usize],
}

pub fn spectral(a: SpectralArgs) -> Result<(), CliError> {
    let mut run = Run::new("spectral", &a)?;
    let g = load_input(&a.input, &mut run)?;
    let method = match a.method {
        MethodArg::Auto => EigenMethod::Auto,
        MethodArg::Dense => EigenMethod::Dense,
        MethodArg::ShiftInvert => EigenMethod::ShiftInvert,
    };
    let basis = laplacian_eigenpairs(&g.graph, a.k, a.laplacian.into(), method)?;
    run.stage("eigensolve");
    run.write(&a.out, io::write_embedding_csv(&basis.embedding())?.as_bytes())?;
    let side = SpectralSidecar {
        laplacian: a.laplacian.into(),
        eigenvalues: &basis.eigenvalues,
        residuals: &basis.residuals,
        degenerate: &basis.degenerate,
    };
    run.write_json(&sibling(&a.out, ".json"), &side)?;
    run.finish(&a.out)
}

#[derive(Serialize)]
struct ColumnComparison {
    column: usize,
    s: f64,
    p: f64,
    error: f64,
    correlation: f64,
}

#[derive(Serialize)]
struct CompareReport {
    laplacian: LaplacianKind,
    columns: Vec<ColumnComparison>,
    subspace_angle: f64,
}

pub fn compare(a: CompareArgs) -> Result<(), CliError> {
    let mut run = Run::new("compare", &a)?;
    let g = load_input(&a.input, &mut run)?;
    run.input(&a.embedding);
    run.input(&a.baseline);
    let u = io::parse_embedding_csv(&read(&a.embedding)?)?;
    let z = io::parse_embedding_csv(&read(&a.baseline)?)?;
    let n = g.graph.n();
    if u.nrows() != n || z.nrows() != n {
        return Err(logpr::Error::DimensionMismatch { expected: n, found: u.nrows().min(z.nrows()) }.into());
    }
    let kind: LaplacianKind = a.laplacian.into();
    let k = u.ncols().min(z.ncols());
    let mut columns = Vec::with_capacity(k);
    for j in 0..k {
        let uj: Vec<f64> = u.column(j).iter().copied().collect();
        let zj: Vec<f64> = z.column(j).iter().copied().collect();
        let r = approximation_error(&g.graph, &uj, &zj, kind)?;
        let c = joint_correlation(&uj, &zj)?;
        columns.push(ColumnComparison { column: j + 1, s: r.s, p: r.p, error: r.error, correlation: c.correlation });
    }
    let angle = subspace_angle(&u.columns(0, k).into_owned(), &z.columns(0, k).into_owned())?;
    run.stage("compare");
    for c in &columns {
        println!("z{}: error {:.4}% (|r| = {:.4})", c.column, 100.0 * c.error.abs(), c.correlation);
    }
    println!("largest principal angle: {angle:.4} rad");
    run.write_json(&a.out, &CompareReport { laplacian: kind, columns, subspace_angle: angle })?;
    run.finish(&a.out)
}

pub fn pagerank(a: PageRankCmd) -> Result<(), CliError> {
    let mut run = Run::new("pagerank", &a)?;
    let g = load_input(&a.input, &mut run)?;
    let seed = a
        .seed
        .checked_sub(match a.input.index_base {
            IndexBaseArg::Zero => 0,
            IndexBaseArg::One => 1,
        })
        .ok_or_else(|| CliError::Usage("seed is below the index base".into()))?;
    let solver = prepare(&g.graph, a.pagerank.config())?;
    let x = solver.solve_seed(seed)?;
    run.stage("solve");
    let mut text = String::from("vertex,value\n");
    for (i, v) in x.values.iter().enumerate() {
        text.push_str(&format!("{i},{v}\n"));
    }
    run.write(&a.out, text.as_bytes())?;
    run.finish(&a.out)
}

/// Splits on commas outside parentheses, so `sbm(…)` labels survive.
fn split_rows(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|r| r.trim().to_string()).filter(|r| !r.is_empty()).collect()
}

pub fn table1(a: Table1Args) -> Result<(), CliError> {
    let mut run = Run::new("table1", &a)?;
    let specs = split_rows(&a.rows)
        .iter()
        .map(|r| GeneratorSpec::from_label(r, a.graph_seed))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let config = Table1Config {
        reps: a.reps,
        k: a.k,
        rng_seed: a.rng_seed,
        laplacian: a.laplacian.into(),
        walk: a.walk.into(),
        solver: a.solver.into(),
        ..Default::default()
    };
    run.seed(a.rng_seed);
    run.seed(a.graph_seed);
    let table = reproduce_table1(&specs, &a.alphas, &config)?;
    run.stage("table1");
    let mut text = table.to_text();
    let mut agreement: Vec<(f64, f64)> =
        a.alphas.iter().filter_map(|&al| table.published_agreement(al).map(|d| (al, d))).collect();
    for (al, d) in &agreement {
        text.push_str(&format!("alpha {al}: median |ln(ours / published)| = {d:.3}\n"));
    }
    agreement.retain(|(al, _)| *al > 0.99 + 1e-12);
    if let Some((al, _)) = agreement.iter().min_by(|x, y| x.1.total_cmp(&y.1)) {
        text.push_str(&format!("high-alpha column agrees best with alpha {al}\n"));
    }
    print!("{text}");
    run.write(&a.out, table.to_csv().as_bytes())?;
    run.write(&sibling(&a.out, ".txt"), text.as_bytes())?;
    run.finish(&a.out)
}

pub fn variance(a: VarianceArgs) -> Result<(), CliError> {
    let mut run = Run::new("variance", &a)?;
    let g = load_input(&a.input, &mut run)?;
    let study = VarianceConfig {
        trials: a.trials,
        fractions: a.fractions.clone(),
        laplacian: a.laplacian.into(),
        seeding: match a.seeding {
            SeedingArg::Streams => TrialSeeding::Streams,
            SeedingArg::Fixed => TrialSeeding::Fixed,
        },
    };
    run.seed(a.embedding.rng_seed);
    let report = variance_study(&g.graph, &a.embedding.config(a.pagerank.config()), &study)?;
    run.stage("trials");
    let mut summary = String::from("fraction,samples,trials,min,max,median,variance,spread\n");
    let mut trials = String::from("fraction,trial,error\n");
    for r in &report.rows {
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.fraction,
            r.samples,
            r.errors.len(),
            r.min,
            r.max,
            r.median,
            r.variance,
            r.spread()
        ));
        for (t, e) in r.errors.iter().enumerate() {
            trials.push_str(&format!("{},{t},{e}\n", r.fraction));
        }
        println!(
            "fraction {:>5}: samples {:>5}, median {:.3}%, spread {:.3} pp",
            r.fraction,
            r.samples,
            100.0 * r.median.abs(),
            100.0 * r.spread()
        );
    }
    run.write(&a.out, summary.as_bytes())?;
    run.write(&sibling(&a.out, ".trials.csv"), trials.as_bytes())?;
    run.finish(&a.out)
}

pub fn hypergraph(a: HypergraphArgs) -> Result<(), CliError> {
    let mut run = Run::new("hypergraph", &a)?;
    let base: IndexBase = a.index_base.into();
    let (h, label) = match &a.input {
        Some(path) => {
            run.input(path);
            let (h, dropped) = io::parse_hypergraph(&read(path)?, base)?;
            if dropped > 0 {
                println!("dropped {dropped} singleton hyperedge(s)");
            }
            (h, path.display().to_string())
        }
        None => {
            let (h, used) = PlantedSpec { rng_seed: a.graph_seed, ..Default::default() }.generate_connected(50)?;
            run.seed(used);
            (h, format!("planted(seed={used})"))
        }
    };
    let h = match &a.labels {
        Some(p) => {
            run.input(p);
            let labels = io::parse_labels(&read(p)?, h.n(), base)?;
            h.with_labels(labels)?
        }
        None => h,
    };
    run.stage("load");
    let diffusion = HypergraphDiffusionConfig {
        primitive: match a.primitive {
            PrimitiveArg::Clique => Expansion::Clique,
            PrimitiveArg::Star => Expansion::Star,
        },
        alpha: a.pagerank.alpha,
        walk: a.pagerank.walk.into(),
        solver: a.pagerank.solver.into(),
        kappa: a.kappa,
        gamma: a.gamma,
        rho: a.rho,
    };
    run.seed(a.embedding.rng_seed);
    let emb = hypergraph_log_pr_embedding(&h, &a.embedding.config(a.pagerank.config()), &diffusion)?;
    run.stage("embed");
    write_embedding(&mut run, &a.out, &emb)?;
    let side = Sidecar {
        label,
        rng_seed: None,
        coordinates: None,
        labels: h.labels().map(<[String]>::to_vec),
        parameters: serde_json::to_value(diffusion)?,
    };
    run.write_json(&sibling(&a.out, ".hypergraph.json"), &side)?;
    run.finish(&a.out)
}

pub fn plot(a: PlotArgs) -> Result<(), CliError> {
    let mut run = Run::new("plot", &a)?;
    run.input(&a.embedding);
    let z = io::parse_embedding_csv(&read(&a.embedding)?)?;
    let n = z.nrows();
    let sidecar: Sidecar = match &a.sidecar {
        Some(p) => {
            run.input(p);
            serde_json::from_str(&read(p)?)?
        }
        None => Sidecar::default(),
    };
    let labels = match &a.labels {
        Some(p) => {
            run.input(p);
            Some(io::parse_labels(&read(p)?, n, a.index_base.into())?)
        }
        None => sidecar.labels.clone(),
    };
    if labels.as_ref().is_some_and(|l| l.len() != n) {
        return Err(CliError::Usage(format!("labels do not cover the {n} embedding rows")));
    }
    let column = |j: usize| -> Result<Vec<f64>, CliError> {
        if j == 0 || j > z.ncols() {
            return Err(CliError::Usage(format!("column {j} outside 1..={}", z.ncols())));
        }
        Ok(z.column(j - 1).iter().copied().collect())
    };
    let svg = match a.color_column {
        Some(j) => {
            let values = column(j)?;
            let path = a.graph.as_ref().ok_or_else(|| CliError::Usage("drawing mode needs --graph".into()))?;
            run.input(path);
            let g = load_graph(path, a.index_base.into())?;
            let coords = g
                .coordinates
                .or(sidecar.coordinates)
                .ok_or_else(|| CliError::Usage("no coordinates in the graph file or sidecar".into()))?;
            if coords.len() != n || g.graph.n() != n {
                return Err(logpr::Error::DimensionMismatch { expected: n, found: coords.len() }.into());
            }
            let edges: Vec<(usize, usize)> = g.graph.edges().map(|(u, v, _)| (u, v)).collect();
            plot::graph_drawing(&coords, &edges, &values, &a.title)
        }
        None => {
            if a.columns.len() != 2 {
                return Err(CliError::Usage("--columns takes exactly two indices".into()));
            }
            let (x, y) = (column(a.columns[0])?, column(a.columns[1])?);
            let points: Vec<[f64; 2]> = x.into_iter().zip(y).map(|(a, b)| [a, b]).collect();
            plot::scatter(&points, labels.as_deref(), &a.title)
        }
    };
    run.write(&a.out, svg.as_bytes())?;
    run.finish(&a.out)
}
