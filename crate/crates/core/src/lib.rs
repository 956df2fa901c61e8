pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod linalg;
pub mod pagerank;
pub mod rng;
pub mod spectral;

pub use error::{Error, ErrorClass, Result};
pub use graph::{BuildReport, Graph, LaplacianKind, WalkKind, WalkOperator};
pub use rng::PortableRng;
pub use embedding::{log_pagerank_embedding, EmbeddingConfig, EmbeddingMatrix, Transform};
pub use hypergraph::{Hypergraph, HypergraphDiffusionConfig};
pub use pagerank::{PageRankConfig, PageRankVector, SeedDiffusion};
pub use spectral::{spectral_embedding, SpectralBasis};
