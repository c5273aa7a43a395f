//! Evaluation of a joint word/sense space.

pub mod datasets;
pub mod report;
pub mod space;
pub mod stats;
pub mod tasks;

pub use datasets::{read_clustering, read_similarity, read_wsd, ClusterPair, SimilarityPair, WsdInstance};
pub use report::EvalReport;
pub use space::{cosine, nearest_neighbors, VectorSpace};
pub use stats::{pearson, spearman};
pub use tasks::{
    closest_sense_sim, eval_mcs, eval_similarity, f_measure, gamma_grid, mcs, sense_clustering, tune_gamma,
    word_cosine_sim, ClusteringResult, Confusion, GammaSearch, McsResult, SimilarityStrategy, DEFAULT_GAMMA,
};
