//! Joint word and sense embeddings trained with an extended CBOW objective.

pub mod cbow;
pub mod embeddings;
pub mod huffman;
pub mod params;
pub mod train;
pub mod vocab;

pub use cbow::{
    hs_log_prob, instance_gradient, instance_loss, make_instances, train_step, train_step_traced, AppliedDelta,
    InstanceGradient,
    LayerMode, TrainingInstance, Trees, UpdateCause,
};
pub use embeddings::{export_embeddings, sense_label, Embeddings};
pub use huffman::{build_huffman, HuffmanTree};
pub use params::{Matrix, ModelState, Space};
pub use train::{build_trees, learning_rate, train, train_from, TrainConfig, TrainOutcome};
pub use vocab::{build_vocab, EncodedUnit, Position, Vocabulary, SENSE_PREFIX};
