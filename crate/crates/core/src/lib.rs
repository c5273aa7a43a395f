//! Sense-annotated corpora and joint word/sense embeddings.
//!
//! The pipeline has three stages:
//!
//! 1. [`annotator`] links the words of a raw corpus to synsets of a
//!    [`semnet::SemanticNetwork`] through their in-context connectivity.
//! 2. [`model`] trains word and sense vectors in one space with an extended
//!    CBOW objective over the annotated corpus.
//! 3. [`eval`] scores the space on word similarity, sense clustering and
//!    most-common-sense selection.

pub mod annotator;
pub mod error;
pub mod eval;
pub mod format;
pub mod model;
pub mod semnet;

pub use error::{Error, Result};
