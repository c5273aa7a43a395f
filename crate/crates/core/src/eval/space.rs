use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::embeddings::{sense_label, Embeddings};
use crate::model::vocab::SENSE_PREFIX;
use crate::semnet::SynsetId;

/// Cosine similarity, or `None` when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

/// Cosine with the zero-vector convention applied: `(value, degenerate)`.
pub fn cosine_or_zero(a: &[f64], b: &[f64]) -> (f64, bool) {
    match cosine(a, b) {
        Some(c) => (c, false),
        None => (0.0, true),
    }
}

/// Joint space of word and sense vectors plus each word's candidate senses.
#[derive(Clone, Debug)]
pub struct VectorSpace {
    embeddings: Embeddings,
    index: HashMap<String, usize>,
    candidates: HashMap<String, Vec<usize>>,
}

impl VectorSpace {
    /// `lexicon` maps normalized forms to candidate synsets; candidates with
    /// no vector in `embeddings` are dropped, in-order otherwise.
    pub fn new(embeddings: Embeddings, lexicon: &[(String, Vec<SynsetId>)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(embeddings.len());
        for (i, label) in embeddings.labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate embedding label {label:?}")));
            }
        }
        let mut candidates = HashMap::new();
        for (form, ids) in lexicon {
            let rows: Vec<usize> = ids
                .iter()
                .filter_map(|id| index.get(&sense_label(id.as_str())).copied())
                .collect();
            if !rows.is_empty() {
                candidates.insert(form.clone(), rows);
            }
        }
        Ok(VectorSpace {
            embeddings,
            index,
            candidates,
        })
    }

    pub fn dim(&self) -> usize {
        self.embeddings.dim
    }

    pub fn len(&self) -> usize {
        self.embeddings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embeddings.is_empty()
    }

    pub fn vector(&self, label: &str) -> Option<&[f64]> {
        self.index.get(label).map(|&i| self.embeddings.row(i))
    }

    pub fn label(&self, row: usize) -> &str {
        &self.embeddings.labels[row]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        self.embeddings.row(row)
    }

    /// Candidate sense rows of a word, in lexicon order.
    pub fn candidate_rows(&self, word: &str) -> &[usize] {
        self.candidates.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn candidate_labels(&self, word: &str) -> Vec<&str> {
        self.candidate_rows(word).iter().map(|&r| self.label(r)).collect()
    }

    pub fn is_sense(label: &str) -> bool {
        label.starts_with(SENSE_PREFIX)
    }

    pub fn embeddings(&self) -> &Embeddings {
        &self.embeddings
    }
}

/// Top `k` entries of the whole space by cosine to `label`, excluding
/// `label` itself. Ties keep file order.
pub fn nearest_neighbors(space: &VectorSpace, label: &str, k: usize) -> Result<Vec<(String, f64)>> {
    let &query_row = space
        .index
        .get(label)
        .ok_or_else(|| Error::invalid(format!("label {label:?} is not in the space")))?;
    let query = space.row(query_row);
    let mut scored: Vec<(usize, f64)> = (0..space.len())
        .filter(|&r| r != query_row)
        .map(|r| (r, cosine_or_zero(query, space.row(r)).0))
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored
        .into_iter()
        .map(|(r, c)| (space.label(r).to_string(), c))
        .collect())
}
