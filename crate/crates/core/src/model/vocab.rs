use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::format::AnnotatedLine;

/// Label prefix that marks sense rows in exported embeddings.
pub const SENSE_PREFIX: &str = "s#";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabEntry {
    pub label: String,
    pub count: u64,
}

/// One namespace (words or senses) of the vocabulary, sorted by descending
/// count with ties broken by label.
#[derive(Clone, Debug, Default)]
pub struct Namespace {
    entries: Vec<VocabEntry>,
    index: HashMap<String, u32>,
}

impl Namespace {
    fn from_counts(counts: HashMap<String, u64>, min_count: u64) -> Self {
        let mut entries: Vec<VocabEntry> = counts
            .into_iter()
            .filter(|&(_, count)| count >= min_count)
            .map(|(label, count)| VocabEntry { label, count })
            .collect();
        entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.label.clone(), i as u32))
            .collect();
        Namespace { entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn entry(&self, idx: u32) -> &VocabEntry {
        &self.entries[idx as usize]
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.count).collect()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    pub words: Namespace,
    pub senses: Namespace,
    pub min_count: u64,
}

/// Count words (mentions under their joined form) and attached senses, then
/// drop entries seen fewer than `min_count` times.
pub fn build_vocab(corpus: &[AnnotatedLine], min_count: u64) -> Result<Vocabulary> {
    let mut words: HashMap<String, u64> = HashMap::new();
    let mut senses: HashMap<String, u64> = HashMap::new();
    let mut n_tokens = 0usize;
    for line in corpus {
        for token in &line.tokens {
            if token.form.starts_with(SENSE_PREFIX) {
                return Err(Error::invalid(format!(
                    "word {:?} uses the reserved sense prefix {SENSE_PREFIX:?}",
                    token.form
                )));
            }
            n_tokens += 1;
            *words.entry(token.form.clone()).or_default() += 1;
            for s in &token.senses {
                *senses.entry(s.as_str().to_string()).or_default() += 1;
            }
        }
    }
    if n_tokens == 0 {
        return Err(Error::invalid("cannot build a vocabulary from an empty corpus"));
    }
    Ok(Vocabulary {
        words: Namespace::from_counts(words, min_count),
        senses: Namespace::from_counts(senses, min_count),
        min_count,
    })
}

/// One corpus position after vocabulary lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Position {
    pub word: Option<u32>,
    pub senses: Vec<u32>,
}

pub type EncodedUnit = Vec<Position>;

impl Vocabulary {
    /// Map a line onto vocabulary indices. Out-of-vocabulary words and senses
    /// are stripped; positions left with neither are dropped.
    pub fn encode(&self, line: &AnnotatedLine) -> EncodedUnit {
        line.tokens
            .iter()
            .filter_map(|t| {
                let word = self.words.get(&t.form);
                let senses: Vec<u32> = t
                    .senses
                    .iter()
                    .filter_map(|s| self.senses.get(s.as_str()))
                    .collect();
                (word.is_some() || !senses.is_empty()).then_some(Position { word, senses })
            })
            .collect()
    }

    pub fn encode_corpus(&self, corpus: &[AnnotatedLine]) -> Vec<EncodedUnit> {
        corpus
            .iter()
            .map(|l| self.encode(l))
            .filter(|u| !u.is_empty())
            .collect()
    }
}
