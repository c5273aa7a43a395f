//! Tab-separated benchmark files.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::semnet::SynsetId;

/// Word pair with a gold similarity score.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityPair {
    pub word1: String,
    pub word2: String,
    pub gold: f64,
}

/// Synset pair with a gold merge decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPair {
    pub synset1: SynsetId,
    pub synset2: SynsetId,
    pub gold: bool,
}

/// Disambiguation instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsdInstance {
    pub id: String,
    pub lemma: String,
    pub gold: Vec<SynsetId>,
}

/// Words are lowercased and internal spaces joined with `_`, matching the
/// lexicon and corpus conventions.
pub fn normalize_word(word: &str) -> String {
    word.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

fn records<R: BufRead, T>(
    source: R,
    fields: usize,
    mut parse: impl FnMut(&[&str]) -> Result<T>,
) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != fields {
            return Err(Error::parse(
                lineno,
                format!("expected {fields} tab-separated fields, found {}", cols.len()),
            ));
        }
        out.push(parse(&cols).map_err(|e| Error::parse(lineno, e.to_string()))?);
    }
    Ok(out)
}

pub fn read_similarity<R: BufRead>(source: R) -> Result<Vec<SimilarityPair>> {
    records(source, 3, |c| {
        let gold: f64 = c[2]
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("invalid score {:?}", c[2])))?;
        if !gold.is_finite() {
            return Err(Error::invalid("score must be finite"));
        }
        let (word1, word2) = (normalize_word(c[0]), normalize_word(c[1]));
        if word1.is_empty() || word2.is_empty() {
            return Err(Error::invalid("empty word"));
        }
        Ok(SimilarityPair { word1, word2, gold })
    })
}

pub fn read_clustering<R: BufRead>(source: R) -> Result<Vec<ClusterPair>> {
    records(source, 3, |c| {
        let gold = match c[2].trim() {
            "1" => true,
            "0" => false,
            other => return Err(Error::invalid(format!("label must be 0 or 1, got {other:?}"))),
        };
        Ok(ClusterPair {
            synset1: SynsetId::new(c[0])?,
            synset2: SynsetId::new(c[1])?,
            gold,
        })
    })
}

pub fn read_wsd<R: BufRead>(source: R) -> Result<Vec<WsdInstance>> {
    records(source, 3, |c| {
        let lemma = normalize_word(c[1]);
        if c[0].is_empty() || lemma.is_empty() {
            return Err(Error::invalid("empty instance id or lemma"));
        }
        let gold = c[2].split(',').map(SynsetId::new).collect::<Result<Vec<_>>>()?;
        Ok(WsdInstance {
            id: c[0].to_string(),
            lemma,
            gold,
        })
    })
}
