//! Plain-text embedding files: a `<count> <dim>` header, then one
//! `label v1 ... v_dim` row per entry. Sense labels carry the `s#` prefix.

use std::io::{BufRead, Write};

use super::params::ModelState;
use super::vocab::{Vocabulary, SENSE_PREFIX};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Embeddings {
    pub dim: usize,
    pub labels: Vec<String>,
    /// Row-major, `labels.len() * dim` values.
    pub data: Vec<f64>,
}

impl Embeddings {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Values use Rust's shortest round-trip float rendering, so reading a
    /// written file and writing it again reproduces it byte for byte.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.labels.len(), self.dim)?;
        let mut line = String::new();
        for (i, label) in self.labels.iter().enumerate() {
            line.clear();
            line.push_str(label);
            for v in self.row(i) {
                line.push(' ');
                line.push_str(&v.to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))??;
        let mut fields = header.split(' ');
        let (count, dim) = match (fields.next(), fields.next(), fields.next()) {
            (Some(c), Some(d), None) => (c.parse::<usize>(), d.parse::<usize>()),
            _ => return Err(Error::parse(1, "header must be `<count> <dim>`")),
        };
        let (count, dim) = match (count, dim) {
            (Ok(c), Ok(d)) if d > 0 => (c, d),
            _ => return Err(Error::parse(1, "header must hold a count and a positive dimension")),
        };
        let mut labels = Vec::with_capacity(count.min(1 << 20));
        let mut data = Vec::with_capacity(count.saturating_mul(dim).min(1 << 24));
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line?;
            if labels.len() == count {
                if line.is_empty() {
                    continue;
                }
                return Err(Error::parse(lineno, format!("more than {count} rows")));
            }
            let mut fields = line.split(' ');
            let label = fields.next().filter(|l| !l.is_empty()).ok_or_else(|| Error::parse(lineno, "missing label"))?;
            let start = data.len();
            for f in fields {
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("invalid number {f:?}")))?;
                data.push(v);
            }
            if data.len() - start != dim {
                return Err(Error::parse(
                    lineno,
                    format!("expected {dim} values, found {}", data.len() - start),
                ));
            }
            labels.push(label.to_string());
        }
        if labels.len() != count {
            return Err(Error::invalid(format!(
                "header announces {count} rows, found {}",
                labels.len()
            )));
        }
        Ok(Embeddings { dim, labels, data })
    }
}

/// Label of a sense row.
pub fn sense_label(synset: &str) -> String {
    format!("{SENSE_PREFIX}{synset}")
}

/// Input vectors of all words followed by all senses.
pub fn export_embeddings(state: &ModelState, vocab: &Vocabulary) -> Embeddings {
    let mut labels = Vec::with_capacity(vocab.words.len() + vocab.senses.len());
    let mut data = Vec::with_capacity(labels.capacity() * state.dim);
    for (i, e) in vocab.words.entries().iter().enumerate() {
        labels.push(e.label.clone());
        data.extend(state.word_input.row(i));
    }
    for (i, e) in vocab.senses.entries().iter().enumerate() {
        labels.push(sense_label(&e.label));
        data.extend(state.sense_input.row(i));
    }
    Embeddings {
        dim: state.dim,
        labels,
        data,
    }
}
