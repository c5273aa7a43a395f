//! Parameter storage shared by training workers.
//!
//! Rows are updated without locks: concurrent workers may lose each other's
//! updates (asynchronous SGD). Each element is an `AtomicU64` holding the
//! bits of an `f64`, accessed with relaxed ordering, so races are benign at
//! the language level.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::vocab::Vocabulary;

pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<AtomicU64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| AtomicU64::new(0f64.to_bits())).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(AtomicU64::new(f(r, c).to_bits()));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        f64::from_bits(self.data[row * self.cols + col].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col].store(value.to_bits(), Ordering::Relaxed);
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        (0..self.cols).map(|c| self.get(row, c)).collect()
    }

    /// `row += scale * delta`
    #[inline]
    pub fn add_to_row(&self, row: usize, delta: &[f64], scale: f64) {
        let base = row * self.cols;
        for (cell, &d) in self.data[base..base + self.cols].iter().zip(delta) {
            let v = f64::from_bits(cell.load(Ordering::Relaxed)) + scale * d;
            cell.store(v.to_bits(), Ordering::Relaxed);
        }
    }

    /// `⟨row, v⟩`
    #[inline]
    pub fn dot_row(&self, row: usize, v: &[f64]) -> f64 {
        let base = row * self.cols;
        self.data[base..base + self.cols]
            .iter()
            .zip(v)
            .map(|(cell, &x)| f64::from_bits(cell.load(Ordering::Relaxed)) * x)
            .sum()
    }

    /// `acc += scale * row`
    #[inline]
    pub fn accumulate_row(&self, row: usize, acc: &mut [f64], scale: f64) {
        let base = row * self.cols;
        for (a, cell) in acc.iter_mut().zip(&self.data[base..base + self.cols]) {
            *a += scale * f64::from_bits(cell.load(Ordering::Relaxed));
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.data
            .iter()
            .map(|c| f64::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|c| f64::from_bits(c.load(Ordering::Relaxed)).is_finite())
    }
}

impl Clone for Matrix {
    fn clone(&self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish()
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.to_vec() == other.to_vec()
    }
}

/// Which vocabulary namespace a parameter row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Word,
    Sense,
}

/// Input embeddings and hierarchical-softmax node vectors for both namespaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelState {
    pub dim: usize,
    pub word_input: Matrix,
    pub sense_input: Matrix,
    pub word_output: Matrix,
    pub sense_output: Matrix,
}

impl ModelState {
    /// Input rows uniform in `[-0.5/dim, 0.5/dim)` drawn from a generator
    /// seeded with `seed` (word rows first, then sense rows); node rows zero.
    pub fn init(vocab: &Vocabulary, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1.0 / dim as f64;
        let mut uniform = |_, _| (rng.gen::<f64>() - 0.5) * scale;
        let word_input = Matrix::from_fn(vocab.words.len(), dim, &mut uniform);
        let sense_input = Matrix::from_fn(vocab.senses.len(), dim, &mut uniform);
        ModelState {
            dim,
            word_input,
            sense_input,
            word_output: Matrix::zeros(vocab.words.len().saturating_sub(1), dim),
            sense_output: Matrix::zeros(vocab.senses.len().saturating_sub(1), dim),
        }
    }

    pub fn input(&self, space: Space) -> &Matrix {
        match space {
            Space::Word => &self.word_input,
            Space::Sense => &self.sense_input,
        }
    }

    pub fn output(&self, space: Space) -> &Matrix {
        match space {
            Space::Word => &self.word_output,
            Space::Sense => &self.sense_output,
        }
    }

    pub fn all_finite(&self) -> bool {
        self.word_input.all_finite()
            && self.sense_input.all_finite()
            && self.word_output.all_finite()
            && self.sense_output.all_finite()
    }
}
