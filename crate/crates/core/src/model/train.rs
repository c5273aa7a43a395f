use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cbow::{make_instances, train_step, LayerMode, Trees};
use super::huffman::build_huffman;
use super::params::ModelState;
use super::vocab::{EncodedUnit, Vocabulary};
use crate::error::{Error, Result};

/// Learning rate never decays below this fraction of the initial rate.
pub const MIN_LR_FRACTION: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub input_mode: LayerMode,
    pub output_mode: LayerMode,
    pub dim: usize,
    pub window: usize,
    pub lr: f64,
    pub epochs: usize,
    pub min_count: u64,
    pub threads: usize,
    pub seed: u64,
    /// Single worker and fixed window: runs are bit-reproducible.
    pub deterministic: bool,
    /// Frequent-word subsampling threshold (word2vec `-sample`); off when `None`.
    pub subsample: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            input_mode: LayerMode::Senses,
            output_mode: LayerMode::Both,
            dim: 300,
            window: 8,
            lr: 0.025,
            epochs: 5,
            min_count: 5,
            threads: 1,
            seed: 1,
            deterministic: false,
            subsample: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim must be at least 1"));
        }
        if self.window == 0 {
            return Err(Error::invalid("window must be at least 1"));
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return Err(Error::invalid(format!("invalid learning rate {}", self.lr)));
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("invalid subsampling threshold {t}")));
            }
        }
        Ok(())
    }

    fn workers(&self) -> usize {
        if self.deterministic {
            1
        } else {
            self.threads.max(1)
        }
    }
}

/// Result of a training run.
#[derive(Debug)]
pub struct TrainOutcome {
    pub state: ModelState,
    pub trees: Trees,
    /// Mean instance loss per epoch (`NaN` for an epoch with no applied step).
    pub epoch_losses: Vec<f64>,
}

pub fn build_trees(vocab: &Vocabulary) -> Trees {
    Trees {
        words: build_huffman(&vocab.words.counts()),
        senses: build_huffman(&vocab.senses.counts()),
    }
}

/// Learning rate after `processed` of `total` positions.
pub fn learning_rate(initial: f64, processed: u64, total: u64) -> f64 {
    let lr = initial * (1.0 - processed as f64 / (total as f64 + 1.0));
    lr.max(initial * MIN_LR_FRACTION)
}

/// Train from a fresh state initialized with `config.seed`.
pub fn train(corpus: &[EncodedUnit], vocab: &Vocabulary, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let state = ModelState::init(vocab, config.dim, config.seed);
    train_from(state, corpus, vocab, config)
}

/// Continue training an existing state. Corpus units are split into
/// contiguous shards, one per worker; workers share `state` without locking.
pub fn train_from(
    state: ModelState,
    corpus: &[EncodedUnit],
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if state.dim != config.dim {
        return Err(Error::invalid("state dimension does not match the configuration"));
    }
    let trees = build_trees(vocab);
    let positions: u64 = corpus.iter().map(|u| u.len() as u64).sum();
    let total = positions * config.epochs as u64;
    let processed = AtomicU64::new(0);
    let workers = config.workers().min(corpus.len().max(1));
    let keep_prob = subsample_table(vocab, config.subsample);

    let sums = Mutex::new(vec![(0.0f64, 0u64); config.epochs]);
    let shard_len = corpus.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        for (worker, shard) in corpus.chunks(shard_len).enumerate() {
            let (state, trees, processed, sums, keep_prob) = (&state, &trees, &processed, &sums, &keep_prob);
            scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1 + worker as u64));
                let mut local = vec![(0.0f64, 0u64); config.epochs];
                let mut kept = EncodedUnit::new();
                for acc in local.iter_mut() {
                    for unit in shard {
                        let lr = learning_rate(config.lr, processed.load(Ordering::Relaxed), total);
                        let unit = match keep_prob {
                            Some(p) => {
                                kept.clear();
                                kept.extend(
                                    unit.iter()
                                        .filter(|pos| pos.word.is_none_or(|w| rng.gen::<f64>() < p[w as usize]))
                                        .cloned(),
                                );
                                &kept
                            }
                            None => unit,
                        };
                        let window_rng = if config.deterministic { None } else { Some(&mut rng) };
                        for instance in make_instances(unit, config.window, window_rng) {
                            if let Some(loss) =
                                train_step(&instance, state, trees, config.input_mode, config.output_mode, lr)
                            {
                                acc.0 += loss;
                                acc.1 += 1;
                            }
                        }
                        processed.fetch_add(unit.len() as u64, Ordering::Relaxed);
                    }
                }
                let mut sums = sums.lock().expect("loss accumulator poisoned");
                for (s, l) in sums.iter_mut().zip(local) {
                    s.0 += l.0;
                    s.1 += l.1;
                }
            });
        }
    });

    let epoch_losses = sums
        .into_inner()
        .expect("loss accumulator poisoned")
        .into_iter()
        .map(|(sum, n)| if n == 0 { f64::NAN } else { sum / n as f64 })
        .collect();
    if !state.all_finite() {
        return Err(Error::invalid("training diverged: non-finite parameters"));
    }
    Ok(TrainOutcome {
        state,
        trees,
        epoch_losses,
    })
}

/// word2vec keep probability `(sqrt(f / (t N)) + 1) * t N / f` per word.
fn subsample_table(vocab: &Vocabulary, threshold: Option<f64>) -> Option<Vec<f64>> {
    let t = threshold?;
    let scaled = t * vocab.words.total() as f64;
    Some(
        vocab
            .words
            .entries()
            .iter()
            .map(|e| {
                let f = e.count as f64;
                ((f / scaled).sqrt() + 1.0) * scaled / f
            })
            .collect(),
    )
}
