//! Extended CBOW: context words and their associated senses predict the
//! target word and its senses through hierarchical softmax.
//!
//! The loss of one instance is
//! `E = -log p(w_t | ctx) - sum_{s in S_t} log p(s | ctx)`,
//! where `ctx` is pooled into one hidden vector by an unweighted average of
//! the active input rows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::huffman::HuffmanTree;
use super::params::{ModelState, Space};
use super::vocab::Position;
use crate::error::Error;

/// Which namespaces take part in a layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayerMode {
    Words,
    Senses,
    Both,
}

impl LayerMode {
    pub const ALL: [LayerMode; 3] = [LayerMode::Words, LayerMode::Senses, LayerMode::Both];

    pub fn uses_words(self) -> bool {
        matches!(self, LayerMode::Words | LayerMode::Both)
    }

    pub fn uses_senses(self) -> bool {
        matches!(self, LayerMode::Senses | LayerMode::Both)
    }
}

impl fmt::Display for LayerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerMode::Words => "words",
            LayerMode::Senses => "senses",
            LayerMode::Both => "both",
        })
    }
}

impl FromStr for LayerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "words" => Ok(LayerMode::Words),
            "senses" => Ok(LayerMode::Senses),
            "both" => Ok(LayerMode::Both),
            _ => Err(Error::invalid(format!(
                "unknown layer mode {s:?} (expected words, senses or both)"
            ))),
        }
    }
}

/// Huffman trees of both output layers.
#[derive(Clone, Debug, Default)]
pub struct Trees {
    pub words: HuffmanTree,
    pub senses: HuffmanTree,
}

impl Trees {
    pub fn get(&self, space: Space) -> &HuffmanTree {
        match space {
            Space::Word => &self.words,
            Space::Sense => &self.senses,
        }
    }
}

/// A target position and the positions of its context window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingInstance<'a> {
    pub target: &'a Position,
    pub context: Vec<&'a Position>,
}

/// One instance per position of `unit`. The window half-width is drawn
/// uniformly from `1..=window` per target, or pinned to `window` when `rng`
/// is `None`.
pub fn make_instances<'a, R: Rng>(
    unit: &'a [Position],
    window: usize,
    mut rng: Option<&mut R>,
) -> Vec<TrainingInstance<'a>> {
    (0..unit.len())
        .map(|t| {
            let b = match rng.as_deref_mut() {
                Some(rng) if window > 1 => rng.gen_range(1..=window),
                _ => window,
            };
            let lo = t.saturating_sub(b);
            let hi = (t + b + 1).min(unit.len());
            let context = (lo..hi).filter(|&i| i != t).map(|i| &unit[i]).collect();
            TrainingInstance {
                target: &unit[t],
                context,
            }
        })
        .collect()
}

/// Input rows that feed the hidden layer, one entry per occurrence.
pub fn active_inputs(instance: &TrainingInstance<'_>, mode: LayerMode) -> Vec<(Space, u32)> {
    let mut inputs = Vec::new();
    for slot in &instance.context {
        if mode.uses_words() {
            if let Some(w) = slot.word {
                inputs.push((Space::Word, w));
            }
        }
        if mode.uses_senses() {
            inputs.extend(slot.senses.iter().map(|&s| (Space::Sense, s)));
        }
    }
    inputs
}

/// Output leaves the instance is trained to predict.
pub fn targets(instance: &TrainingInstance<'_>, mode: LayerMode) -> Vec<(Space, u32)> {
    let mut out = Vec::new();
    if mode.uses_words() {
        if let Some(w) = instance.target.word {
            out.push((Space::Word, w));
        }
    }
    if mode.uses_senses() {
        out.extend(instance.target.senses.iter().map(|&s| (Space::Sense, s)));
    }
    out
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Log-probability of one leaf and its gradients.
#[derive(Clone, Debug)]
pub struct HsOutput {
    pub log_prob: f64,
    /// `d log p / d hidden`
    pub hidden_grad: Vec<f64>,
    /// `d log p / d node` for every internal node on the path.
    pub node_grads: Vec<(u32, Vec<f64>)>,
}

/// `log p(leaf | hidden) = sum over the path of log sigmoid(±⟨node, hidden⟩)`,
/// with `+` for code bit 0 and `-` for bit 1.
pub fn hs_log_prob(
    leaf: u32,
    tree: &HuffmanTree,
    hidden: &[f64],
    output: &super::params::Matrix,
) -> HsOutput {
    let mut log_prob = 0.0;
    let mut hidden_grad = vec![0.0; hidden.len()];
    let mut node_grads = Vec::with_capacity(tree.path(leaf).len());
    for (&node, &bit) in tree.path(leaf).iter().zip(tree.code(leaf)) {
        let x = output.dot_row(node as usize, hidden);
        let sign = if bit { -1.0 } else { 1.0 };
        log_prob += log_sigmoid(sign * x);
        // d/dx log sigmoid(sign * x) = (1 - bit) - sigmoid(x)
        let g = if bit { 0.0 } else { 1.0 } - sigmoid(x);
        output.accumulate_row(node as usize, &mut hidden_grad, g);
        node_grads.push((node, hidden.iter().map(|&h| g * h).collect()));
    }
    HsOutput {
        log_prob,
        hidden_grad,
        node_grads,
    }
}

/// Loss of one instance and its exact gradient.
#[derive(Clone, Debug)]
pub struct InstanceGradient {
    pub loss: f64,
    /// Rows averaged into the hidden layer (with repetition).
    pub inputs: Vec<(Space, u32)>,
    /// `dE / d hidden`. Each input row's gradient is this divided by
    /// `inputs.len()`, times its multiplicity.
    pub hidden_grad: Vec<f64>,
    /// `dE / d node`, merged over targets sharing internal nodes.
    pub node_grads: BTreeMap<(Space, u32), Vec<f64>>,
}

impl InstanceGradient {
    /// `dE / d row` for every distinct input row.
    pub fn input_grads(&self) -> BTreeMap<(Space, u32), Vec<f64>> {
        let scale = 1.0 / self.inputs.len() as f64;
        let mut grads: BTreeMap<(Space, u32), Vec<f64>> = BTreeMap::new();
        for &key in &self.inputs {
            let g = grads
                .entry(key)
                .or_insert_with(|| vec![0.0; self.hidden_grad.len()]);
            for (a, &h) in g.iter_mut().zip(&self.hidden_grad) {
                *a += scale * h;
            }
        }
        grads
    }
}

pub fn hidden_vector(state: &ModelState, inputs: &[(Space, u32)]) -> Vec<f64> {
    let mut hidden = vec![0.0; state.dim];
    let scale = 1.0 / inputs.len() as f64;
    for &(space, idx) in inputs {
        state.input(space).accumulate_row(idx as usize, &mut hidden, 1.0);
    }
    hidden.iter_mut().for_each(|h| *h *= scale);
    hidden
}

/// Loss and gradient of an instance, or `None` when it has no active input
/// or no target under the given modes.
pub fn instance_gradient(
    instance: &TrainingInstance<'_>,
    state: &ModelState,
    trees: &Trees,
    input_mode: LayerMode,
    output_mode: LayerMode,
) -> Option<InstanceGradient> {
    let inputs = active_inputs(instance, input_mode);
    let targets = targets(instance, output_mode);
    if inputs.is_empty() || targets.is_empty() {
        return None;
    }
    let hidden = hidden_vector(state, &inputs);
    let mut loss = 0.0;
    let mut hidden_grad = vec![0.0; state.dim];
    let mut node_grads: BTreeMap<(Space, u32), Vec<f64>> = BTreeMap::new();
    for (space, leaf) in targets {
        let hs = hs_log_prob(leaf, trees.get(space), &hidden, state.output(space));
        loss -= hs.log_prob;
        for (a, g) in hidden_grad.iter_mut().zip(&hs.hidden_grad) {
            *a -= g;
        }
        for (node, g) in hs.node_grads {
            let acc = node_grads
                .entry((space, node))
                .or_insert_with(|| vec![0.0; state.dim]);
            for (a, g) in acc.iter_mut().zip(&g) {
                *a -= g;
            }
        }
    }
    Some(InstanceGradient {
        loss,
        inputs,
        hidden_grad,
        node_grads,
    })
}

/// Loss only; `None` under the same conditions as [`instance_gradient`].
pub fn instance_loss(
    instance: &TrainingInstance<'_>,
    state: &ModelState,
    trees: &Trees,
    input_mode: LayerMode,
    output_mode: LayerMode,
) -> Option<f64> {
    let inputs = active_inputs(instance, input_mode);
    let targets = targets(instance, output_mode);
    if inputs.is_empty() || targets.is_empty() {
        return None;
    }
    let hidden = hidden_vector(state, &inputs);
    Some(
        targets
            .into_iter()
            .map(|(space, leaf)| -hs_log_prob(leaf, trees.get(space), &hidden, state.output(space)).log_prob)
            .sum(),
    )
}

/// Why a row moved during a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateCause {
    /// Gradient of the loss (input rows of the hidden layer, node rows).
    Gradient,
    /// Copied from the word at the same context slot.
    FromWord(u32),
    /// Mean of the deltas applied to the senses at the same context slot.
    FromSenses,
}

/// One row update applied by [`train_step_traced`].
#[derive(Clone, Debug, PartialEq)]
pub struct AppliedDelta {
    pub space: Space,
    /// `true` for hierarchical-softmax node rows.
    pub output: bool,
    pub row: u32,
    pub delta: Vec<f64>,
    pub cause: UpdateCause,
}

/// One SGD step.
///
/// Node rows move by `-lr * dE/dnode`. Following word2vec, every row that
/// contributed to the hidden layer moves by the full `-lr * dE/dhidden`.
/// Rows outside the input layer follow their counterparts: with word-only
/// input each associated sense copies its word's delta, with sense-only input
/// each word receives the mean of its senses' deltas.
///
/// Returns the instance loss, or `None` when the step was skipped.
pub fn train_step(
    instance: &TrainingInstance<'_>,
    state: &ModelState,
    trees: &Trees,
    input_mode: LayerMode,
    output_mode: LayerMode,
    lr: f64,
) -> Option<f64> {
    step(instance, state, trees, input_mode, output_mode, lr, None)
}

/// [`train_step`] that also records every row delta it applies.
pub fn train_step_traced(
    instance: &TrainingInstance<'_>,
    state: &ModelState,
    trees: &Trees,
    input_mode: LayerMode,
    output_mode: LayerMode,
    lr: f64,
) -> (Option<f64>, Vec<AppliedDelta>) {
    let mut trace = Vec::new();
    let loss = step(instance, state, trees, input_mode, output_mode, lr, Some(&mut trace));
    (loss, trace)
}

fn step(
    instance: &TrainingInstance<'_>,
    state: &ModelState,
    trees: &Trees,
    input_mode: LayerMode,
    output_mode: LayerMode,
    lr: f64,
    mut trace: Option<&mut Vec<AppliedDelta>>,
) -> Option<f64> {
    let grad = instance_gradient(instance, state, trees, input_mode, output_mode)?;
    let mut record = |space, output, row, delta: &[f64], scale: f64, cause| {
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(AppliedDelta {
                space,
                output,
                row,
                delta: delta.iter().map(|&d| scale * d).collect(),
                cause,
            });
        }
    };

    for (&(space, node), g) in &grad.node_grads {
        state.output(space).add_to_row(node as usize, g, -lr);
        record(space, true, node, g, -lr, UpdateCause::Gradient);
    }
    let delta = &grad.hidden_grad;
    for &(space, idx) in &grad.inputs {
        state.input(space).add_to_row(idx as usize, delta, -lr);
        record(space, false, idx, delta, -lr, UpdateCause::Gradient);
    }
    match input_mode {
        LayerMode::Words => {
            for slot in &instance.context {
                if let Some(w) = slot.word {
                    for &s in &slot.senses {
                        state.sense_input.add_to_row(s as usize, delta, -lr);
                        record(Space::Sense, false, s, delta, -lr, UpdateCause::FromWord(w));
                    }
                }
            }
        }
        LayerMode::Senses => {
            // Every sense of the slot moved by the same delta, so their mean
            // is that delta.
            for slot in &instance.context {
                if let (Some(w), false) = (slot.word, slot.senses.is_empty()) {
                    state.word_input.add_to_row(w as usize, delta, -lr);
                    record(Space::Word, false, w, delta, -lr, UpdateCause::FromSenses);
                }
            }
        }
        LayerMode::Both => {}
    }
    Some(grad.loss)
}
