use std::fmt;
use std::str::FromStr;

use super::datasets::{ClusterPair, SimilarityPair, WsdInstance};
use super::report::EvalReport;
use super::space::{cosine, cosine_or_zero, VectorSpace};
use super::stats::{pearson, spearman};
use crate::error::{Error, Result};
use crate::model::embeddings::sense_label;
use crate::model::vocab::SENSE_PREFIX;

/// Default clustering threshold.
pub const DEFAULT_GAMMA: f64 = 0.35;

/// Maximum cosine over all candidate-sense pairs of the two words, or `None`
/// when either word has no candidate sense in the space.
pub fn closest_sense_sim(space: &VectorSpace, w1: &str, w2: &str) -> Option<f64> {
    closest_sense_sim_flagged(space, w1, w2).map(|(v, _)| v)
}

fn closest_sense_sim_flagged(space: &VectorSpace, w1: &str, w2: &str) -> Option<(f64, bool)> {
    let (a, b) = (space.candidate_rows(w1), space.candidate_rows(w2));
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let mut best = f64::NEG_INFINITY;
    let mut degenerate = false;
    for &i in a {
        for &j in b {
            let (c, zero) = cosine_or_zero(space.row(i), space.row(j));
            degenerate |= zero;
            best = best.max(c);
        }
    }
    Some((best, degenerate))
}

/// Cosine of the two word vectors, or `None` when either is missing.
pub fn word_cosine_sim(space: &VectorSpace, w1: &str, w2: &str) -> Option<f64> {
    word_cosine_flagged(space, w1, w2).map(|(v, _)| v)
}

fn word_cosine_flagged(space: &VectorSpace, w1: &str, w2: &str) -> Option<(f64, bool)> {
    Some(cosine_or_zero(space.vector(w1)?, space.vector(w2)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimilarityStrategy {
    ClosestSense,
    Word,
}

impl fmt::Display for SimilarityStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityStrategy::ClosestSense => "closest-sense",
            SimilarityStrategy::Word => "word",
        })
    }
}

impl FromStr for SimilarityStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closest-sense" => Ok(SimilarityStrategy::ClosestSense),
            "word" => Ok(SimilarityStrategy::Word),
            _ => Err(Error::invalid(format!(
                "unknown strategy {s:?} (expected closest-sense or word)"
            ))),
        }
    }
}

/// Pearson and Spearman correlation between model and gold scores over the
/// covered pairs.
pub fn eval_similarity(
    space: &VectorSpace,
    dataset: &[SimilarityPair],
    strategy: SimilarityStrategy,
) -> Result<EvalReport> {
    let mut report = EvalReport::new(format!("similarity ({strategy})"), dataset.len());
    let (mut model, mut gold) = (Vec::new(), Vec::new());
    for pair in dataset {
        let score = match strategy {
            SimilarityStrategy::ClosestSense => closest_sense_sim_flagged(space, &pair.word1, &pair.word2),
            SimilarityStrategy::Word => word_cosine_flagged(space, &pair.word1, &pair.word2),
        };
        match score {
            Some((s, zero)) => {
                report.zero_vectors += zero as usize;
                model.push(s);
                gold.push(pair.gold);
            }
            None => report.excluded.push(format!("{}\t{}", pair.word1, pair.word2)),
        }
    }
    if model.is_empty() {
        return Err(Error::EmptyEvaluation("no similarity pair is covered".into()));
    }
    report.evaluated = model.len();
    report.push("pearson", pearson(&model, &gold)?);
    report.push("spearman", spearman(&model, &gold)?);
    Ok(report)
}

/// Binary confusion counts for the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, gold: bool) {
        match (predicted, gold) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        f_measure(self.precision(), self.recall())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringResult {
    pub gamma: f64,
    pub confusion: Confusion,
    pub total: usize,
    pub excluded: Vec<String>,
    pub zero_vectors: usize,
}

impl ClusteringResult {
    /// Accuracy counting every uncovered pair as an error.
    pub fn accuracy_all(&self) -> f64 {
        ratio(self.confusion.tp + self.confusion.tn, self.total)
    }

    pub fn report(&self) -> EvalReport {
        let c = &self.confusion;
        let mut r = EvalReport::new(format!("sense clustering (gamma={})", self.gamma), self.total);
        r.evaluated = c.total();
        r.push("accuracy", c.accuracy());
        r.push("accuracy_all", self.accuracy_all());
        r.push("precision", c.precision());
        r.push("recall", c.recall());
        r.push("f1", c.f1());
        for (k, v) in [("tp", c.tp), ("fp", c.fp), ("fn", c.fn_), ("tn", c.tn)] {
            r.push(k, v as f64);
        }
        r.excluded = self.excluded.clone();
        r.zero_vectors = self.zero_vectors;
        r
    }
}

/// Cosines of the covered pairs as `(cosine, gold)`, plus excluded pairs.
fn pair_cosines(space: &VectorSpace, dataset: &[ClusterPair]) -> (Vec<(f64, bool)>, Vec<String>, usize) {
    let mut scored = Vec::new();
    let mut excluded = Vec::new();
    let mut zeros = 0;
    for p in dataset {
        let a = space.vector(&sense_label(p.synset1.as_str()));
        let b = space.vector(&sense_label(p.synset2.as_str()));
        match (a, b) {
            (Some(a), Some(b)) => {
                let (c, zero) = cosine_or_zero(a, b);
                zeros += zero as usize;
                scored.push((c, p.gold));
            }
            _ => excluded.push(format!("{}\t{}", p.synset1, p.synset2)),
        }
    }
    (scored, excluded, zeros)
}

fn confusion_at(scored: &[(f64, bool)], gamma: f64) -> Confusion {
    let mut c = Confusion::default();
    for &(cos, gold) in scored {
        c.add(cos > gamma, gold);
    }
    c
}

/// Merge two synsets when the cosine of their vectors exceeds `gamma`.
pub fn sense_clustering(space: &VectorSpace, dataset: &[ClusterPair], gamma: f64) -> Result<ClusteringResult> {
    let (scored, excluded, zero_vectors) = pair_cosines(space, dataset);
    if scored.is_empty() {
        return Err(Error::EmptyEvaluation("no clustering pair is covered".into()));
    }
    Ok(ClusteringResult {
        gamma,
        confusion: confusion_at(&scored, gamma),
        total: dataset.len(),
        excluded,
        zero_vectors,
    })
}

/// Thresholds `0.00, 0.05, ..., 1.00`.
pub fn gamma_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSearch {
    pub gamma: f64,
    pub f1: f64,
    /// F-measure at every grid point, in grid order.
    pub grid: Vec<(f64, f64)>,
}

/// Grid point with the highest F-measure on `dev`; ties go to the smallest.
pub fn tune_gamma(space: &VectorSpace, dev: &[ClusterPair]) -> Result<GammaSearch> {
    let (scored, _, _) = pair_cosines(space, dev);
    if scored.is_empty() {
        return Err(Error::EmptyEvaluation("no development pair is covered".into()));
    }
    let grid: Vec<(f64, f64)> = gamma_grid()
        .into_iter()
        .map(|g| (g, confusion_at(&scored, g).f1()))
        .collect();
    let (gamma, f1) = grid
        .iter()
        .copied()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, (g, f)| if f > best.1 { (g, f) } else { best });
    Ok(GammaSearch { gamma, f1, grid })
}

/// Candidate sense of `word` closest to the word's own vector. Ties keep the
/// earlier candidate.
pub fn mcs<'a>(space: &'a VectorSpace, word: &str) -> Option<&'a str> {
    let w = space.vector(word)?;
    let mut best: Option<(usize, f64)> = None;
    for &row in space.candidate_rows(word) {
        let c = cosine(w, space.row(row)).unwrap_or(0.0);
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((row, c));
        }
    }
    best.map(|(row, _)| space.label(row))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct McsResult {
    pub attempted: usize,
    pub correct: usize,
    pub total: usize,
    pub excluded: Vec<String>,
}

impl McsResult {
    pub fn precision(&self) -> f64 {
        ratio(self.correct, self.attempted)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.correct, self.total)
    }

    pub fn f1(&self) -> f64 {
        f_measure(self.precision(), self.recall())
    }

    pub fn report(&self) -> EvalReport {
        let mut r = EvalReport::new("most common sense", self.total);
        r.evaluated = self.attempted;
        r.push("precision", self.precision());
        r.push("recall", self.recall());
        r.push("f1", self.f1());
        r.excluded = self.excluded.clone();
        r
    }
}

/// Precision over attempted instances, recall over all instances.
pub fn eval_mcs(space: &VectorSpace, dataset: &[WsdInstance]) -> McsResult {
    let mut result = McsResult {
        total: dataset.len(),
        ..Default::default()
    };
    for inst in dataset {
        match mcs(space, &inst.lemma) {
            Some(label) => {
                result.attempted += 1;
                let synset = label.strip_prefix(SENSE_PREFIX).unwrap_or(label);
                if inst.gold.iter().any(|g| g.as_str() == synset) {
                    result.correct += 1;
                }
            }
            None => result.excluded.push(format!("{}\t{}", inst.id, inst.lemma)),
        }
    }
    result
}
