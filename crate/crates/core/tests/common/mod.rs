//! Test oracles and synthetic data shared by the integration suites. Nothing
//! here calls into the annotator or the training code paths it is compared
//! against.

#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A connectivity problem in raw textual form.
#[derive(Clone, Debug)]
pub struct RawCase {
    pub synsets: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub lexicon: Vec<(String, Vec<String>)>,
    pub tokens: Vec<String>,
    pub delta: f64,
}

impl RawCase {
    pub fn edge_file(&self) -> String {
        let mut s = String::new();
        for id in &self.synsets {
            writeln!(s, "#node\t{id}").unwrap();
        }
        for (a, b) in &self.edges {
            writeln!(s, "{a}\t{b}").unwrap();
        }
        s
    }

    pub fn lexicon_file(&self) -> String {
        let mut s = String::new();
        for (form, ids) in &self.lexicon {
            writeln!(s, "{form}\t{}", ids.join(",")).unwrap();
        }
        s
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Random case with at most 20 synsets, 30 edges and 12 tokens.
pub fn random_case(rng: &mut impl Rng) -> RawCase {
    let n_syn = rng.gen_range(1..=20);
    let synsets: Vec<String> = (0..n_syn).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    if n_syn > 1 {
        for _ in 0..rng.gen_range(5..=30) {
            let a = rng.gen_range(0..n_syn);
            let b = rng.gen_range(0..n_syn);
            if a != b {
                edges.push((synsets[a].clone(), synsets[b].clone()));
            }
        }
    }
    let vocab: Vec<String> = (0..rng.gen_range(2..=8)).map(|i| format!("t{i}")).collect();
    let mut lexicon: Vec<(String, Vec<String>)> = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..rng.gen_range(1..=10) {
        let len = *[1, 1, 1, 2, 3].choose(rng).unwrap();
        let form: Vec<&str> = (0..len).map(|_| vocab.choose(rng).unwrap().as_str()).collect();
        let form = form.join("_");
        if !seen.insert(form.clone()) {
            continue;
        }
        let k = rng.gen_range(1..=4.min(n_syn));
        let mut ids: Vec<String> = synsets
            .choose_multiple(rng, k)
            .cloned()
            .collect();
        ids.dedup();
        lexicon.push((form, ids));
    }
    let mut tokens: Vec<String> = (0..rng.gen_range(1..=12))
        .map(|_| {
            if rng.gen_bool(0.15) {
                "zz".to_string()
            } else {
                vocab.choose(rng).unwrap().clone()
            }
        })
        .collect();
    if tokens.is_empty() {
        tokens.push("zz".into());
    }
    let delta = *[0.2, 0.5, 1.0, 2.0, 5.0, 100.0, 100.0, 100.0].choose(rng).unwrap();
    RawCase {
        synsets,
        edges,
        lexicon,
        tokens,
        delta,
    }
}

/// Recomputes connectivity step by step, naively, over the raw
/// strings and returns the annotated line.
pub fn brute_force_connect(case: &RawCase) -> String {
    let edge_set: HashSet<(&str, &str)> = case
        .edges
        .iter()
        .flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())])
        .collect();
    let lookup = |form: &str| -> Option<&Vec<String>> {
        case.lexicon.iter().find(|(f, _)| f == form).map(|(_, ids)| ids)
    };

    // Words of T: every n-gram (n <= 3) found in the lexicon.
    struct Word<'a> {
        start: usize,
        end: usize,
        form: String,
        candidates: &'a [String],
    }
    let mut words: Vec<Word> = Vec::new();
    for start in 0..case.tokens.len() {
        for end in start + 1..=(start + 3).min(case.tokens.len()) {
            let form = case.tokens[start..end].join("_");
            if let Some(ids) = lookup(&form) {
                words.push(Word {
                    start,
                    end,
                    form,
                    candidates: ids,
                });
            }
        }
    }

    // Union of candidate senses.
    let mut s_t: BTreeSet<&str> = BTreeSet::new();
    for w in &words {
        for s in w.candidates {
            s_t.insert(s);
        }
    }
    // Threshold.
    let theta = (s_t.len() + case.tokens.len()) as f64 / (2.0 * case.delta);

    // Per-word connectivity, also keeping each word's best n for overlap resolution.
    let mut chosen: Vec<(Vec<&str>, usize)> = Vec::new();
    for w in &words {
        let mut max = 0usize;
        let mut c_w: Vec<&str> = Vec::new();
        let mut best = 0usize;
        for s in w.candidates {
            let mut n = 0usize;
            for &s2 in &s_t {
                let connected = edge_set.contains(&(s.as_str(), s2));
                let elsewhere = words
                    .iter()
                    .any(|w2| w2.form != w.form && w2.candidates.iter().any(|c| c == s2));
                if connected && elsewhere {
                    n += 1;
                }
            }
            best = best.max(n);
            if n >= max && n as f64 >= theta {
                if n > max {
                    c_w = vec![s.as_str()];
                    max = n;
                } else {
                    c_w.push(s.as_str());
                }
            }
        }
        chosen.push((c_w, best));
    }

    // Overlaps: repeatedly take the most connected, then longest, then
    // leftmost remaining word and discard everything it overlaps.
    let mut remaining: Vec<usize> = (0..words.len()).collect();
    let mut kept: Vec<usize> = Vec::new();
    while !remaining.is_empty() {
        let &pick = remaining
            .iter()
            .max_by(|&&a, &&b| {
                chosen[a]
                    .1
                    .cmp(&chosen[b].1)
                    .then((words[a].end - words[a].start).cmp(&(words[b].end - words[b].start)))
                    .then(words[b].start.cmp(&words[a].start))
            })
            .unwrap();
        kept.push(pick);
        remaining.retain(|&i| words[i].end <= words[pick].start || words[i].start >= words[pick].end);
    }

    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < case.tokens.len() {
        match kept
            .iter()
            .find(|&&k| words[k].start == i && !chosen[k].0.is_empty())
        {
            Some(&k) => {
                out.push(format!("{}|{}", words[k].form, chosen[k].0.join(",")));
                i = words[k].end;
            }
            None => {
                out.push(case.tokens[i].clone());
                i += 1;
            }
        }
    }
    out.join(" ")
}

/// Two-topic world: a finance cluster and a river cluster of synsets, each
/// densely connected inside, plus one ambiguous word with a sense in each.
pub struct TopicWorld {
    pub edges: String,
    pub lexicon: String,
    pub topics: [Vec<String>; 2],
    pub fillers: Vec<String>,
    pub ambiguous: String,
    /// Synset of the ambiguous word in each topic.
    pub ambiguous_senses: [String; 2],
    /// Synsets of the non-ambiguous topic words.
    pub topic_synsets: [Vec<String>; 2],
}

pub fn topic_world(seed: u64, words_per_topic: usize) -> TopicWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["fin", "riv"];
    let mut edges = String::new();
    let mut lexicon = String::new();
    let mut topics: [Vec<String>; 2] = Default::default();
    let mut topic_synsets: [Vec<String>; 2] = Default::default();
    for (t, name) in names.iter().enumerate() {
        for i in 0..words_per_topic {
            let word = format!("{name}{i}");
            let syn = format!("{}:{i}", name.to_uppercase());
            writeln!(lexicon, "{word}\t{syn}").unwrap();
            topics[t].push(word);
            topic_synsets[t].push(syn);
        }
        for i in 0..words_per_topic {
            for j in 0..words_per_topic {
                if i < j && rng.gen_bool(0.35) {
                    writeln!(edges, "{}\t{}", topic_synsets[t][i], topic_synsets[t][j]).unwrap();
                }
            }
        }
    }
    let ambiguous_senses = ["FIN:bank".to_string(), "RIV:bank".to_string()];
    for (t, sense) in ambiguous_senses.iter().enumerate() {
        for other in topic_synsets[t].choose_multiple(&mut rng, words_per_topic / 2) {
            writeln!(edges, "{sense}\t{other}").unwrap();
        }
    }
    let mut order = ambiguous_senses.clone();
    order.shuffle(&mut rng);
    writeln!(lexicon, "bank\t{}", order.join(",")).unwrap();
    TopicWorld {
        edges,
        lexicon,
        topics,
        fillers: ["the", "of", "and", "a", "to", "in"].iter().map(|s| s.to_string()).collect(),
        ambiguous: "bank".into(),
        ambiguous_senses,
        topic_synsets,
    }
}

/// Raw corpus of `units_per_topic` lines per topic. Tokens of topic `t` are
/// drawn independently: the ambiguous word with probability
/// `ambiguous_rate[t]`, otherwise a filler or a topic word.
pub fn topic_corpus(
    world: &TopicWorld,
    seed: u64,
    units_per_topic: usize,
    ambiguous_rate: [f64; 2],
) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(2 * units_per_topic);
    for t in 0..2 {
        for _ in 0..units_per_topic {
            let len = rng.gen_range(6..=12);
            let tokens: Vec<&str> = (0..len)
                .map(|_| {
                    if rng.gen_bool(ambiguous_rate[t]) {
                        world.ambiguous.as_str()
                    } else if rng.gen_bool(0.35) {
                        world.fillers.choose(&mut rng).unwrap().as_str()
                    } else {
                        world.topics[t].choose(&mut rng).unwrap().as_str()
                    }
                })
                .collect();
            lines.push(tokens.join(" "));
        }
    }
    lines.shuffle(&mut rng);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Plain word2vec-style CBOW with hierarchical softmax over `f64` arrays.
/// Takes the initial matrices and Huffman codes as inputs and runs its own
/// training loop.
pub struct ReferenceCbow {
    pub dim: usize,
    pub syn0: Vec<f64>,
    pub syn1: Vec<f64>,
    pub codes: Vec<Vec<bool>>,
    pub points: Vec<Vec<u32>>,
}

impl ReferenceCbow {
    /// One pass over `sentences` (vocabulary indices), fixed window, learning
    /// rate `lr0 * (1 - done / (total + 1))` floored at `lr0 * 1e-4`, updated
    /// before each sentence.
    pub fn train(&mut self, sentences: &[Vec<u32>], window: usize, lr0: f64, epochs: usize) {
        let d = self.dim;
        let total: usize = sentences.iter().map(Vec::len).sum::<usize>() * epochs;
        let mut done = 0usize;
        let mut neu1 = vec![0.0; d];
        let mut neu1e = vec![0.0; d];
        for _ in 0..epochs {
            for sent in sentences {
                let mut lr = lr0 * (1.0 - done as f64 / (total as f64 + 1.0));
                if lr < lr0 * 1e-4 {
                    lr = lr0 * 1e-4;
                }
                for t in 0..sent.len() {
                    neu1.iter_mut().for_each(|x| *x = 0.0);
                    neu1e.iter_mut().for_each(|x| *x = 0.0);
                    let lo = t.saturating_sub(window);
                    let hi = (t + window + 1).min(sent.len());
                    let mut cw = 0;
                    for c in lo..hi {
                        if c == t {
                            continue;
                        }
                        let row = sent[c] as usize * d;
                        for k in 0..d {
                            neu1[k] += self.syn0[row + k];
                        }
                        cw += 1;
                    }
                    if cw == 0 {
                        continue;
                    }
                    for x in neu1.iter_mut() {
                        *x /= cw as f64;
                    }
                    let w = sent[t] as usize;
                    for (&node, &bit) in self.points[w].iter().zip(&self.codes[w]) {
                        let l2 = node as usize * d;
                        let f: f64 = (0..d).map(|k| neu1[k] * self.syn1[l2 + k]).sum();
                        let sig = 1.0 / (1.0 + (-f).exp());
                        let g = (1.0 - bit as u8 as f64 - sig) * lr;
                        for k in 0..d {
                            neu1e[k] += g * self.syn1[l2 + k];
                        }
                        for k in 0..d {
                            self.syn1[l2 + k] += g * neu1[k];
                        }
                    }
                    for c in lo..hi {
                        if c == t {
                            continue;
                        }
                        let row = sent[c] as usize * d;
                        for k in 0..d {
                            self.syn0[row + k] += neu1e[k];
                        }
                    }
                }
                done += sent.len();
            }
        }
    }
}
