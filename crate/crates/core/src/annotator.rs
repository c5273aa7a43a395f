//! Shallow word-sense connectivity.
//!
//! Every unigram, bigram and trigram of a text unit that appears in the
//! lexicon becomes a mention. Each candidate synset of a mention is scored by
//! the number of distinct neighbouring synsets that are candidates of some
//! *other* word of the unit; a mention keeps its top-scoring candidates when
//! that score reaches the threshold `(|S_T| + |T|) / (2 * delta)`.
//!
//! Two mentions are the same word when they share a surface form, so repeated
//! occurrences of a form never connect to each other. Overlapping mentions
//! are resolved after scoring, preferring the more connected mention, then
//! the longer one, then the leftmost.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::{AnnotatedLine, AnnotatedToken};
use crate::semnet::{join_form, Lexicon, SemanticNetwork, SynsetIdx, MAX_FORM_TOKENS};

/// Default value of `delta`.
pub const DEFAULT_DELTA: f64 = 100.0;

/// One line of raw text, lowercased and split on whitespace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextUnit {
    tokens: Vec<String>,
}

impl TextUnit {
    /// Build a unit from raw tokens. Tokens are lowercased; tokens containing
    /// `|` or `,` are rejected since they would collide with the annotated
    /// output syntax.
    pub fn new<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::invalid("text unit has no tokens"));
        }
        let tokens = tokens
            .iter()
            .map(|t| {
                let t = t.as_ref();
                if t.is_empty() || t.contains(|c: char| c == '|' || c == ',' || c.is_whitespace()) {
                    Err(Error::invalid(format!(
                        "token {t:?} is empty or contains whitespace, '|' or ','"
                    )))
                } else {
                    Ok(t.to_lowercase())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TextUnit { tokens })
    }

    /// Parse a raw corpus line. Blank lines yield `None`.
    pub fn parse(line: &str) -> Result<Option<Self>> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            return Ok(None);
        }
        Self::new(&tokens).map(Some)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// A lexicon hit spanning tokens `start..end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mention {
    pub start: usize,
    pub end: usize,
    pub form: String,
    pub candidates: Vec<SynsetIdx>,
}

impl Mention {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Mention) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectivityParams {
    pub delta: f64,
    pub max_ngram: usize,
}

impl Default for ConnectivityParams {
    fn default() -> Self {
        ConnectivityParams {
            delta: DEFAULT_DELTA,
            max_ngram: MAX_FORM_TOKENS,
        }
    }
}

impl ConnectivityParams {
    pub fn with_delta(delta: f64) -> Result<Self> {
        let params = ConnectivityParams {
            delta,
            ..Default::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid(format!(
                "delta must be positive and finite, got {}",
                self.delta
            )));
        }
        if self.max_ngram == 0 || self.max_ngram > MAX_FORM_TOKENS {
            return Err(Error::invalid(format!(
                "max_ngram must be in 1..={MAX_FORM_TOKENS}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScoredSense {
    pub sense: SynsetIdx,
    pub n: usize,
}

/// Senses attached to one selected mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub start: usize,
    pub end: usize,
    pub form: String,
    /// The selected senses, in candidate order. Empty when no candidate
    /// reached the threshold.
    pub senses: Vec<SynsetIdx>,
    /// Connection count shared by every sense in `senses` (the best count of
    /// the mention when `senses` is empty).
    pub n: usize,
}

/// Output of [`connect`] for one unit.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedUnit {
    pub tokens: Vec<String>,
    pub threshold: f64,
    /// Mentions that survived overlap resolution, ordered by start.
    pub connections: Vec<Connection>,
}

impl AnnotatedUnit {
    /// Render in the annotated corpus representation: connected mentions
    /// become `form|id1,id2`, all other tokens stay bare.
    pub fn to_line(&self, net: &SemanticNetwork) -> AnnotatedLine {
        let mut out = Vec::with_capacity(self.tokens.len());
        let mut conns = self.connections.iter().filter(|c| !c.senses.is_empty()).peekable();
        let mut i = 0;
        while i < self.tokens.len() {
            if let Some(c) = conns.next_if(|c| c.start == i) {
                out.push(AnnotatedToken {
                    form: c.form.clone(),
                    senses: c.senses.iter().map(|&s| net.id(s).clone()).collect(),
                });
                i = c.end;
            } else {
                out.push(AnnotatedToken::bare(self.tokens[i].clone()));
                i += 1;
            }
        }
        AnnotatedLine::new(out)
    }
}

/// All lexicon n-grams of the unit, ordered by start then length.
pub fn extract_mentions(unit: &TextUnit, lex: &Lexicon, params: &ConnectivityParams) -> Vec<Mention> {
    let tokens = unit.tokens();
    let mut mentions = Vec::new();
    for start in 0..tokens.len() {
        for len in 1..=params.max_ngram.min(tokens.len() - start) {
            let window = &tokens[start..start + len];
            let form = join_form(window);
            let candidates = lex.lookup(&form);
            if !candidates.is_empty() {
                mentions.push(Mention {
                    start,
                    end: start + len,
                    form,
                    candidates: candidates.to_vec(),
                });
            }
        }
    }
    mentions
}

/// Distinct union of the candidates of all mentions.
pub fn candidate_pool(mentions: &[Mention]) -> BTreeSet<SynsetIdx> {
    mentions
        .iter()
        .flat_map(|m| m.candidates.iter().copied())
        .collect()
}

/// Minimum number of connections a sense needs to be attached.
pub fn threshold(pool_size: usize, unit_len: usize, params: &ConnectivityParams) -> f64 {
    (pool_size + unit_len) as f64 / (2.0 * params.delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Contributors {
    One(u32),
    Several,
}

/// For each synset of the pool, which surface forms list it as a candidate.
struct PoolIndex {
    forms: Vec<u32>,
    contributors: HashMap<SynsetIdx, Contributors>,
}

impl PoolIndex {
    fn build(mentions: &[Mention]) -> Self {
        let mut form_ids: HashMap<&str, u32> = HashMap::new();
        let mut forms = Vec::with_capacity(mentions.len());
        let mut contributors = HashMap::new();
        for m in mentions {
            let next = form_ids.len() as u32;
            let f = *form_ids.entry(m.form.as_str()).or_insert(next);
            forms.push(f);
            for &s in &m.candidates {
                contributors
                    .entry(s)
                    .and_modify(|c| {
                        if *c != Contributors::One(f) {
                            *c = Contributors::Several;
                        }
                    })
                    .or_insert(Contributors::One(f));
            }
        }
        PoolIndex { forms, contributors }
    }

    fn pool_size(&self) -> usize {
        self.contributors.len()
    }

    /// Neighbours of `s` in the pool that some other form contributes.
    fn score(&self, s: SynsetIdx, owner_form: u32, net: &SemanticNetwork) -> usize {
        let counts = |c: &Contributors| *c != Contributors::One(owner_form);
        let neighbors = net.neighbors(s);
        if neighbors.len() <= self.contributors.len() {
            neighbors
                .iter()
                .filter(|t| self.contributors.get(t).is_some_and(counts))
                .count()
        } else {
            self.contributors
                .iter()
                .filter(|(&t, c)| counts(c) && net.has_edge(s, t))
                .count()
        }
    }
}

/// Connection count of candidate `s` of mention `owner` within `mentions`.
pub fn score_sense(
    s: SynsetIdx,
    owner: &Mention,
    mentions: &[Mention],
    net: &SemanticNetwork,
) -> ScoredSense {
    let index = PoolIndex::build(mentions);
    let owner_form = mentions
        .iter()
        .position(|m| m.form == owner.form)
        .map(|i| index.forms[i])
        // An owner absent from `mentions` shares a form with none of them.
        .unwrap_or(u32::MAX);
    ScoredSense {
        sense: s,
        n: index.score(s, owner_form, net),
    }
}

/// Greedy overlap resolution. Each entry carries the best connection count of
/// its mention. Returns the surviving mentions ordered by start.
pub fn resolve_overlaps(scored: &[(Mention, usize)]) -> Vec<Mention> {
    resolve_order(scored.iter().map(|(m, n)| (m, *n)))
        .into_iter()
        .map(|i| scored[i].0.clone())
        .collect()
}

fn resolve_order<'a>(scored: impl Iterator<Item = (&'a Mention, usize)>) -> Vec<usize> {
    let items: Vec<(&Mention, usize)> = scored.collect();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, na) = items[a];
        let (mb, nb) = items[b];
        nb.cmp(&na)
            .then(mb.len().cmp(&ma.len()))
            .then(ma.start.cmp(&mb.start))
    });
    let mut taken = vec![false; items.iter().map(|(m, _)| m.end).max().unwrap_or(0)];
    let mut kept = Vec::new();
    for i in order {
        let m = items[i].0;
        if taken[m.start..m.end].iter().any(|&t| t) {
            continue;
        }
        taken[m.start..m.end].iter_mut().for_each(|t| *t = true);
        kept.push(i);
    }
    kept.sort_by_key(|&i| items[i].0.start);
    kept
}

/// Attach senses to the words of one unit.
pub fn connect(
    unit: &TextUnit,
    lex: &Lexicon,
    net: &SemanticNetwork,
    params: &ConnectivityParams,
) -> AnnotatedUnit {
    let mentions = extract_mentions(unit, lex, params);
    let index = PoolIndex::build(&mentions);
    let theta = threshold(index.pool_size(), unit.len(), params);

    let mut selections = Vec::with_capacity(mentions.len());
    for (m, &form) in mentions.iter().zip(&index.forms) {
        let mut max = 0usize;
        let mut best = 0usize;
        let mut chosen = Vec::new();
        for &s in &m.candidates {
            let n = index.score(s, form, net);
            best = best.max(n);
            if n >= max && n as f64 >= theta {
                if n > max {
                    chosen.clear();
                    max = n;
                }
                chosen.push(s);
            }
        }
        let n = if chosen.is_empty() { best } else { max };
        selections.push((chosen, n, best));
    }

    let connections = resolve_order(mentions.iter().zip(selections.iter().map(|s| s.2)))
        .into_iter()
        .map(|i| {
            let m = &mentions[i];
            let (senses, n, _) = &selections[i];
            Connection {
                start: m.start,
                end: m.end,
                form: m.form.clone(),
                senses: senses.clone(),
                n: *n,
            }
        })
        .collect();

    AnnotatedUnit {
        tokens: unit.tokens().to_vec(),
        threshold: theta,
        connections,
    }
}

/// Corpus size and average polysemy of its content tokens.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CorpusStats {
    pub units: usize,
    /// Total token count `N`.
    pub tokens: usize,
    /// Tokens with at least one candidate synset as unigrams.
    pub content_tokens: usize,
    /// Sum of unigram candidate counts over content tokens.
    pub polysemy_sum: usize,
    /// Mentions that received at least one sense (annotation runs only).
    pub connected_mentions: usize,
    /// Total senses attached (annotation runs only).
    pub attached_senses: usize,
}

impl CorpusStats {
    /// Average polysemy degree; 0 when the corpus has no content token (see
    /// [`CorpusStats::alpha_defined`]).
    pub fn alpha(&self) -> f64 {
        if self.content_tokens == 0 {
            0.0
        } else {
            self.polysemy_sum as f64 / self.content_tokens as f64
        }
    }

    pub fn alpha_defined(&self) -> bool {
        self.content_tokens > 0
    }

    fn add_unit(&mut self, unit: &TextUnit, lex: &Lexicon) {
        self.units += 1;
        self.tokens += unit.len();
        for t in unit.tokens() {
            let k = lex.lookup(t).len();
            if k > 0 {
                self.content_tokens += 1;
                self.polysemy_sum += k;
            }
        }
    }

    fn merge(&mut self, other: &CorpusStats) {
        self.units += other.units;
        self.tokens += other.tokens;
        self.content_tokens += other.content_tokens;
        self.polysemy_sum += other.polysemy_sum;
        self.connected_mentions += other.connected_mentions;
        self.attached_senses += other.attached_senses;
    }

    /// `key=value` lines.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "units={}", self.units)?;
        writeln!(out, "tokens={}", self.tokens)?;
        writeln!(out, "content_tokens={}", self.content_tokens)?;
        writeln!(out, "alpha={}", self.alpha())?;
        writeln!(out, "alpha_defined={}", self.alpha_defined())?;
        writeln!(out, "connected_mentions={}", self.connected_mentions)?;
        writeln!(out, "attached_senses={}", self.attached_senses)?;
        Ok(())
    }
}

/// Token count and average polysemy of a raw corpus.
pub fn corpus_stats<R: BufRead>(corpus: R, lex: &Lexicon) -> Result<CorpusStats> {
    let mut stats = CorpusStats::default();
    for (i, line) in corpus.lines().enumerate() {
        let line = line?;
        let unit = TextUnit::parse(&line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        if let Some(unit) = unit {
            stats.add_unit(&unit, lex);
        }
    }
    Ok(stats)
}

const BATCH_LINES: usize = 4096;

/// Annotate a raw corpus line by line. Output preserves input order and is
/// identical for any thread count.
pub fn annotate_corpus<R: BufRead, W: Write>(
    corpus: R,
    mut out: W,
    lex: &Lexicon,
    net: &SemanticNetwork,
    params: &ConnectivityParams,
    threads: usize,
) -> Result<CorpusStats> {
    params.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;

    let mut stats = CorpusStats::default();
    let mut batch: Vec<(usize, String)> = Vec::with_capacity(BATCH_LINES);
    let mut lines = corpus.lines().enumerate();
    loop {
        batch.clear();
        for (i, line) in lines.by_ref() {
            let line = line.map_err(|e| Error::parse(i + 1, e.to_string()))?;
            batch.push((i + 1, line));
            if batch.len() == BATCH_LINES {
                break;
            }
        }
        if batch.is_empty() {
            break;
        }
        let rendered: Vec<Result<(String, CorpusStats)>> = pool.install(|| {
            batch
                .par_iter()
                .map(|(lineno, line)| annotate_line(line, lex, net, params).map_err(|e| Error::parse(*lineno, e.to_string())))
                .collect()
        });
        for r in rendered {
            let (text, unit_stats) = r?;
            stats.merge(&unit_stats);
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(stats)
}

fn annotate_line(
    line: &str,
    lex: &Lexicon,
    net: &SemanticNetwork,
    params: &ConnectivityParams,
) -> Result<(String, CorpusStats)> {
    let mut stats = CorpusStats::default();
    let Some(unit) = TextUnit::parse(line)? else {
        return Ok((String::new(), stats));
    };
    stats.add_unit(&unit, lex);
    let annotated = connect(&unit, lex, net, params);
    for c in annotated.connections.iter().filter(|c| !c.senses.is_empty()) {
        stats.connected_mentions += 1;
        stats.attached_senses += c.senses.len();
    }
    Ok((annotated.to_line(net).to_string(), stats))
}
