//! Semantic network and word-to-synset lexicon.
//!
//! The network is an undirected, unweighted graph of synsets read from a
//! tab-separated edge list. The lexicon maps normalized surface forms of up
//! to three tokens onto ordered candidate synset lists.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Longest surface form (in tokens) a lexicon entry may have.
pub const MAX_FORM_TOKENS: usize = 3;

/// Separator between tokens of a multiword surface form.
pub const FORM_JOINER: char = '_';

/// Opaque synset identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId(String);

impl SynsetId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::invalid("empty synset id"));
        }
        if id.chars().any(|c| c.is_whitespace() || c == '|' || c == ',') {
            return Err(Error::invalid(format!(
                "synset id {id:?} contains whitespace, '|' or ','"
            )));
        }
        // A leading '#' would read back as a comment in edge and dataset files.
        if id.starts_with('#') {
            return Err(Error::invalid(format!("synset id {id:?} starts with '#'")));
        }
        Ok(SynsetId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Dense index of a synset inside one [`SemanticNetwork`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetIdx(pub u32);

impl SynsetIdx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Undirected synset graph stored as sorted, symmetric adjacency lists.
#[derive(Clone, Debug, Default)]
pub struct SemanticNetwork {
    ids: Vec<SynsetId>,
    index: HashMap<String, SynsetIdx>,
    adjacency: Vec<Vec<SynsetIdx>>,
    n_edges: usize,
}

impl SemanticNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a synset, returning its index. Existing synsets keep their index.
    pub fn add_synset(&mut self, id: SynsetId) -> SynsetIdx {
        if let Some(&idx) = self.index.get(id.as_str()) {
            return idx;
        }
        let idx = SynsetIdx(self.ids.len() as u32);
        self.index.insert(id.0.clone(), idx);
        self.ids.push(id);
        self.adjacency.push(Vec::new());
        idx
    }

    /// Insert an undirected edge. Returns `false` if it was already present.
    pub fn add_edge(&mut self, a: SynsetIdx, b: SynsetIdx) -> Result<bool> {
        if a == b {
            return Err(Error::invalid(format!(
                "self-loop on synset {}",
                self.ids[a.index()]
            )));
        }
        let inserted = insert_sorted(&mut self.adjacency[a.index()], b);
        if inserted {
            insert_sorted(&mut self.adjacency[b.index()], a);
            self.n_edges += 1;
        }
        Ok(inserted)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn lookup(&self, id: &str) -> Option<SynsetIdx> {
        self.index.get(id).copied()
    }

    pub fn id(&self, idx: SynsetIdx) -> &SynsetId {
        &self.ids[idx.index()]
    }

    pub fn ids(&self) -> &[SynsetId] {
        &self.ids
    }

    /// Neighbors of `s`, sorted by index.
    pub fn neighbors(&self, s: SynsetIdx) -> &[SynsetIdx] {
        &self.adjacency[s.index()]
    }

    pub fn degree(&self, s: SynsetIdx) -> usize {
        self.adjacency[s.index()].len()
    }

    pub fn has_edge(&self, a: SynsetIdx, b: SynsetIdx) -> bool {
        self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    /// Every edge once, as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (SynsetIdx, SynsetIdx)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, adj)| {
            let a = SynsetIdx(a as u32);
            adj.iter().filter(move |&&b| b > a).map(move |&b| (a, b))
        })
    }

    /// Write the network in the edge-file format: isolated synsets as
    /// `#node` lines, then one line per edge with the smaller id first, all
    /// sorted by id so equal networks give identical files.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let mut isolated: Vec<&SynsetId> = (0..self.len())
            .map(|i| SynsetIdx(i as u32))
            .filter(|&s| self.degree(s) == 0)
            .map(|s| self.id(s))
            .collect();
        isolated.sort();
        for id in isolated {
            writeln!(out, "#node\t{id}")?;
        }
        let mut edges: Vec<(&SynsetId, &SynsetId)> = self
            .edges()
            .map(|(a, b)| {
                let (a, b) = (self.id(a), self.id(b));
                if a < b { (a, b) } else { (b, a) }
            })
            .collect();
        edges.sort();
        for (a, b) in edges {
            writeln!(out, "{a}\t{b}")?;
        }
        Ok(())
    }
}

fn insert_sorted(list: &mut Vec<SynsetIdx>, value: SynsetIdx) -> bool {
    match list.binary_search(&value) {
        Ok(_) => false,
        Err(pos) => {
            list.insert(pos, value);
            true
        }
    }
}

/// Read an edge file: `synsetA<TAB>synsetB` per line, `#` comments, and
/// optional `#node<TAB>synsetId` declarations for isolated synsets.
pub fn load_network<R: BufRead>(source: R) -> Result<SemanticNetwork> {
    let mut net = SemanticNetwork::new();
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#node\t") {
            let id = SynsetId::new(rest).map_err(|e| Error::parse(lineno, e.to_string()))?;
            net.add_synset(id);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                lineno,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let a = SynsetId::new(fields[0]).map_err(|e| Error::parse(lineno, e.to_string()))?;
        let b = SynsetId::new(fields[1]).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if a == b {
            return Err(Error::parse(lineno, format!("self-loop on synset {a}")));
        }
        let a = net.add_synset(a);
        let b = net.add_synset(b);
        net.add_edge(a, b)?;
    }
    Ok(net)
}

/// Lowercase a surface form. No other normalization is applied.
pub fn normalize_form(form: &str) -> String {
    form.to_lowercase()
}

/// Parse lexicon lines into `(normalized form, candidate ids)` pairs without
/// checking the ids against a network. Repeated forms are merged and
/// duplicate candidates dropped, keeping first-seen order.
pub fn parse_lexicon<R: BufRead>(source: R) -> Result<Vec<(String, Vec<SynsetId>)>> {
    let mut entries: Vec<(String, Vec<SynsetId>)> = Vec::new();
    let mut positions: HashMap<String, usize> = HashMap::new();
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (form, ids) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected surface_form<TAB>id1,id2,..."))?;
        let form = normalize_form(form);
        validate_form(&form).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if ids.contains('\t') {
            return Err(Error::parse(lineno, "too many tab-separated fields"));
        }
        let pos = *positions.entry(form.clone()).or_insert_with(|| {
            entries.push((form, Vec::new()));
            entries.len() - 1
        });
        for id in ids.split(',') {
            let id = SynsetId::new(id).map_err(|e| Error::parse(lineno, e.to_string()))?;
            let list = &mut entries[pos].1;
            if !list.contains(&id) {
                list.push(id);
            }
        }
    }
    Ok(entries)
}

fn validate_form(form: &str) -> Result<()> {
    if form.is_empty() {
        return Err(Error::invalid("empty surface form"));
    }
    if form.chars().any(|c| c.is_whitespace() || c == '|' || c == ',') {
        return Err(Error::invalid(format!(
            "surface form {form:?} contains whitespace, '|' or ','"
        )));
    }
    let tokens: Vec<&str> = form.split(FORM_JOINER).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(Error::invalid(format!("surface form {form:?} has an empty token")));
    }
    if tokens.len() > MAX_FORM_TOKENS {
        return Err(Error::invalid(format!(
            "surface form {form:?} has {} tokens, at most {MAX_FORM_TOKENS} allowed",
            tokens.len()
        )));
    }
    Ok(())
}

/// Surface form to candidate synsets, resolved against one network.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: HashMap<String, Vec<SynsetIdx>>,
}

impl Lexicon {
    /// Candidates for an already-joined, normalized form.
    pub fn lookup(&self, form: &str) -> &[SynsetIdx] {
        self.entries.get(form).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Candidates for a token sequence (joined with `_`). Sequences longer
    /// than [`MAX_FORM_TOKENS`] never match.
    pub fn candidates<S: AsRef<str>>(&self, tokens: &[S]) -> &[SynsetIdx] {
        if tokens.is_empty() || tokens.len() > MAX_FORM_TOKENS {
            return &[];
        }
        let form = join_form(tokens);
        self.lookup(&form)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[SynsetIdx])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

pub fn join_form<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut form = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            form.push(FORM_JOINER);
        }
        form.push_str(t.as_ref());
    }
    form
}

/// Read a lexicon file and resolve its candidates against `net`.
pub fn load_lexicon<R: BufRead>(source: R, net: &SemanticNetwork) -> Result<Lexicon> {
    let mut entries = HashMap::new();
    for (form, ids) in parse_lexicon(source)? {
        let mut resolved = Vec::with_capacity(ids.len());
        let mut unknown = Vec::new();
        for id in &ids {
            match net.lookup(id.as_str()) {
                Some(idx) => resolved.push(idx),
                None => unknown.push(id.as_str()),
            }
        }
        if !unknown.is_empty() {
            return Err(Error::invalid(format!(
                "lexicon entry {form:?} references synsets not in the network: {}",
                unknown.join(", ")
            )));
        }
        entries.insert(form, resolved);
    }
    Ok(Lexicon { entries })
}

/// Candidate synset ids for a token sequence, in lexicon order.
pub fn candidate_synsets<'a, S: AsRef<str>>(
    lex: &Lexicon,
    net: &'a SemanticNetwork,
    tokens: &[S],
) -> Vec<&'a SynsetId> {
    lex.candidates(tokens).iter().map(|&s| net.id(s)).collect()
}
