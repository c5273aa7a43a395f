//! Annotated corpus lines: space-separated tokens, connected mentions written
//! as `form|id1,id2`.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::semnet::SynsetId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedToken {
    /// Surface form; multiword mentions are joined with `_`.
    pub form: String,
    pub senses: Vec<SynsetId>,
}

impl AnnotatedToken {
    pub fn bare(form: impl Into<String>) -> Self {
        AnnotatedToken {
            form: form.into(),
            senses: Vec::new(),
        }
    }
}

impl fmt::Display for AnnotatedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.form)?;
        for (i, s) in self.senses.iter().enumerate() {
            f.write_str(if i == 0 { "|" } else { "," })?;
            f.write_str(s.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for AnnotatedToken {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let (form, senses) = match token.split_once('|') {
            Some((form, ids)) => {
                let senses = ids
                    .split(',')
                    .map(SynsetId::new)
                    .collect::<Result<Vec<_>>>()?;
                (form, senses)
            }
            None => (token, Vec::new()),
        };
        if form.is_empty() {
            return Err(Error::invalid(format!("token {token:?} has an empty form")));
        }
        if form.contains(|c: char| c == ',' || c.is_whitespace()) {
            return Err(Error::invalid(format!(
                "token {token:?} contains ',' or whitespace in its form"
            )));
        }
        Ok(AnnotatedToken {
            form: form.to_string(),
            senses,
        })
    }
}

/// One annotated text unit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotatedLine {
    pub tokens: Vec<AnnotatedToken>,
}

impl AnnotatedLine {
    pub fn new(tokens: Vec<AnnotatedToken>) -> Self {
        AnnotatedLine { tokens }
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for AnnotatedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for AnnotatedLine {
    type Err = Error;

    /// Tokens must be separated by exactly one space.
    fn from_str(line: &str) -> Result<Self> {
        if line.is_empty() {
            return Ok(AnnotatedLine::default());
        }
        line.split(' ')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(AnnotatedLine::new)
    }
}

/// Read a whole annotated corpus. Errors carry 1-based line numbers.
pub fn read_annotated<R: BufRead>(source: R) -> Result<Vec<AnnotatedLine>> {
    source
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            line.parse().map_err(|e: Error| Error::parse(i + 1, e.to_string()))
        })
        .collect()
}
