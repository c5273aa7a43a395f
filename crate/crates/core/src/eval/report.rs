use std::io::Write;

use crate::error::Result;

/// Result of one evaluation run: named metrics plus coverage.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub task: String,
    pub metrics: Vec<(String, f64)>,
    pub evaluated: usize,
    pub total: usize,
    /// Items left out because a word, sense or vector was missing.
    pub excluded: Vec<String>,
    /// Comparisons that involved a zero vector (scored as cosine 0).
    pub zero_vectors: usize,
}

impl EvalReport {
    pub fn new(task: impl Into<String>, total: usize) -> Self {
        EvalReport {
            task: task.into(),
            metrics: Vec::new(),
            evaluated: 0,
            total,
            excluded: Vec::new(),
            zero_vectors: 0,
        }
    }

    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.evaluated as f64 / self.total as f64
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn push(&mut self, name: &str, value: f64) {
        self.metrics.push((name.to_string(), value));
    }

    /// Aligned table for people.
    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.task)?;
        let width = self
            .metrics
            .iter()
            .map(|(k, _)| k.len())
            .chain(["coverage".len()])
            .max()
            .unwrap_or(0);
        for (k, v) in &self.metrics {
            writeln!(out, "  {k:<width$}  {v:.4}")?;
        }
        writeln!(
            out,
            "  {:<width$}  {}/{} ({:.1}%)",
            "coverage",
            self.evaluated,
            self.total,
            100.0 * self.coverage()
        )?;
        if self.zero_vectors > 0 {
            writeln!(out, "  warning: {} comparisons involved zero vectors", self.zero_vectors)?;
        }
        for item in &self.excluded {
            writeln!(out, "  excluded: {item}")?;
        }
        Ok(())
    }

    /// `key=value` lines for scripts.
    pub fn write_key_values<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "task={}", self.task)?;
        for (k, v) in &self.metrics {
            writeln!(out, "{k}={v}")?;
        }
        writeln!(out, "evaluated={}", self.evaluated)?;
        writeln!(out, "total={}", self.total)?;
        writeln!(out, "coverage={}", self.coverage())?;
        writeln!(out, "excluded={}", self.excluded.len())?;
        writeln!(out, "zero_vectors={}", self.zero_vectors)?;
        Ok(())
    }
}
