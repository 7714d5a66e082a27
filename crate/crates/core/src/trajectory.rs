//! Sampled paths `λ(0), λ(1), …, λ(k)` and their CSV form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symfunc::Signature;

/// Which sampler produced a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Matrix,
    Particle,
    Noninteracting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    /// Human-readable description of the specialization or matrix sizes.
    pub spec: String,
    pub source: Source,
    /// Working precision for matrix paths.
    pub precision: Option<u32>,
    /// Set when some singular number reached the precision and was clamped.
    pub censored: bool,
}

/// Positions after each step. For matrix and particle paths every row is a
/// signature; non-interacting walks need not be ordered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub steps: Vec<Vec<i64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(n: usize, meta: TrajectoryMeta) -> Self {
        Trajectory { n, steps: vec![vec![0; n]], meta }
    }

    /// Number of steps taken (`k`).
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> &[i64] {
        self.steps.last().expect("trajectory always contains λ(0)")
    }

    pub fn signature(&self, k: usize) -> Result<Signature> {
        Signature::new(self.steps[k].clone())
    }

    /// Checks that every row of a matrix or particle path is a signature and
    /// that paths grow coordinatewise.
    pub fn validate(&self) -> Result<()> {
        for j in 0..self.len() {
            let (a, b) = (&self.steps[j], &self.steps[j + 1]);
            if a.iter().zip(b).any(|(x, y)| x > y) {
                return Err(Error::Validation(format!("step {j}: {a:?} -> {b:?} decreases")));
            }
        }
        if self.meta.source != Source::Noninteracting {
            for k in 0..=self.len() {
                self.signature(k)?;
            }
        }
        Ok(())
    }

    /// Checks `λ(j) ≺_Q λ(j+1)` for all `j`. This holds when every step is a
    /// single-variable Cauchy move (`m_j = 1`, i.e. `N_j = n + 1`); longer
    /// generalized variables compose several such moves and may skip past it.
    pub fn validate_interlacing(&self) -> Result<()> {
        for j in 0..self.len() {
            let a = self.signature(j)?;
            let b = self.signature(j + 1)?;
            if !a.q_interlaces(&b) {
                return Err(Error::Validation(format!("step {j}: {a} does not Q-interlace {b}")));
            }
        }
        Ok(())
    }

    /// Like [`Trajectory::write_csv`] with a leading `# <comment>` line.
    pub fn write_csv_tagged<W: Write>(&self, mut w: W, comment: &str) -> Result<()> {
        writeln!(w, "# {comment}")?;
        self.write_csv(w)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = std::iter::once("k".to_string())
            .chain((1..=self.n).map(|i| format!("lambda_{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (k, row) in self.steps.iter().enumerate() {
            let cells: Vec<String> = std::iter::once(k.to_string()).chain(row.iter().map(|v| v.to_string())).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Reads the rows of a CSV written by [`Trajectory::write_csv`]; lines
    /// starting with `#` are skipped.
    pub fn read_csv_rows<R: BufRead>(r: R) -> Result<Vec<Vec<i64>>> {
        let mut lines = r.lines().filter(|l| !matches!(l, Ok(text) if text.starts_with('#')));
        let header = lines.next().ok_or_else(|| Error::Validation("empty CSV".into()))??;
        let n = header.split(',').count().saturating_sub(1);
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != n + 1 || cells[0].trim().parse::<usize>().ok() != Some(idx) {
                return Err(Error::Validation(format!("malformed CSV row {idx}")));
            }
            let row: std::result::Result<Vec<i64>, _> = cells[1..].iter().map(|c| c.trim().parse::<i64>()).collect();
            rows.push(row.map_err(|_| Error::Validation(format!("non-integer entry in row {idx}")))?);
        }
        Ok(rows)
    }
}
