use std::path::Path;

use crate::error::{Error, Result};

/// A deterministic loss matrix, one row per round.
#[derive(Debug, Clone, PartialEq)]
pub struct LossScript {
    rows: Vec<Vec<f64>>,
}

impl LossScript {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.first().map(Vec::len).unwrap_or(0);
        if k < 2 {
            return Err(Error::config("loss script needs at least two arms"));
        }
        for (t, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::config(format!(
                    "loss script row {} has {} entries, expected {k}",
                    t + 1,
                    row.len()
                )));
            }
            if let Some(l) = row.iter().find(|l| !(0.0..=1.0).contains(*l)) {
                return Err(Error::config(format!(
                    "loss script row {} has loss {l} outside [0, 1]",
                    t + 1
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Parses whitespace-separated reals, one round per non-empty line.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(n, line)| {
                line.split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>().map_err(|e| {
                            Error::config(format!("loss script line {}: {tok:?}: {e}", n + 1))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read loss script {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Best arm switches every `ceil(sqrt(T))` rounds; the leader has loss
    /// 0 and every other arm loss 1.
    pub fn alternating_leader(arms: usize, horizon: u64) -> Result<Self> {
        if arms < 2 {
            return Err(Error::config("alternating leader needs at least two arms"));
        }
        let block = (horizon as f64).sqrt().ceil().max(1.0) as u64;
        let rows = (0..horizon)
            .map(|t| {
                let leader = ((t / block) % arms as u64) as usize;
                (0..arms).map(|i| if i == leader { 0.0 } else { 1.0 }).collect()
            })
            .collect();
        Self::new(rows)
    }

    pub fn num_arms(&self) -> usize {
        self.rows[0].len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Losses of round `t` (1-based).
    pub fn row(&self, t: u64) -> Option<&[f64]> {
        t.checked_sub(1)
            .and_then(|i| self.rows.get(i as usize))
            .map(Vec::as_slice)
    }
}
