//! Truncated probability carriers with certified residual tail mass.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// A pmf on `0..=r_max` plus an upper bound on the mass beyond the cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    pub probs: Vec<f64>,
    pub residual: f64,
    #[serde(skip)]
    pub label: String,
}

impl Pmf {
    pub fn new(probs: Vec<f64>, residual: f64, label: impl Into<String>) -> Self {
        Pmf {
            probs,
            residual: residual.max(0.0),
            label: label.into(),
        }
    }

    /// Point mass at `r` on a support of length `r_max + 1`.
    pub fn point_mass(r: usize, r_max: usize, label: impl Into<String>) -> Self {
        let mut probs = vec![0.0; r_max + 1];
        probs[r] = 1.0;
        Pmf::new(probs, 0.0, label)
    }

    /// Normalised histogram; residual 0 (every observation is in the core).
    pub fn from_counts(counts: &[u64], label: impl Into<String>) -> Self {
        let total: u64 = counts.iter().sum();
        let probs = if total == 0 {
            vec![0.0; counts.len().max(1)]
        } else {
            counts.iter().map(|&c| c as f64 / total as f64).collect()
        };
        Pmf::new(probs, 0.0, label)
    }

    pub fn r_max(&self) -> usize {
        self.probs.len().saturating_sub(1)
    }

    /// Probability at `r`; zero beyond the truncation.
    pub fn get(&self, r: usize) -> f64 {
        self.probs.get(r).copied().unwrap_or(0.0)
    }

    pub fn core_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mean of the truncated core.
    pub fn core_mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(r, p)| r as f64 * p)
            .sum()
    }

    /// Copy extended with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Pmf {
        let mut probs = self.probs.clone();
        probs.resize(probs.len().max(len), 0.0);
        Pmf {
            probs,
            residual: self.residual,
            label: self.label.clone(),
        }
    }

    /// `sum(probs) + residual` should be 1 for a law carrier.
    pub fn is_normalized(&self, tol: f64) -> bool {
        self.probs.iter().all(|p| *p >= 0.0)
            && self.residual >= 0.0
            && (self.core_mass() + self.residual - 1.0).abs() <= tol
    }

    /// CSV with fixed columns `(r, prob)`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "r,prob")?;
        for (r, p) in self.probs.iter().enumerate() {
            writeln!(w, "{r},{p}")?;
        }
        Ok(())
    }
}

/// A joint pmf on `{0..=k_max}^2` plus residual mass outside the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    pub rows: Vec<Vec<f64>>,
    pub residual: f64,
    #[serde(skip)]
    pub label: String,
}

impl JointPmf {
    pub fn new(rows: Vec<Vec<f64>>, residual: f64, label: impl Into<String>) -> Self {
        JointPmf {
            rows,
            residual: residual.max(0.0),
            label: label.into(),
        }
    }

    pub fn zeros(k_max: usize, label: impl Into<String>) -> Self {
        JointPmf::new(vec![vec![0.0; k_max + 1]; k_max + 1], 0.0, label)
    }

    pub fn k_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn get(&self, k1: usize, k2: usize) -> f64 {
        self.rows
            .get(k1)
            .and_then(|r| r.get(k2))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn core_mass(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().sum::<f64>()).sum()
    }

    /// Largest asymmetry `|p(k1,k2) - p(k2,k1)|` over the box.
    pub fn max_asymmetry(&self) -> f64 {
        let k = self.rows.len();
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in (i + 1)..k {
                worst = worst.max((self.rows[i][j] - self.rows[j][i]).abs());
            }
        }
        worst
    }

    /// Marginal of the first index over the truncated box.
    pub fn marginal0(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn padded(&self, k_max: usize) -> JointPmf {
        let len = (k_max + 1).max(self.rows.len());
        let mut rows = self.rows.clone();
        for row in rows.iter_mut() {
            row.resize(len, 0.0);
        }
        rows.resize(len, vec![0.0; len]);
        JointPmf {
            rows,
            residual: self.residual,
            label: self.label.clone(),
        }
    }

    /// Restrict to the `k_max` box; mass outside moves into the residual.
    pub fn cropped(&self, k_max: usize) -> JointPmf {
        if k_max >= self.k_max() {
            return self.padded(k_max);
        }
        let mut outside = 0.0;
        let mut rows = vec![vec![0.0; k_max + 1]; k_max + 1];
        for (k1, row) in self.rows.iter().enumerate() {
            for (k2, &p) in row.iter().enumerate() {
                if k1 <= k_max && k2 <= k_max {
                    rows[k1][k2] = p;
                } else {
                    outside += p;
                }
            }
        }
        JointPmf {
            rows,
            residual: self.residual + outside,
            label: self.label.clone(),
        }
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        self.rows.iter().flatten().all(|p| *p >= 0.0)
            && self.residual >= 0.0
            && (self.core_mass() + self.residual - 1.0).abs() <= tol
    }

    /// CSV with fixed columns `(k1, k2, prob)`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "k1,k2,prob")?;
        for (k1, row) in self.rows.iter().enumerate() {
            for (k2, p) in row.iter().enumerate() {
                writeln!(w, "{k1},{k2},{p}")?;
            }
        }
        Ok(())
    }
}

/// The unnormalised sequence `q_r = E(Y P(d*_Y = r))`; sums to `E Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSeq {
    pub q: Vec<f64>,
    pub residual: f64,
}

impl QSeq {
    pub fn new(q: Vec<f64>, residual: f64) -> Self {
        QSeq {
            q,
            residual: residual.max(0.0),
        }
    }

    pub fn get(&self, r: usize) -> f64 {
        self.q.get(r).copied().unwrap_or(0.0)
    }

    pub fn core_sum(&self) -> f64 {
        self.q.iter().sum()
    }
}
