use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{compensated_sum, entropy, EPS};
use crate::symbols::SymbolSet;

/// Sums further than this from one are rejected outright; closer sums are
/// renormalized.
pub const MASS_SUM_TOLERANCE: f64 = 1e-6;

/// A finite random variable over labeled symbols with strictly positive
/// masses summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::LengthMismatch {
                labels: labels.len(),
                probs: probs.len(),
            });
        }
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if let Some((index, &mass)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p > 0.0))
        {
            return Err(Error::NonPositiveMass { index, mass });
        }
        let mut seen: Vec<&str> = labels.iter().map(String::as_str).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].to_string()));
        }
        let sum = compensated_sum(probs.iter().copied());
        if libm::fabs(sum - 1.0) > MASS_SUM_TOLERANCE {
            return Err(Error::MassSumError { sum });
        }
        let probs = if libm::fabs(sum - 1.0) > EPS {
            probs.into_iter().map(|p| p / sum).collect()
        } else {
            probs
        };
        Ok(Self { labels, probs })
    }

    /// Labels default to `"1".."N"`.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = (1..=probs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_probs(alloc::vec![1.0 / n as f64; n])
    }

    /// Drops zero-mass symbols before validating. The returned map sends each
    /// original index to its new index, or `None` when dropped.
    pub fn without_zero_mass(
        labels: Vec<String>,
        probs: Vec<f64>,
    ) -> Result<(Self, Vec<Option<usize>>)> {
        if labels.len() != probs.len() {
            return Err(Error::LengthMismatch {
                labels: labels.len(),
                probs: probs.len(),
            });
        }
        let mut map = Vec::with_capacity(probs.len());
        let mut kept_labels = Vec::new();
        let mut kept_probs = Vec::new();
        for (label, p) in labels.into_iter().zip(probs) {
            if p == 0.0 {
                map.push(None);
            } else {
                map.push(Some(kept_probs.len()));
                kept_labels.push(label);
                kept_probs.push(p);
            }
        }
        Ok((Self::new(kept_labels, kept_probs)?, map))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn universe(&self) -> SymbolSet {
        SymbolSet::full(self.len())
    }

    pub fn entropy(&self, base: f64) -> f64 {
        entropy(&self.probs, base)
    }
}
