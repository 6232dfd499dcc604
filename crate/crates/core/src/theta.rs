//! Subsets Θ of the simple roots, addressed by 1-based index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("malformed theta list {0:?}")]
    Malformed(String),
    #[error("theta index {index} out of range 1..={rank}")]
    OutOfRange { index: usize, rank: usize },
    #[error("theta is all of the simple roots: projection target is zero space")]
    Full,
    #[error("theta is empty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaSubset {
    indices: Vec<usize>,
}

impl ThetaSubset {
    /// Sorts and deduplicates.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ThetaSubset { indices }
    }

    pub fn empty() -> Self {
        ThetaSubset::default()
    }

    pub fn from_mask(mask: u32, rank: usize) -> Self {
        ThetaSubset::new((0..rank).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices 1..=rank not in Θ.
    pub fn complement(&self, rank: usize) -> Vec<usize> {
        (1..=rank).filter(|&i| !self.contains(i)).collect()
    }

    /// Every index in range and Θ ≠ Δ.
    pub fn validate_proper(&self, rank: usize) -> Result<(), ThetaError> {
        if let Some(&bad) = self.indices.iter().find(|&&i| i == 0 || i > rank) {
            return Err(ThetaError::OutOfRange { index: bad, rank });
        }
        if self.indices.len() == rank {
            return Err(ThetaError::Full);
        }
        Ok(())
    }

    /// As `validate_proper`, and additionally nonempty.
    pub fn validate_analysis(&self, rank: usize) -> Result<(), ThetaError> {
        self.validate_proper(rank)?;
        if self.is_empty() {
            return Err(ThetaError::Empty);
        }
        Ok(())
    }

    /// All proper nonempty subsets of {1..rank}, by bitmask order.
    pub fn all_proper_nonempty(rank: usize) -> Vec<ThetaSubset> {
        (1..(1u32 << rank) - 1).map(|m| ThetaSubset::from_mask(m, rank)).collect()
    }

    /// Apply a relabelling `i -> map(i)` (used to translate numberings).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> ThetaSubset {
        ThetaSubset::new(self.indices.iter().map(|&i| map(i)).collect())
    }
}

impl fmt::Display for ThetaSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for ThetaSubset {
    type Err = ThetaError;

    /// Accepts `2,3,5`, `{2,3,5}` or an empty string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if t.is_empty() {
            return Ok(ThetaSubset::empty());
        }
        let idx = t
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ThetaError::Malformed(s.to_string()))?;
        if idx.contains(&0) {
            return Err(ThetaError::Malformed(s.to_string()));
        }
        Ok(ThetaSubset::new(idx))
    }
}
