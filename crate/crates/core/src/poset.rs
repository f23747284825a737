//! Finite linearly ordered index sets carrying an involution.
//!
//! Labels are opaque strings; the order is the order in which they were
//! declared, never a numeric reading of the label text.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("label {0:?} is listed twice")]
    DuplicateLabel(String),
    #[error("involution pair mentions unknown label {0:?}")]
    UnknownLabelInPair(String),
    #[error("label {0:?} appears in more than one involution pair")]
    OverlappingPairs(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} is empty or contains a comma")]
    InvalidLabel(String),
}

/// Positions are the canonical handle for an index: `0..len()` in declared
/// order.
#[derive(Clone, PartialEq, Eq)]
pub struct IndexSet {
    labels: Vec<String>,
    sigma: Vec<usize>,
    positions: HashMap<String, usize>,
}

impl IndexSet {
    /// Build from labels in increasing order and the pairs swapped by σ.
    /// Labels not mentioned in any pair are fixed by σ.
    pub fn new<S: AsRef<str>>(ordered_labels: &[S], involution_pairs: &[(S, S)]) -> Result<Self, IndexError> {
        let mut positions = HashMap::new();
        let mut labels = Vec::with_capacity(ordered_labels.len());
        for (pos, label) in ordered_labels.iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() || label.contains(',') {
                return Err(IndexError::InvalidLabel(label.to_string()));
            }
            if positions.insert(label.to_string(), pos).is_some() {
                return Err(IndexError::DuplicateLabel(label.to_string()));
            }
            labels.push(label.to_string());
        }
        let mut sigma: Vec<usize> = (0..labels.len()).collect();
        let mut paired = vec![false; labels.len()];
        for (a, b) in involution_pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let pa = *positions.get(a).ok_or_else(|| IndexError::UnknownLabelInPair(a.to_string()))?;
            let pb = *positions.get(b).ok_or_else(|| IndexError::UnknownLabelInPair(b.to_string()))?;
            let members: &[(usize, &str)] = if pa == pb { &[(pa, a)] } else { &[(pa, a), (pb, b)] };
            for &(p, l) in members {
                if paired[p] {
                    return Err(IndexError::OverlappingPairs(l.to_string()));
                }
                paired[p] = true;
            }
            sigma[pa] = pb;
            sigma[pb] = pa;
        }
        Ok(Self { labels, sigma, positions })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, pos: usize) -> &str {
        &self.labels[pos]
    }

    pub fn position(&self, label: &str) -> Result<usize, IndexError> {
        self.positions.get(label).copied().ok_or_else(|| IndexError::UnknownLabel(label.to_string()))
    }

    /// σ on positions.
    pub fn sigma(&self, pos: usize) -> usize {
        self.sigma[pos]
    }

    pub fn sigma_label(&self, label: &str) -> Result<&str, IndexError> {
        Ok(&self.labels[self.sigma[self.position(label)?]])
    }

    pub fn compare(&self, i: &str, j: &str) -> Result<Ordering, IndexError> {
        Ok(self.position(i)?.cmp(&self.position(j)?))
    }

    /// The pairs `(i, σ(i))` with `i < σ(i)`, as positions.
    pub fn swapped_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sigma.iter().enumerate().filter(|&(i, &s)| i < s).map(|(i, &s)| (i, s))
    }

    /// Representative of the σ-orbit of `pos` (its smaller member).
    pub fn orbit_rep(&self, pos: usize) -> usize {
        pos.min(self.sigma[pos])
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet({:?}", self.labels)?;
        for (a, b) in self.swapped_pairs() {
            write!(f, " {}<->{}", self.labels[a], self.labels[b])?;
        }
        write!(f, ")")
    }
}
