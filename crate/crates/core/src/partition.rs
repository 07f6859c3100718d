//! Set partitions of `{1..n}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Blocks are kept sorted by their smallest label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Subset>,
}

impl Partition {
    /// Validates that `blocks` are nonempty, disjoint and cover `{1..n}`.
    pub fn new(n: usize, mut blocks: Vec<Subset>) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block in partition"));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::invalid(format!("block {b} overlaps another block")));
            }
            seen = seen.union(*b);
        }
        if seen != Subset::full(n) {
            return Err(Error::invalid(format!("blocks do not cover {{1..{n}}}")));
        }
        blocks.sort_by_key(|b| b.min_label());
        Ok(Partition { blocks })
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Self {
        Partition { blocks: (1..=n).map(Subset::singleton).collect() }
    }

    /// Merges each given (pairwise disjoint) subset into one block; the
    /// remaining labels stay singletons.
    pub fn merging(n: usize, merged: &[Subset]) -> Result<Self> {
        let covered = merged.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        let mut blocks: Vec<Subset> = merged.to_vec();
        blocks.extend(covered.complement(n).iter().map(Subset::singleton));
        Self::new(n, blocks)
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Blocks of size at least two.
    pub fn merged(&self) -> Vec<Subset> {
        self.blocks.iter().copied().filter(|b| b.len() >= 2).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// `self <= other` in reverse refinement: every block of `other` lies in
    /// a block of `self`.
    pub fn coarser_or_equal(&self, other: &Partition) -> bool {
        other.blocks.iter().all(|b| self.blocks.iter().any(|a| b.is_subset_of(*a)))
    }

    pub fn block_of(&self, label: usize) -> Option<Subset> {
        self.blocks.iter().copied().find(|b| b.contains(label))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Every set partition of the labels in `ground`, via restricted growth
/// strings.
pub fn partitions_of(ground: Subset) -> Vec<Vec<Subset>> {
    let labels = ground.labels();
    let k = labels.len();
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut growth = vec![0usize; k];
    loop {
        let nblocks = growth.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Subset::EMPTY; nblocks];
        for (i, &g) in growth.iter().enumerate() {
            blocks[g] = blocks[g].union(Subset::singleton(labels[i]));
        }
        out.push(blocks);
        // next restricted growth string
        let mut i = k - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = growth[..i].iter().copied().max().unwrap_or(0);
            if growth[i] <= prefix_max {
                growth[i] += 1;
                for g in growth.iter_mut().skip(i + 1) {
                    *g = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Every partition of `{1..n}`.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    partitions_of(Subset::full(n))
        .into_iter()
        .map(|b| Partition::new(n, b).expect("valid by construction"))
        .collect()
}
