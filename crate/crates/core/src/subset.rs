//! Subsets of the edge labels `{1..n}`, stored as bit masks.
//!
//! Labels are 1-based everywhere in the public surface; bit `i - 1` holds
//! label `i`. Serialization is a sorted array of labels.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest edge count a [`Subset`] can index.
pub const MAX_EDGES: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u64) -> Self {
        Subset(mask)
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_EDGES);
        Subset((1u64 << n) - 1)
    }

    pub fn singleton(label: usize) -> Self {
        assert!((1..=MAX_EDGES).contains(&label));
        Subset(1u64 << (label - 1))
    }

    /// Builds a subset from 1-based labels; rejects 0 and duplicates.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let mut mask = 0u64;
        for l in labels {
            if l == 0 || l > MAX_EDGES {
                return Err(Error::invalid(format!("edge label {l} out of range")));
            }
            let bit = 1u64 << (l - 1);
            if mask & bit != 0 {
                return Err(Error::invalid(format!("edge label {l} repeated")));
            }
            mask |= bit;
        }
        Ok(Subset(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_EDGES).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement inside `{1..n}`.
    pub fn complement(self, n: usize) -> Subset {
        Subset(Subset::full(n).0 & !self.0)
    }

    /// Sorted labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let tz = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(tz + 1)
            }
        })
    }

    pub fn min_label(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// True if no element exceeds `n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(Subset::full(n))
    }

}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on sorted labels, so ordered collections of subsets come
/// out in the same order as [`subsets_with_size`].
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let mut a = self.0;
        let mut b = other.0;
        loop {
            match (a == 0, b == 0) {
                (true, true) => return std::cmp::Ordering::Equal,
                (true, false) => return std::cmp::Ordering::Less,
                (false, true) => return std::cmp::Ordering::Greater,
                _ => {}
            }
            let (ta, tb) = (a.trailing_zeros(), b.trailing_zeros());
            if ta != tb {
                return ta.cmp(&tb);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        Subset::from_labels(labels).map_err(serde::de::Error::custom)
    }
}

/// All subsets of `{1..n}` with cardinality in `[lo, hi]`, in lexicographic order.
pub fn subsets_with_size(n: usize, lo: usize, hi: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let full = Subset::full(n).mask();
    let mut m = 1u64;
    while m <= full {
        let c = m.count_ones() as usize;
        if c >= lo && c <= hi {
            out.push(Subset(m));
        }
        m += 1;
    }
    out.sort();
    out
}
