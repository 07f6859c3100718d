use std::collections::HashMap;

use num_traits::Signed;
use serde::Serialize;

use crate::error::Result;
use crate::exact_chambers::{margin_unchecked, ChamberSignature, EpsilonAssignment, LengthVector, WallIndex};
use crate::partition::{all_partitions, Partition};
use crate::polygon_realize::merged_lengths;
use crate::rational::{self, Q};
use crate::subset::{subsets_with_size, Subset};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    pub partition: Partition,
    /// Number of blocks.
    pub k: usize,
    pub dim: usize,
    /// `Y_α`: polygons whose parallel classes coarsen `α`.
    pub closed_nonempty: bool,
    /// `Y⁰_α`: parallel classes exactly `α`.
    pub open_nonempty: bool,
}

impl Stratum {
    /// Only one block of size two or more.
    pub fn single_block(&self) -> bool {
        self.partition.merged().len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrataReport {
    pub strata: Vec<Stratum>,
    /// Hasse diagram of the closed strata under reverse refinement: `(a, b)`
    /// when `b` merges two blocks of `a`.
    pub edges: Vec<(usize, usize)>,
}

impl StrataReport {
    /// Proper strata (some block merged) with nonempty open part.
    pub fn proper_open(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter().filter(|s| s.open_nonempty && !s.partition.is_discrete())
    }

    pub fn count_open(&self, dim: usize, single_block_only: bool) -> usize {
        self.proper_open().filter(|s| s.dim == dim && (!single_block_only || s.single_block())).count()
    }
}

fn in_closed_cone(x: &[Q]) -> bool {
    let l: Q = x.iter().sum();
    x.iter().all(|v| rational::int(2) * v <= l)
}

fn in_open_cone(x: &[Q]) -> bool {
    let l: Q = x.iter().sum();
    x.iter().all(|v| rational::int(2) * v < l)
}

/// Every partition `α` of `{1..n}` with the emptiness of `Y_α` and `Y⁰_α`.
pub fn strata(r: &LengthVector) -> Result<StrataReport> {
    r.require_interior()?;
    let n = r.n();
    let mut strata = Vec::new();
    for alpha in all_partitions(n) {
        let x = merged_lengths(r, &alpha);
        let k = x.len();
        let closed_nonempty = k >= 2 && in_closed_cone(&x);
        let open_nonempty = (k >= 3 && in_open_cone(&x)) || (k == 2 && x[0] == x[1]);
        strata.push(Stratum { partition: alpha, k, dim: k.saturating_sub(3), closed_nonempty, open_nonempty });
    }
    let index: HashMap<&Partition, usize> = strata.iter().enumerate().map(|(i, s)| (&s.partition, i)).collect();
    let mut edges = Vec::new();
    for (i, s) in strata.iter().enumerate() {
        if !s.closed_nonempty {
            continue;
        }
        let blocks = s.partition.blocks();
        for a in 0..blocks.len() {
            for b in a + 1..blocks.len() {
                let mut merged: Vec<Subset> = blocks.to_vec();
                merged[a] = blocks[a].union(blocks[b]);
                merged.remove(b);
                let coarser = Partition::new(n, merged).expect("still a partition");
                let j = index[&coarser];
                if strata[j].closed_nonempty {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort();
    Ok(StrataReport { strata, edges })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlowupStep {
    /// Canonical resolution of the singular point at a line gon.
    Resolution { line_gon: WallIndex },
    /// Blowup along the closed stratum `Y_J`.
    Center {
        subset: Subset,
        dim: usize,
        codim: usize,
        nontrivial: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        eps: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    pub steps: Vec<BlowupStep>,
    /// Strata with several merged blocks: reached as intersections of the
    /// centers rather than blown up themselves.
    pub intersections: Vec<Partition>,
}

impl Schedule {
    pub fn nontrivial_centers(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, BlowupStep::Center { nontrivial: true, .. })).count()
    }

    pub fn trivial_centers(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, BlowupStep::Center { nontrivial: false, .. })).count()
    }

    pub fn resolutions(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, BlowupStep::Resolution { .. })).count()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph schedule {\n");
        for (i, step) in self.steps.iter().enumerate() {
            let label = match step {
                BlowupStep::Resolution { line_gon } => format!("resolve line gon {}", line_gon.subset()),
                BlowupStep::Center { subset, codim, nontrivial, .. } => {
                    format!("Y_{subset} codim {codim}{}", if *nontrivial { "" } else { " (trivial)" })
                }
            };
            s.push_str(&format!("  s{i} [label=\"{label}\"];\n"));
            if i > 0 {
                s.push_str(&format!("  s{} -> s{i};\n", i - 1));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Blowup order: resolutions at the line gons, then the closed strata
/// `Y_J` of the strictly relevant `J` from the smallest up.
pub fn schedule(r: &LengthVector, eps: Option<&EpsilonAssignment>) -> Result<Schedule> {
    r.require_interior()?;
    let n = r.n();
    let mut steps: Vec<BlowupStep> = ChamberSignature::of(r)
        .zeros()
        .into_iter()
        .map(|w| BlowupStep::Resolution { line_gon: w })
        .collect();
    let mut centers: Vec<Subset> = if n >= 4 {
        subsets_with_size(n, 2, n - 2).into_iter().filter(|&j| margin_unchecked(r, j).is_negative()).collect()
    } else {
        Vec::new()
    };
    centers.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    for j in centers {
        steps.push(BlowupStep::Center {
            subset: j,
            dim: n - j.len() - 2,
            codim: j.len() - 1,
            nontrivial: j.len() >= 3,
            eps: eps.and_then(|e| e.get(j).ok()).map(rational::format),
        });
    }
    let intersections = strata(r)?
        .strata
        .into_iter()
        .filter(|s| s.open_nonempty && s.partition.merged().len() >= 2)
        .map(|s| s.partition)
        .collect();
    Ok(Schedule { steps, intersections })
}
