//! Stable polygons: a root polygon together with a laminar tree of bubbles.
//!
//! Every component is an [`EdgeFrame`]. The root is a frame over `r`; the
//! bubble attached at `J` is a frame over `(r_J, Σ_J r − ε_J)`, its first
//! `|J|` edges carrying the labels of `J` in increasing order and the last
//! edge being the node that joins it to its parent. A component must be
//! degenerate exactly at its children: its parallel classes of size two or
//! more are precisely the index sets of its bubbles. Leaves are therefore
//! generic.

mod curve;
mod limit;

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_chambers::{augment, EpsilonAssignment, LengthVector};
use crate::polygon_realize::{
    angle_between, canonicalize, close, parallel_classes, triangle, CloseOptions, EdgeFrame, Seed, Tolerances,
};
use crate::rational::{self, Q};
use crate::subset::Subset;

pub use curve::{to_stable_curve, CurveVertex, DualCurve, Leg};
pub use limit::limit;

/// One component of a stable polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct StableNode {
    subset: Subset,
    frame: EdgeFrame,
    children: Vec<StableNode>,
}

impl StableNode {
    pub fn new(subset: Subset, frame: EdgeFrame, children: Vec<StableNode>) -> Self {
        let mut children = children;
        children.sort_by_key(|c| c.subset);
        StableNode { subset, frame, children }
    }

    pub fn subset(&self) -> Subset {
        self.subset
    }

    pub fn frame(&self) -> &EdgeFrame {
        &self.frame
    }

    pub fn children(&self) -> &[StableNode] {
        &self.children
    }

    /// Global label of each edge of the frame; `None` for a bubble's node
    /// edge.
    pub fn edge_labels(&self, is_root: bool) -> Vec<Option<usize>> {
        let mut v: Vec<Option<usize>> = self.subset.iter().map(Some).collect();
        if !is_root {
            v.push(None);
        }
        v
    }

    fn visit<'a>(&'a self, out: &mut Vec<&'a StableNode>) {
        out.push(self);
        for c in &self.children {
            c.visit(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StablePolygon {
    r: LengthVector,
    eps: EpsilonAssignment,
    root: StableNode,
}

impl StablePolygon {
    /// Assembles a stable polygon without checking it; see [`validate`].
    pub fn new(r: LengthVector, eps: EpsilonAssignment, root: StableNode) -> Self {
        StablePolygon { r, eps, root }
    }

    pub fn lengths(&self) -> &LengthVector {
        &self.r
    }

    pub fn eps(&self) -> &EpsilonAssignment {
        &self.eps
    }

    pub fn root(&self) -> &StableNode {
        &self.root
    }

    /// Components in depth-first order, root first.
    pub fn components(&self) -> Vec<&StableNode> {
        let mut out = Vec::new();
        self.root.visit(&mut out);
        out
    }

    /// Index sets of the bubbles, sorted.
    pub fn bubble_subsets(&self) -> Vec<Subset> {
        let mut v: Vec<Subset> = self.components().iter().skip(1).map(|c| c.subset).collect();
        v.sort();
        v
    }

    pub fn bubble_count(&self) -> usize {
        self.components().len() - 1
    }
}

struct NodeView<'a> {
    node: &'a StableNode,
    eps: &'a EpsilonAssignment,
    root: bool,
}

impl Serialize for NodeView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StableNode", 4)?;
        st.serialize_field("subset", &self.node.subset)?;
        let eps = if self.root { None } else { self.eps.get(self.node.subset).ok().map(rational::format) };
        st.serialize_field("eps", &eps)?;
        st.serialize_field("frame", &self.node.frame)?;
        let children: Vec<NodeView> =
            self.node.children.iter().map(|c| NodeView { node: c, eps: self.eps, root: false }).collect();
        st.serialize_field("children", &children)?;
        st.end()
    }
}

impl Serialize for StablePolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StablePolygon", 3)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("eps", &self.eps)?;
        st.serialize_field("root", &NodeView { node: &self.root, eps: &self.eps, root: true })?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub component: Subset,
    pub condition: String,
    pub holds: bool,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub valid: bool,
    pub checks: Vec<Check>,
}

impl StabilityReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn structural(sp: &StablePolygon) -> Result<()> {
    let n = sp.r.n();
    if sp.root.subset != Subset::full(n) {
        return Err(Error::Structural(format!("root carries {} instead of {{1..{n}}}", sp.root.subset)));
    }
    fn walk(node: &StableNode, all: &mut Vec<Subset>) -> Result<()> {
        let mut seen = Subset::EMPTY;
        for c in &node.children {
            if c.subset.len() < 2 || !c.subset.is_subset_of(node.subset) || c.subset == node.subset {
                return Err(Error::Structural(format!(
                    "bubble {} is not a proper subset of at least two labels of {}",
                    c.subset, node.subset
                )));
            }
            if !c.subset.is_disjoint(seen) {
                return Err(Error::Structural(format!("sibling bubbles overlap at {}", c.subset)));
            }
            seen = seen.union(c.subset);
            all.push(c.subset);
            walk(c, all)?;
        }
        Ok(())
    }
    let mut all = Vec::new();
    walk(&sp.root, &mut all)?;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let nested = a.is_subset_of(*b) || b.is_subset_of(*a);
            if !nested && !a.is_disjoint(*b) {
                return Err(Error::Structural(format!("{a} and {b} are neither nested nor disjoint")));
            }
            if a == b {
                return Err(Error::Structural(format!("{a} appears twice")));
            }
        }
    }
    Ok(())
}

/// Parallel classes of a component in global labels; the node edge of a
/// bubble appears as `None`.
fn labeled_classes(node: &StableNode, root: bool, tol: &Tolerances) -> Vec<Vec<Option<usize>>> {
    let labels = node.edge_labels(root);
    parallel_classes(&node.frame, tol)
        .into_iter()
        .map(|c| c.iter().map(|p| labels[p - 1]).collect())
        .collect()
}

/// How far the parallel-class decision is from flipping: the smallest of
/// `angle − tol` over pairs in different classes and `tol − angle` over
/// pairs in the same class.
fn class_margin(frame: &EdgeFrame, classes: &[Subset], tol: &Tolerances) -> f64 {
    let n = frame.n();
    let class_of = |p: usize| classes.iter().position(|c| c.contains(p));
    let mut m = f64::INFINITY;
    for i in 1..=n {
        for j in i + 1..=n {
            let a = angle_between(&frame.direction(i), &frame.direction(j));
            let d = if class_of(i) == class_of(j) { tol.angle - a } else { a - tol.angle };
            m = m.min(d);
        }
    }
    m
}

pub fn validate(sp: &StablePolygon, tol: &Tolerances) -> Result<StabilityReport> {
    structural(sp)?;
    let mut checks = Vec::new();
    let mut push = |component: Subset, condition: &str, holds: bool, margin: f64, detail: String| {
        checks.push(Check { component, condition: condition.to_string(), holds, margin, detail });
    };

    // (node, parent lengths in global terms, is_root)
    let mut stack: Vec<(&StableNode, Option<LengthVector>, bool)> = vec![(&sp.root, None, true)];
    while let Some((node, parent_lengths, root)) = stack.pop() {
        let k = node.subset;
        let expected = if root {
            Some(sp.r.clone())
        } else {
            match sp.eps.get(k) {
                Ok(e) => {
                    push(k, "epsilon", true, 0.0, format!("eps = {}", rational::format(e)));
                    match augment(&sp.r, k, e) {
                        Ok(v) => Some(v),
                        Err(err) => {
                            push(k, "epsilon", false, 0.0, err.to_string());
                            None
                        }
                    }
                }
                Err(err) => {
                    push(k, "epsilon", false, 0.0, err.to_string());
                    None
                }
            }
        };

        if let Some(parent) = parent_lengths {
            // Σ_K <= (parent perimeter) − Σ_K
            let sk = sp.r.sum_over(k);
            let rest = parent.perimeter() - &sk;
            let margin = rational::to_f64(&(&rest - &sk));
            push(k, "relevant", sk <= rest, margin, format!("Σ_J = {}", rational::format(&sk)));
        }

        match &expected {
            Some(v) if v == node.frame.lengths() => push(k, "lengths", true, 0.0, format!("{v}")),
            Some(v) => push(
                k,
                "lengths",
                false,
                0.0,
                format!("length mismatch: expected {v}, got {}", node.frame.lengths()),
            ),
            None => {}
        }

        let res = node.frame.residual();
        push(k, "closed", res <= tol.close, tol.close - res, format!("residual {res:e}"));

        let classes = parallel_classes(&node.frame, tol);
        let margin = class_margin(&node.frame, &classes, tol);
        let labeled = labeled_classes(node, root, tol);
        let node_degenerate = labeled.iter().any(|c| c.len() >= 2 && c.contains(&None));
        if !root {
            push(
                k,
                "last edge nondegenerate",
                !node_degenerate,
                margin,
                "the node edge lies in no parallel class".into(),
            );
        }
        let mut degenerate: Vec<Subset> = labeled
            .iter()
            .filter(|c| c.len() >= 2 && !c.contains(&None))
            .map(|c| Subset::from_labels(c.iter().flatten().copied()).expect("distinct labels"))
            .collect();
        degenerate.sort();
        let kids: Vec<Subset> = node.children.iter().map(|c| c.subset).collect();
        push(
            k,
            "bubbles match degenerations",
            degenerate == kids,
            margin,
            format!("degenerate classes {degenerate:?}, bubbles {kids:?}"),
        );
        if node.children.is_empty() {
            push(k, "leaf generic", degenerate.is_empty() && !node_degenerate, margin, String::new());
        }

        for c in &node.children {
            stack.push((c, expected.clone(), false));
        }
    }
    let valid = checks.iter().all(|c| c.holds);
    Ok(StabilityReport { valid, checks })
}

/// Where bubble moduli come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Filler {
    /// Random closures, one stream per bubble.
    Rng(u64),
    /// A frame for every bubble that will be needed, keyed by its index set.
    Bubbles(BTreeMap<Subset, EdgeFrame>),
}

fn bubble_frame(r: &LengthVector, k: Subset, eps: &Q, filler: &Filler, tol: &Tolerances) -> Result<EdgeFrame> {
    let aug = augment(r, k, eps)?;
    match filler {
        Filler::Bubbles(map) => {
            let f = map.get(&k).ok_or_else(|| Error::invalid(format!("no bubble frame supplied for {k}")))?;
            if f.lengths() != &aug {
                return Err(Error::invalid(format!(
                    "bubble frame for {k} has lengths {}, expected {aug}",
                    f.lengths()
                )));
            }
            Ok(f.clone())
        }
        Filler::Rng(seed) => {
            if k.len() == 2 {
                return Ok(triangle(aug));
            }
            let s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k.mask());
            let f = close(&aug, &Seed::Rng(s), &CloseOptions { tol: tol.close, ..CloseOptions::default() })?;
            Ok(canonicalize(&f, tol))
        }
    }
}

fn grow(
    r: &LengthVector,
    eps: &EpsilonAssignment,
    subset: Subset,
    frame: EdgeFrame,
    root: bool,
    filler: &Filler,
    tol: &Tolerances,
) -> Result<StableNode> {
    let mut node = StableNode::new(subset, frame, Vec::new());
    let mut children = Vec::new();
    for class in labeled_classes(&node, root, tol) {
        if class.len() < 2 {
            continue;
        }
        if class.contains(&None) {
            return Err(Error::Structural(format!("the node edge of bubble {subset} is degenerate")));
        }
        let k = Subset::from_labels(class.into_iter().flatten()).expect("distinct labels");
        let e = eps.get(k)?;
        let f = bubble_frame(r, k, e, filler, tol)?;
        children.push(grow(r, eps, k, f, false, filler, tol)?);
    }
    children.sort_by_key(|c| c.subset);
    node.children = children;
    Ok(node)
}

/// Attaches a bubble at every degenerate parallel class, recursively.
pub fn stabilize(frame: &EdgeFrame, eps: &EpsilonAssignment, filler: &Filler, tol: &Tolerances) -> Result<StablePolygon> {
    let r = frame.lengths().clone();
    if !r.is_interior() {
        return Err(Error::Boundary(format!("r = {r} is not interior")));
    }
    if !frame.is_closed(tol) {
        return Err(Error::invalid(format!("frame is not closed: residual {:e}", frame.residual())));
    }
    let root = grow(&r, eps, r.full(), frame.clone(), true, filler, tol)?;
    Ok(StablePolygon { r, eps: eps.clone(), root })
}

/// The forgetful map: drop the bubbles.
pub fn forget(sp: &StablePolygon) -> EdgeFrame {
    sp.root.frame.clone()
}
