//! The dual graph of the genus-zero curve attached to a stable polygon.
//!
//! Each component becomes a copy of `P¹` carrying one point per parallel
//! class: a class of size one is a marked point (a leg), a larger class is
//! the node to the bubble at that class, and a bubble's last edge is the
//! node to its parent.

use std::fmt::Write;

use serde::Serialize;

use super::{labeled_classes, validate, StableNode, StablePolygon};
use crate::error::{Error, Result};
use crate::polygon_realize::{moduli_point_of_directions, parallel_classes, ModuliPoint, Tolerances, Vec3};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveVertex {
    pub id: usize,
    pub subset: Subset,
    pub legs: Vec<usize>,
    /// Marked points plus nodes.
    pub special_points: usize,
    /// Normal form of the special points, in the order of the component's
    /// parallel classes; `None` with fewer than three.
    pub marks: Option<ModuliPoint>,
    /// A line-gon root: two special points, so it is contracted in the
    /// stable model.
    pub contracted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Leg {
    pub label: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCurve {
    pub n: usize,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<(usize, usize)>,
    pub legs: Vec<Leg>,
}

impl DualCurve {
    /// Connected with `|E| = |V| − 1`.
    pub fn is_tree(&self) -> bool {
        let v = self.vertices.len();
        if v == 0 || self.edges.len() + 1 != v {
            return false;
        }
        let mut seen = vec![false; v];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                let y = if a == x { b } else if b == x { a } else { continue };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Every vertex has at least three special points, apart from
    /// contracted ones, which have exactly two.
    pub fn is_stable(&self) -> bool {
        self.vertices.iter().all(|v| {
            let counted = v.legs.len() + self.degree(v.id);
            counted == v.special_points
                && if v.contracted { v.special_points == 2 } else { v.special_points >= 3 }
        })
    }

    pub fn min_special_points(&self) -> usize {
        self.vertices.iter().map(|v| v.special_points).min().unwrap_or(0)
    }

    /// The stable model: each contracted vertex is removed and its two
    /// neighbours are joined directly.
    pub fn contract(&self) -> DualCurve {
        let mut edges = self.edges.clone();
        let mut keep: Vec<bool> = vec![true; self.vertices.len()];
        for v in self.vertices.iter().filter(|v| v.contracted && v.legs.is_empty()) {
            let nbrs: Vec<usize> = edges
                .iter()
                .filter_map(|&(a, b)| if a == v.id { Some(b) } else if b == v.id { Some(a) } else { None })
                .collect();
            if nbrs.len() != 2 {
                continue;
            }
            edges.retain(|&(a, b)| a != v.id && b != v.id);
            edges.push((nbrs[0].min(nbrs[1]), nbrs[0].max(nbrs[1])));
            keep[v.id] = false;
        }
        let mut renumber = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for v in &self.vertices {
            if keep[v.id] {
                renumber[v.id] = vertices.len();
                vertices.push(CurveVertex { id: vertices.len(), ..v.clone() });
            }
        }
        let mut edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (renumber[a], renumber[b])).collect();
        edges.sort();
        let legs = self.legs.iter().map(|l| Leg { label: l.label, vertex: renumber[l.vertex] }).collect();
        DualCurve { n: self.n, vertices, edges, legs }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual_curve {\n");
        for v in &self.vertices {
            let style = if v.contracted { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  v{} [label=\"{}\"{}];", v.id, v.subset, style);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        for l in &self.legs {
            let _ = writeln!(s, "  l{} [shape=plaintext, label=\"{}\"];", l.label, l.label);
            let _ = writeln!(s, "  v{} -- l{};", l.vertex, l.label);
        }
        s.push_str("}\n");
        s
    }
}

/// γ: the combinatorial type and marked points of the stable curve.
pub fn to_stable_curve(sp: &StablePolygon, tol: &Tolerances) -> Result<DualCurve> {
    let report = validate(sp, tol)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::Structural(format!(
            "not a valid stable polygon: {} fails at {} ({})",
            bad.condition, bad.component, bad.detail
        )));
    }
    let mut curve = DualCurve { n: sp.lengths().n(), vertices: Vec::new(), edges: Vec::new(), legs: Vec::new() };
    fn walk(node: &StableNode, root: bool, parent: Option<usize>, tol: &Tolerances, curve: &mut DualCurve) {
        let id = curve.vertices.len();
        if let Some(p) = parent {
            curve.edges.push((p, id));
        }
        let classes = labeled_classes(node, root, tol);
        let legs: Vec<usize> = classes
            .iter()
            .filter(|c| c.len() == 1)
            .filter_map(|c| c[0])
            .collect();
        let reps: Vec<Vec3> = parallel_classes(node.frame(), tol)
            .iter()
            .map(|c| node.frame().direction(c.min_label().expect("non-empty")))
            .collect();
        let marks = moduli_point_of_directions(&reps, tol).ok();
        curve.legs.extend(legs.iter().map(|&label| Leg { label, vertex: id }));
        curve.vertices.push(CurveVertex {
            id,
            subset: node.subset(),
            legs,
            special_points: classes.len(),
            contracted: root && classes.len() == 2,
            marks,
        });
        for c in node.children() {
            walk(c, false, Some(id), tol, curve);
        }
    }
    walk(sp.root(), true, None, tol, &mut curve);
    curve.legs.sort_by_key(|l| l.label);
    if !curve.is_tree() || !curve.is_stable() {
        return Err(Error::Internal("dual graph is not a stable tree".into()));
    }
    Ok(curve)
}
