//! Floating-point realizations of polygons.
//!
//! A closed polygon is stored as an [`EdgeFrame`]: unit edge directions
//! `u_i` together with the exact side lengths, so that the edges are
//! `e_i = r_i u_i` and `Σ r_i u_i = 0`. Frames are only meaningful up to
//! rotation; [`canonicalize`] picks a gauge.

mod closure;
mod moduli;
mod transport;

use nalgebra::{Rotation3, Unit, Vector3};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_chambers::LengthVector;
use crate::partition::Partition;
use crate::rational::{self, Q};
use crate::subset::Subset;

pub use closure::{close, closure_gradient, closure_objective, triangle, CloseOptions, Seed};
pub use moduli::{moduli_point, moduli_point_of_directions, pgl2_equivalent, ModuliPoint, RiemannPoint};
pub use transport::{degeneration_path, incidence, rebalance, sub_polygon, transport, IncidenceReport};

pub type Vec3 = Vector3<f64>;

/// Numerical slack for the geometric predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Closure residual `|Σ r_i u_i|`.
    pub close: f64,
    /// Angle (radians) under which two directions count as parallel.
    pub angle: f64,
    /// Chordal distance for Möbius equivalence of marked points.
    pub pgl: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { close: 1e-10, angle: 1e-8, pgl: 1e-8 }
    }
}

impl Tolerances {
    /// Overrides one tolerance by name (`close`, `angle`, `pgl`).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::invalid(format!("tolerance {name} must be positive, got {value}")));
        }
        match name {
            "close" => self.close = value,
            "angle" => self.angle = value,
            "pgl" => self.pgl = value,
            other => return Err(Error::invalid(format!("unknown tolerance '{other}'"))),
        }
        Ok(())
    }

    /// Slack on `|d_J| = Σ_J r` matching an angular spread of `angle`
    /// among the `J` edges: `Σ_J r (1 − cos θ) <= Σ_J r θ²/2`.
    pub fn saturation_slack(&self, sum: f64) -> f64 {
        sum * (0.5 * self.angle * self.angle + 16.0 * f64::EPSILON)
    }
}

/// A boolean geometric test together with the margin it was decided by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFrame {
    lengths: LengthVector,
    r: Vec<f64>,
    u: Vec<Vec3>,
    residual: f64,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    #[serde(with = "rational::vec")]
    r: Vec<Q>,
    u: Vec<[f64; 3]>,
    residual: f64,
}

impl Serialize for EdgeFrame {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrameJson {
            r: self.lengths.lengths().to_vec(),
            u: self.u.iter().map(|v| [v.x, v.y, v.z]).collect(),
            residual: self.residual,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeFrame {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FrameJson::deserialize(d)?;
        let lengths = LengthVector::new(j.r).map_err(serde::de::Error::custom)?;
        let u = j.u.iter().map(|a| Vec3::new(a[0], a[1], a[2])).collect();
        EdgeFrame::new(lengths, u).map_err(serde::de::Error::custom)
    }
}

impl EdgeFrame {
    /// Normalizes the directions and records the closure residual.
    pub fn new(lengths: LengthVector, u: Vec<Vec3>) -> Result<Self> {
        if u.len() != lengths.n() {
            return Err(Error::invalid(format!("{} directions for {} edges", u.len(), lengths.n())));
        }
        let mut unit = Vec::with_capacity(u.len());
        for (i, v) in u.into_iter().enumerate() {
            let norm = v.norm();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::invalid(format!("direction {} is zero or not finite", i + 1)));
            }
            unit.push(v / norm);
        }
        Ok(Self::from_unit(lengths, unit))
    }

    pub(crate) fn from_unit(lengths: LengthVector, u: Vec<Vec3>) -> Self {
        let r = lengths.to_f64();
        let residual = closure_vector(&r, &u).norm();
        EdgeFrame { lengths, r, u, residual }
    }

    pub fn lengths(&self) -> &LengthVector {
        &self.lengths
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn directions(&self) -> &[Vec3] {
        &self.u
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// 1-based.
    pub fn direction(&self, label: usize) -> Vec3 {
        self.u[label - 1]
    }

    pub fn edge(&self, label: usize) -> Vec3 {
        self.u[label - 1] * self.r[label - 1]
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_closed(&self, tol: &Tolerances) -> bool {
        self.residual <= tol.close
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> EdgeFrame {
        let u = self.u.iter().map(|v| (rot * v).normalize()).collect();
        EdgeFrame::from_unit(self.lengths.clone(), u)
    }

    /// All edges parallel or anti-parallel to the first.
    pub fn is_line_gon(&self, tol: &Tolerances) -> Predicate {
        let a = self.u[0];
        let worst = self.u.iter().map(|v| a.cross(v).norm().asin()).fold(0.0, f64::max);
        Predicate { holds: worst <= tol.angle, margin: worst - tol.angle }
    }
}

pub(crate) fn closure_vector(r: &[f64], u: &[Vec3]) -> Vec3 {
    r.iter().zip(u).fold(Vec3::zeros(), |acc, (ri, ui)| acc + ui * *ri)
}

/// Angle between two unit vectors, accurate near 0 and π.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Rotates so that `u_1 = (1,0,0)` and the first direction not parallel or
/// anti-parallel to it lies in the `z = 0` plane with positive `y`.
pub fn canonicalize(frame: &EdgeFrame, tol: &Tolerances) -> EdgeFrame {
    let ex = Vec3::x();
    let first = frame.u[0];
    let align = Rotation3::rotation_between(&first, &ex).unwrap_or_else(|| {
        // first = -ex
        Rotation3::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI)
    });
    let stage: Vec<Vec3> = frame.u.iter().map(|v| align * v).collect();
    let pivot = stage.iter().find(|v| {
        let transverse = (v.y * v.y + v.z * v.z).sqrt();
        transverse > tol.angle.sin()
    });
    let spin = match pivot {
        Some(v) => Rotation3::from_axis_angle(&Unit::new_unchecked(ex), -v.z.atan2(v.y)),
        None => Rotation3::identity(),
    };
    let mut u: Vec<Vec3> = stage.iter().map(|v| (spin * v).normalize()).collect();
    u[0] = ex;
    EdgeFrame::from_unit(frame.lengths.clone(), u)
}

/// `d_J = −Σ_{j∈J} r_j u_j` and its length.
pub fn diagonal(frame: &EdgeFrame, j: Subset) -> Result<(Vec3, f64)> {
    let n = frame.n();
    if j.is_empty() || !j.fits(n) || j == Subset::full(n) {
        return Err(Error::invalid(format!("{j} must be a proper nonempty subset of {{1..{n}}}")));
    }
    let d = -j.iter().fold(Vec3::zeros(), |acc, l| acc + frame.edge(l));
    let len = d.norm();
    Ok((d, len))
}

/// Groups `i, j` whenever the angle between `u_i` and `u_j` is at most
/// `tol.angle` (anti-parallel edges are never grouped); transitive closure.
pub fn parallel_classes(frame: &EdgeFrame, tol: &Tolerances) -> Vec<Subset> {
    let n = frame.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if angle_between(&frame.u[i], &frame.u[j]) <= tol.angle {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<Subset> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if root_of[root] == usize::MAX {
            root_of[root] = classes.len();
            classes.push(Subset::EMPTY);
        }
        let c = root_of[root];
        classes[c] = classes[c].union(Subset::singleton(i + 1));
    }
    classes
}

/// True if no two edges are parallel.
pub fn is_generic(frame: &EdgeFrame, tol: &Tolerances) -> bool {
    parallel_classes(frame, tol).iter().all(|c| c.len() == 1)
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n2 = v.norm_squared();
        if n2 > 1e-6 && n2 <= 1.0 {
            return v / n2.sqrt();
        }
    }
}

pub fn random_rotation(seed: u64) -> Rotation3<f64> {
    let mut g = rng(seed);
    let axis = Unit::new_normalize(random_unit(&mut g));
    let angle = g.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    Rotation3::from_axis_angle(&axis, angle)
}

/// Exact rational copy of a binary64 length.
pub(crate) fn exact(x: f64) -> Q {
    BigRational::from_float(x).expect("finite length")
}

/// Block sums `r_α`, one entry per block of `alpha`.
pub fn merged_lengths(r: &LengthVector, alpha: &Partition) -> Vec<Q> {
    alpha.blocks().iter().map(|b| r.sum_over(*b)).collect()
}

/// A closed frame whose parallel classes are exactly the blocks of
/// `alpha` (with probability one): close the merged polygon `r_α` from a
/// random seed and give every edge of a block its block's direction.
pub fn frame_in_stratum(r: &LengthVector, alpha: &Partition, seed: u64, opts: &CloseOptions) -> Result<EdgeFrame> {
    let merged = merged_lengths(r, alpha);
    if merged.len() < 3 {
        return Err(Error::invalid(format!("partition {alpha} has fewer than three blocks")));
    }
    let rv = LengthVector::new(merged)?;
    if !rv.is_interior() {
        return Err(Error::Boundary(format!("merged lengths {rv} for {alpha} are not interior")));
    }
    let base = close(&rv, &Seed::Rng(seed), opts)?;
    let mut u = vec![Vec3::zeros(); r.n()];
    for (k, block) in alpha.blocks().iter().enumerate() {
        for l in block.iter() {
            u[l - 1] = base.u[k];
        }
    }
    Ok(EdgeFrame::from_unit(r.clone(), u))
}
