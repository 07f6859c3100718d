//! Marked points on the Riemann sphere and their PGL(2) normal form.
//!
//! Each unit direction is sent to `P¹` by stereographic projection from
//! `(0,0,1)`; the first three pairwise distinct points are then moved to
//! `0, 1, ∞`. Points are kept in homogeneous coordinates `[p : q]` so the
//! pole and the anchors are handled without special cases.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{angle_between, canonicalize, EdgeFrame, Tolerances, Vec3};
use crate::error::{Error, Result};

/// A point `[p : q]` of the Riemann sphere, scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannPoint {
    p: Complex64,
    q: Complex64,
}

impl RiemannPoint {
    pub const ZERO: RiemannPoint = RiemannPoint { p: Complex64::new(0.0, 0.0), q: Complex64::new(1.0, 0.0) };
    pub const ONE: RiemannPoint = RiemannPoint {
        p: Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        q: Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    };
    pub const INFINITY: RiemannPoint = RiemannPoint { p: Complex64::new(1.0, 0.0), q: Complex64::new(0.0, 0.0) };

    fn homogeneous(p: Complex64, q: Complex64) -> Self {
        let s = (p.norm_sqr() + q.norm_sqr()).sqrt();
        RiemannPoint { p: p / s, q: q / s }
    }

    pub fn finite(z: Complex64) -> Self {
        Self::homogeneous(z, Complex64::new(1.0, 0.0))
    }

    /// Stereographic projection of a unit vector from the north pole.
    pub fn from_direction(u: &Vec3) -> Self {
        // (x + iy)/(1 − z) = (1 + z)/(x − iy); use the better conditioned form
        if u.z <= 0.0 {
            Self::homogeneous(Complex64::new(u.x, u.y), Complex64::new(1.0 - u.z, 0.0))
        } else {
            Self::homogeneous(Complex64::new(1.0 + u.z, 0.0), Complex64::new(u.x, -u.y))
        }
    }

    /// `None` at infinity.
    pub fn value(&self) -> Option<Complex64> {
        if self.q.norm() <= 1e-15 * self.p.norm() {
            None
        } else {
            Some(self.p / self.q)
        }
    }

    /// Chordal distance, `|p₁q₂ − p₂q₁|` for unit representatives.
    pub fn chordal(&self, other: &RiemannPoint) -> f64 {
        (self.p * other.q - other.p * self.q).norm()
    }

    fn det(&self, other: &RiemannPoint) -> Complex64 {
        self.p * other.q - self.q * other.p
    }
}

impl Serialize for RiemannPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            None => s.serialize_str("inf"),
            Some(z) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

/// Möbius map sending `a, b, c` to `0, 1, ∞`, applied to `x`.
fn normalize_against(x: &RiemannPoint, a: &RiemannPoint, b: &RiemannPoint, c: &RiemannPoint) -> RiemannPoint {
    // g(x) = [x,a][b,c] / ([x,c][b,a])
    let num = x.det(a) * b.det(c);
    let den = x.det(c) * b.det(a);
    RiemannPoint::homogeneous(num, den)
}

/// Ordered marked points in normal form, with the indices (0-based) of the
/// anchors sent to `0, 1, ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliPoint {
    pts: Vec<RiemannPoint>,
    anchors: [usize; 3],
}

impl ModuliPoint {
    pub fn points(&self) -> &[RiemannPoint] {
        &self.pts
    }

    pub fn anchors(&self) -> [usize; 3] {
        self.anchors
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    fn anchored(raw: &[RiemannPoint], anchors: [usize; 3]) -> Self {
        let [ia, ib, ic] = anchors;
        let (a, b, c) = (raw[ia], raw[ib], raw[ic]);
        let mut pts: Vec<RiemannPoint> = raw.iter().map(|x| normalize_against(x, &a, &b, &c)).collect();
        pts[ia] = RiemannPoint::ZERO;
        pts[ib] = RiemannPoint::ONE;
        pts[ic] = RiemannPoint::INFINITY;
        ModuliPoint { pts, anchors }
    }

    /// Largest chordal distance between corresponding points, after moving
    /// `other` onto this point's anchors; `None` if those anchors collide in
    /// `other` or the lengths differ.
    pub fn distance(&self, other: &ModuliPoint) -> Option<f64> {
        if self.pts.len() != other.pts.len() {
            return None;
        }
        let [ia, ib, ic] = self.anchors;
        let (a, b, c) = (other.pts[ia], other.pts[ib], other.pts[ic]);
        let sep = 1e-12;
        if a.chordal(&b) <= sep || b.chordal(&c) <= sep || a.chordal(&c) <= sep {
            return None;
        }
        let re = ModuliPoint::anchored(&other.pts, self.anchors);
        Some(self.pts.iter().zip(&re.pts).map(|(x, y)| x.chordal(y)).fold(0.0, f64::max))
    }
}

/// Normal form of directions (no canonicalization applied). Needs three
/// directions pairwise further apart than `tol.angle`.
pub fn moduli_point_of_directions(u: &[Vec3], tol: &Tolerances) -> Result<ModuliPoint> {
    let mut anchors: Vec<usize> = Vec::with_capacity(3);
    for (i, ui) in u.iter().enumerate() {
        if anchors.iter().all(|&k| angle_between(&u[k], ui) > tol.angle) {
            anchors.push(i);
            if anchors.len() == 3 {
                break;
            }
        }
    }
    if anchors.len() < 3 {
        return Err(Error::NoModuli);
    }
    let raw: Vec<RiemannPoint> = u.iter().map(RiemannPoint::from_direction).collect();
    Ok(ModuliPoint::anchored(&raw, [anchors[0], anchors[1], anchors[2]]))
}

/// The ordered marked points of a frame, modulo PGL(2).
pub fn moduli_point(frame: &EdgeFrame, tol: &Tolerances) -> Result<ModuliPoint> {
    let c = canonicalize(frame, tol);
    moduli_point_of_directions(c.directions(), tol)
}

pub fn pgl2_equivalent(a: &ModuliPoint, b: &ModuliPoint, tol: f64) -> bool {
    a.distance(b).is_some_and(|d| d <= tol)
}
