//! The central chamber as a cone of Kähler classes, and the parameter cone
//! of pairs `(r, ε)` with `ε` indexed by the relevant sets of size three or
//! more.
//!
//! Classes are represented by their coordinates only; no form is built.

use std::ops::Add;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_chambers::{
    default_base_point, epsilon_range, in_chamber_of, relevant_subsets, ChamberSignature, EpsilonAssignment,
    LengthVector, WallIndex,
};
use crate::polygon_realize::rng;
use crate::rational::{self, Q};

fn require_n(n: usize) -> Result<()> {
    if n < 5 {
        return Err(Error::invalid(format!("the central chamber needs n >= 5, got {n}")));
    }
    Ok(())
}

/// Strictly inside the central chamber (for even `n`, the chamber of
/// [`default_base_point`]).
pub fn central_contains(r: &LengthVector) -> bool {
    r.n() >= 5 && in_chamber_of(r, &default_base_point(r.n()))
}

/// Walls through `r`; non-empty exactly when `r` is off every chamber.
pub fn walls_through(r: &LengthVector) -> Vec<WallIndex> {
    ChamberSignature::of(r).zeros()
}

/// Coordinates of the class `[ω_r]` in the chamber chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ClassCoordinates(#[serde(with = "rational::vec")] Vec<Q>);

impl ClassCoordinates {
    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn scaled(&self, lambda: &Q) -> Self {
        ClassCoordinates(self.0.iter().map(|x| x * lambda).collect())
    }
}

impl Add for &ClassCoordinates {
    type Output = ClassCoordinates;

    fn add(self, other: &ClassCoordinates) -> ClassCoordinates {
        ClassCoordinates(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// θ, defined on the central chamber only.
pub fn theta(r: &LengthVector) -> Result<ClassCoordinates> {
    require_n(r.n())?;
    if !central_contains(r) {
        let on: Vec<String> = walls_through(r).iter().map(|w| w.subset().to_string()).collect();
        let why = if on.is_empty() { "outside".to_string() } else { format!("on the walls {}", on.join(", ")) };
        return Err(Error::invalid(format!("theta is defined on the central chamber; r = {r} is {why}")));
    }
    Ok(ClassCoordinates(r.lengths().to_vec()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPoint {
    pub r: LengthVector,
    pub eps: EpsilonAssignment,
}

impl ParamPoint {
    /// `|ℛ_{>2}(r)|` plus `n`: the number of free coordinates.
    pub fn coordinate_count(&self) -> usize {
        self.r.n() + self.eps.len()
    }
}

/// `r` central and `ε` defined, and legal, on exactly the relevant sets of
/// size at least three.
pub fn param_contains(p: &ParamPoint) -> bool {
    if !central_contains(&p.r) {
        return false;
    }
    let Ok(big) = relevant_subsets(&p.r, 3) else { return false };
    p.eps.len() == big.len()
        && big.iter().all(|&j| match (p.eps.get(j), epsilon_range(&p.r, j)) {
            (Ok(e), Ok(range)) => range.contains(e),
            _ => false,
        })
}

/// `2^{n-1} − (n² − n + 2)/2`, the second Betti number of `M̄_{0,n}`.
pub fn param_dim(n: usize) -> usize {
    (1usize << (n - 1)) - (n * n - n + 2) / 2
}

const GRID: i64 = 1_000_000;

/// A point of the parameter cone: `r` a small random perturbation of the
/// base point, each `ε_J` uniform on a grid of its open range.
pub fn param_sample(n: usize, seed: u64) -> Result<ParamPoint> {
    require_n(n)?;
    let base = default_base_point(n);
    let mut g = rng(seed);
    // the even base point sits within O(1/n³) of its walls
    let amplitude = if n % 2 == 1 { rational::ratio(1, 4 * n as i64) } else { rational::ratio(1, 4 * (n as i64).pow(4)) };
    let r = loop {
        let v: Vec<Q> = base
            .lengths()
            .iter()
            .map(|x| x + &amplitude * rational::ratio(g.gen_range(-GRID + 1..GRID), GRID))
            .collect();
        let r = LengthVector::new(v)?;
        if central_contains(&r) {
            break r;
        }
    };
    let entries: Vec<_> = relevant_subsets(&r, 3)?
        .into_iter()
        .map(|j| {
            let hi = epsilon_range(&r, j).expect("relevant").hi;
            (j, hi * rational::ratio(g.gen_range(1..GRID), GRID))
        })
        .collect();
    let eps = EpsilonAssignment::new(&r, entries)?;
    Ok(ParamPoint { r, eps })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionCheck {
    pub n: usize,
    pub param_dim: usize,
    pub samples: usize,
    pub violations: usize,
}

/// Samples `count` points with seeds `seed..seed+count` and counts those
/// whose coordinate count differs from [`param_dim`].
pub fn dimension_check(n: usize, count: usize, seed: u64) -> Result<(Vec<ParamPoint>, DimensionCheck)> {
    let want = param_dim(n);
    let points = (0..count as u64).map(|k| param_sample(n, seed.wrapping_add(k))).collect::<Result<Vec<_>>>()?;
    let violations = points.iter().filter(|p| !param_contains(p) || p.coordinate_count() != want).count();
    Ok((points, DimensionCheck { n, param_dim: want, samples: count, violations }))
}
