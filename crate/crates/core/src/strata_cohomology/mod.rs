//! Strata, blowup schedules and Poincaré polynomials.
//!
//! Every space here has cohomology only in even degrees, so a Poincaré
//! polynomial is stored as a polynomial in `q = t²`. The same type holds the
//! E-polynomials of open strata, whose coefficients may be negative.

mod betti;
mod strata;

use std::ops::{Add, Mul, Neg, Sub};

use num_integer::binomial;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_chambers::{canonical_walls, favorable_representative, margin_unchecked, LengthVector};
use crate::polygon_realize::rng;
use crate::rational::{self, Q};
use crate::subset::Subset;

pub use betti::{open_e_polynomial, stable_betti, BettiCache};
pub use strata::{schedule, strata, BlowupStep, Schedule, StrataReport, Stratum};

/// Integer coefficients of `1, q, q², …`, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoincarePoly(Vec<i64>);

impl PoincarePoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PoincarePoly(coeffs)
    }

    pub fn zero() -> Self {
        PoincarePoly(Vec::new())
    }

    pub fn one() -> Self {
        PoincarePoly(vec![1])
    }

    /// `q`.
    pub fn q() -> Self {
        PoincarePoly(vec![0, 1])
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `P(Pᵏ) = 1 + q + … + qᵏ`.
    pub fn projective(k: usize) -> Self {
        PoincarePoly(vec![1; k + 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Degree in `q`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, c| acc * q + c)
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl std::fmt::Display for PoincarePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t^2")?,
                (_, 1) => write!(f, "t^{}", 2 * i)?,
                (1, _) => write!(f, "{a}t^2")?,
                _ => write!(f, "{a}t^{}", 2 * i)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &PoincarePoly {
    type Output = PoincarePoly;
    fn add(self, rhs: &PoincarePoly) -> PoincarePoly {
        let len = self.0.len().max(rhs.0.len());
        PoincarePoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PoincarePoly {
    type Output = PoincarePoly;
    fn sub(self, rhs: &PoincarePoly) -> PoincarePoly {
        self + &(-rhs)
    }
}

impl Neg for &PoincarePoly {
    type Output = PoincarePoly;
    fn neg(self) -> PoincarePoly {
        PoincarePoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &PoincarePoly {
    type Output = PoincarePoly;
    fn mul(self, rhs: &PoincarePoly) -> PoincarePoly {
        if self.is_zero() || rhs.is_zero() {
            return PoincarePoly::zero();
        }
        let mut out = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PoincarePoly::new(out)
    }
}

impl std::iter::Sum for PoincarePoly {
    fn sum<I: Iterator<Item = PoincarePoly>>(iter: I) -> PoincarePoly {
        iter.fold(PoincarePoly::zero(), |acc, p| &acc + &p)
    }
}

/// `P(P^{|big|−2}) − P(P^{|small|−2})`: the change when `small` becomes the
/// short side of a wall.
fn crossing_change(big: usize, small: usize) -> PoincarePoly {
    &PoincarePoly::projective(big - 2) - &PoincarePoly::projective(small - 2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    /// Canonical wall index.
    pub wall: Subset,
    /// Segment parameter at which the wall is met.
    #[serde(with = "rational")]
    pub t: Q,
    /// The side that is short after the crossing.
    pub now_short: Subset,
    pub change: PoincarePoly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallCrossingPath {
    pub start: LengthVector,
    /// Attempt number of the start-point perturbation; 0 is the binary
    /// weights, later attempts use weights drawn from a generator seeded by it.
    pub perturbation: u64,
    pub crossings: Vec<Crossing>,
    pub poincare: PoincarePoly,
}

fn require_off_walls(r: &LengthVector) -> Result<()> {
    r.require_interior()?;
    if let Some(w) = canonical_walls(r.n()).into_iter().find(|w| margin_unchecked(r, w.subset()).is_zero()) {
        return Err(Error::OnWall(w.subset()));
    }
    Ok(())
}

const PERTURBATION_TRIES: u64 = 4096;
/// Largest `n` whose `2^(n-1)` walls are enumerated.
pub const MAX_WALL_N: usize = 24;

/// Walks from the favorable chamber `Δ_n` to `r` along a segment that meets
/// the walls one at a time, adjusting the Poincaré polynomial at each.
pub fn wall_crossing_path(r: &LengthVector) -> Result<WallCrossingPath> {
    let n = r.n();
    if n < 4 {
        return Err(Error::invalid(format!("wall crossing needs n >= 4, got {n}")));
    }
    if n > MAX_WALL_N {
        return Err(Error::Unsupported(format!("walls are enumerated explicitly; n = {n} exceeds {MAX_WALL_N}")));
    }
    require_off_walls(r)?;
    let walls = canonical_walls(n);
    let base = favorable_representative(n, n);
    // Edge i moves by w_i / (4n 2^n) with 1 <= w_i <= 2^n, so no margin of
    // `base` (all half-integers) changes sign. The first try uses the
    // binary weights 2^(i-1), which give every wall its own slope; later
    // tries draw the weights at random so the starts do not stay on a line
    // that might lie inside the bad set.
    let scale = rational::int(4 * n as i64 * (1i64 << n));
    let end: Vec<Q> = walls.iter().map(|w| margin_unchecked(r, w.subset())).collect();
    for k in 0u64..PERTURBATION_TRIES {
        let weights: Vec<i64> = if k == 0 {
            (0..n).map(|i| 1i64 << i).collect()
        } else {
            let mut g = rng(k);
            (0..n).map(|_| g.gen_range(1..=1i64 << n)).collect()
        };
        let start = LengthVector::new(
            base.lengths().iter().zip(&weights).map(|(x, &w)| x + rational::int(w) / &scale).collect(),
        )?;
        let mut crossings = Vec::new();
        for (w, m1) in walls.iter().zip(&end) {
            let m0 = margin_unchecked(&start, w.subset());
            if m0.is_zero() || m0.is_positive() == m1.is_positive() {
                continue;
            }
            let t = &m0 / (&m0 - m1);
            let j = w.subset();
            let (short, long) = if m1.is_negative() { (j, j.complement(n)) } else { (j.complement(n), j) };
            crossings.push(Crossing { wall: j, t, now_short: short, change: crossing_change(long.len(), short.len()) });
        }
        let start_on_wall = walls.iter().any(|w| margin_unchecked(&start, w.subset()).is_zero());
        crossings.sort_by(|a, b| a.t.cmp(&b.t));
        let distinct = crossings.windows(2).all(|p| p[0].t != p[1].t);
        if start_on_wall || !distinct {
            continue;
        }
        let mut poincare = PoincarePoly::projective(n - 3);
        for c in &crossings {
            poincare = &poincare + &c.change;
        }
        return Ok(WallCrossingPath { start, perturbation: k, crossings, poincare });
    }
    Err(Error::Internal(format!("no generic start point after {PERTURBATION_TRIES} perturbations")))
}

/// Poincaré polynomial of a smooth polygon space.
pub fn poincare_wall_crossing(r: &LengthVector) -> Result<PoincarePoly> {
    Ok(wall_crossing_path(r)?.poincare)
}

/// The same value without the path: the sum of the crossing changes over
/// every wall whose canonical side is long at `r`.
pub(crate) fn poincare_by_signs(r: &LengthVector) -> PoincarePoly {
    let n = r.n();
    if n == 3 {
        return PoincarePoly::one();
    }
    let mut p = PoincarePoly::projective(n - 3);
    for w in canonical_walls(n) {
        let j = w.subset();
        if margin_unchecked(r, j).is_positive() {
            p = &p + &crossing_change(j.len(), n - j.len());
        }
    }
    p
}

fn central_sum(n: usize, terms: usize) -> PoincarePoly {
    let mut p = PoincarePoly::projective(n - 3);
    for k in 1..=terms {
        let c = binomial(n as i64 - 1, k as i64);
        let d = &PoincarePoly::projective(n - 3 - k) - &PoincarePoly::projective(k - 1);
        p = &p + &(&PoincarePoly::constant(c) * &d);
    }
    p
}

/// Closed form for the central chamber, odd `n >= 5`.
pub fn poincare_center(n: usize) -> Result<PoincarePoly> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::invalid(format!("the central closed form needs odd n >= 5, got {n}")));
    }
    Ok(central_sum(n, (n - 3) / 2))
}

/// Intersection Poincaré polynomial of the central polygon space, even
/// `n >= 6`.
pub fn ih_poincare_center(n: usize) -> Result<PoincarePoly> {
    if n < 6 || n % 2 == 1 {
        return Err(Error::invalid(format!("the intersection closed form needs even n >= 6, got {n}")));
    }
    Ok(central_sum(n, (n - 4) / 2))
}
