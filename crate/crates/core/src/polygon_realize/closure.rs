//! Zero finding for the moment map `Φ_r(u) = Σ r_i u_i` on `(S²)ⁿ`.
//!
//! Minimizes `f(u) = |Σ r_i u_i|²` by projected gradient steps
//! `u_i ← normalize(u_i − η r_i v)`, `v = Σ r_j u_j`, with Armijo
//! backtracking on `η`.

use nalgebra::Matrix3;

use super::{closure_vector, random_rotation, random_unit, rng, EdgeFrame, Vec3};
use crate::error::{Error, Result};
use crate::exact_chambers::LengthVector;

/// Starting point for the descent.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// Directions drawn uniformly from the sphere.
    Rng(u64),
    /// Explicit starting directions, one per edge; `jitter` seeds the
    /// perturbation used if the start is a critical point of `f`.
    Hints { directions: Vec<Vec3>, jitter: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloseOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CloseOptions {
    fn default() -> Self {
        CloseOptions { tol: 1e-10, max_iter: 100_000 }
    }
}

/// `f(u) = |Σ r_i u_i|²`.
pub fn closure_objective(r: &[f64], u: &[Vec3]) -> f64 {
    closure_vector(r, u).norm_squared()
}

/// Euclidean gradient of [`closure_objective`]: `∂f/∂u_i = 2 r_i v`.
pub fn closure_gradient(r: &[f64], u: &[Vec3]) -> Vec<Vec3> {
    let v = closure_vector(r, u);
    r.iter().map(|ri| v * (2.0 * ri)).collect()
}

const ARMIJO: f64 = 1e-4;

/// The planar triangle with the given side lengths, first edge along `x`
/// and the second in the upper half of the `xy` plane.
pub fn triangle(lengths: LengthVector) -> EdgeFrame {
    let r = lengths.to_f64();
    let (a, b, c) = (r[0], r[1], r[2]);
    let cos = ((c * c - a * a - b * b) / (2.0 * a * b)).clamp(-1.0, 1.0);
    let sin = (1.0 - cos * cos).sqrt();
    let u1 = Vec3::x();
    let u2 = Vec3::new(cos, sin, 0.0);
    let u3 = -(u1 * a + u2 * b) / c;
    EdgeFrame::from_unit(lengths, vec![u1, u2, u3.normalize()])
}

/// Orthonormal frame with first axis `a` and `b` in the span of the first two.
fn frame_of(a: &Vec3, b: &Vec3) -> Option<Matrix3<f64>> {
    let e1 = a.try_normalize(1e-12)?;
    let e3 = e1.cross(b).try_normalize(1e-9)?;
    Some(Matrix3::from_columns(&[e1, e3.cross(&e1), e3]))
}

/// Triangles are rigid: place the exact one, oriented at random or as
/// close to the hints as the shape allows.
fn close_triangle(r: &LengthVector, seed: &Seed) -> EdgeFrame {
    let t = triangle(r.clone());
    let rot = match seed {
        Seed::Rng(s) => random_rotation(*s).into_inner(),
        Seed::Hints { directions, .. } => {
            let here = frame_of(&t.directions()[0], &t.directions()[1]).expect("triangle edges span a plane");
            let there = frame_of(&directions[0], &directions[1])
                .or_else(|| frame_of(&directions[0], &directions[2]))
                .or_else(|| frame_of(&directions[0], &directions[0].cross(&Vec3::x())))
                .or_else(|| frame_of(&directions[0], &directions[0].cross(&Vec3::y())));
            match there {
                Some(m) => m * here.transpose(),
                None => Matrix3::identity(),
            }
        }
    };
    let u: Vec<Vec3> = t.directions().iter().map(|d| rot * d).collect();
    EdgeFrame::from_unit(r.clone(), u)
}

pub fn close(r: &LengthVector, seed: &Seed, opts: &CloseOptions) -> Result<EdgeFrame> {
    r.require_interior()?;
    let n = r.n();
    let rf = r.to_f64();
    let (mut u, jitter_seed) = match seed {
        Seed::Rng(s) => {
            let mut g = rng(*s);
            ((0..n).map(|_| random_unit(&mut g)).collect::<Vec<_>>(), s.wrapping_add(0x9e37_79b9))
        }
        Seed::Hints { directions, jitter } => {
            if directions.len() != n {
                return Err(Error::invalid(format!("{} hints for {n} edges", directions.len())));
            }
            let mut u = Vec::with_capacity(n);
            for (i, d) in directions.iter().enumerate() {
                let norm = d.norm();
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(Error::invalid(format!("hint {} is zero", i + 1)));
                }
                u.push(d / norm);
            }
            (u, *jitter)
        }
    };
    if n == 3 {
        return Ok(close_triangle(r, seed));
    }
    let mut jitter = rng(jitter_seed);
    let scale: f64 = rf.iter().sum();
    let mut eta = 1.0 / scale;
    let mut v = closure_vector(&rf, &u);
    let mut f = v.norm_squared();
    let mut trial = vec![Vec3::zeros(); n];

    for _ in 0..opts.max_iter {
        if f.sqrt() <= opts.tol {
            return Ok(EdgeFrame::from_unit(r.clone(), u));
        }
        // squared norm of the tangential part of the step direction
        let slope: f64 = rf
            .iter()
            .zip(&u)
            .map(|(ri, ui)| {
                let t = v - ui * ui.dot(&v);
                ri * ri * t.norm_squared()
            })
            .sum();
        if slope <= 1e-24 * f {
            // collinear critical point: kick off it
            for ui in u.iter_mut() {
                *ui = (*ui + random_unit(&mut jitter) * 1e-3).normalize();
            }
            v = closure_vector(&rf, &u);
            f = v.norm_squared();
            continue;
        }
        let mut accepted = false;
        for _ in 0..60 {
            for ((t, ui), ri) in trial.iter_mut().zip(&u).zip(&rf) {
                *t = (ui - v * (eta * ri)).normalize();
            }
            let vt = closure_vector(&rf, &trial);
            let ft = vt.norm_squared();
            if ft <= f - ARMIJO * eta * 2.0 * slope {
                std::mem::swap(&mut u, &mut trial);
                v = vt;
                f = ft;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // steps too small to register in floating point
            break;
        }
        eta *= 2.0;
    }
    let residual = f.sqrt();
    if residual <= opts.tol {
        return Ok(EdgeFrame::from_unit(r.clone(), u));
    }
    Err(Error::NonConvergence { residual, iterations: opts.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon_realize::Tolerances;

    #[test]
    fn square_hint_is_already_closed() {
        let r = LengthVector::from_ints(&[1, 1, 1, 1]).unwrap();
        let hints = vec![Vec3::x(), Vec3::y(), -Vec3::x(), -Vec3::y()];
        let f = close(&r, &Seed::Hints { directions: hints, jitter: 0 }, &CloseOptions::default()).unwrap();
        assert_eq!(f.residual(), 0.0);
    }

    #[test]
    fn equilateral_pentagon_closes() {
        let r = LengthVector::equilateral(5).unwrap();
        for seed in 0..20 {
            let f = close(&r, &Seed::Rng(seed), &CloseOptions::default()).unwrap();
            assert!(f.residual() <= 1e-10);
            assert!(f.is_closed(&Tolerances::default()));
            for d in f.directions() {
                assert!((d.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn thin_triangles_close_exactly() {
        let r = LengthVector::parse("1,2,2.999999").unwrap();
        let f = close(&r, &Seed::Rng(3), &CloseOptions::default()).unwrap();
        assert!(f.residual() <= 1e-14);
        let hint = Vec3::new(0.0, 0.6, 0.8);
        let hints = vec![hint, Vec3::z(), -Vec3::y()];
        let f = close(&r, &Seed::Hints { directions: hints, jitter: 0 }, &CloseOptions::default()).unwrap();
        assert!((f.direction(1) - hint).norm() <= 1e-12);
        assert!(f.residual() <= 1e-14);
    }

    #[test]
    fn degenerate_triangle_is_rejected() {
        let r = LengthVector::from_ints(&[1, 1, 3]).unwrap();
        assert!(matches!(close(&r, &Seed::Rng(1), &CloseOptions::default()), Err(Error::Boundary(_))));
        let r = LengthVector::from_ints(&[1, 1, 2]).unwrap();
        assert!(matches!(close(&r, &Seed::Rng(1), &CloseOptions::default()), Err(Error::Boundary(_))));
    }

    #[test]
    fn deterministic_given_seed() {
        let r = LengthVector::parse("1,2,2,3,1.5").unwrap();
        let a = close(&r, &Seed::Rng(42), &CloseOptions::default()).unwrap();
        let b = close(&r, &Seed::Rng(42), &CloseOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn escapes_collinear_start() {
        let r = LengthVector::from_ints(&[1, 1, 1, 2]).unwrap();
        let hints = vec![Vec3::x(), Vec3::x(), -Vec3::x(), -Vec3::x()];
        let f = close(&r, &Seed::Hints { directions: hints, jitter: 5 }, &CloseOptions::default()).unwrap();
        assert!(f.residual() <= 1e-10);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let r = [1.0, 2.0, 1.5, 0.7, 1.1];
        let mut g = rng(9);
        for _ in 0..20 {
            let u: Vec<Vec3> = (0..5).map(|_| random_unit(&mut g)).collect();
            let grad = closure_gradient(&r, &u);
            let h = 1e-6;
            for i in 0..5 {
                for k in 0..3 {
                    let mut up = u.clone();
                    let mut dn = u.clone();
                    up[i][k] += h;
                    dn[i][k] -= h;
                    let fd = (closure_objective(&r, &up) - closure_objective(&r, &dn)) / (2.0 * h);
                    let exact = grad[i][k];
                    let scale = exact.abs().max(1e-3);
                    assert!((fd - exact).abs() / scale < 1e-6, "i={i} k={k}: {fd} vs {exact}");
                }
            }
        }
    }
}
