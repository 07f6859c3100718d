//! The canonical isomorphisms between level sets of the last side length,
//! and the incidence relation built on them.
//!
//! Changing the last length of a polygon while keeping its class in
//! `(P¹)ⁿ // PGL(2)` amounts to finding the Möbius transformation that
//! balances the same marked points for the new weights. We search for it in
//! the unit ball model: `g_w` is the hyperbolic translation taking `w` to the
//! origin, and Newton's method on `w` drives `Σ r′_i g_w(u_i)` to zero.

use nalgebra::{Matrix3, Rotation3, Unit};
use serde::Serialize;

use super::{
    close, closure_vector, diagonal, exact, moduli_point, random_unit, rng, CloseOptions, EdgeFrame, Predicate,
    Seed, Tolerances, Vec3,
};
use crate::error::{Error, Result};
use crate::exact_chambers::{is_relevant, same_chamber, LengthVector};
use crate::rational::{self, Q};
use crate::subset::Subset;

const BALANCE_TOL: f64 = 1e-10;

/// `g_w(x)` for `|x| = 1`, `|w| < 1`.
fn translate(w: &Vec3, x: &Vec3) -> Vec3 {
    let d = x - w;
    let d2 = d.norm_squared();
    ((1.0 - w.norm_squared()) * d - d2 * w) / d2
}

/// Moves the points `directions` by a Möbius transformation until they
/// balance with weights `weights`.
pub fn rebalance(directions: &[Vec3], weights: &LengthVector) -> Result<EdgeFrame> {
    if directions.len() != weights.n() {
        return Err(Error::invalid(format!("{} directions for {} weights", directions.len(), weights.n())));
    }
    weights.require_interior()?;
    let r = weights.to_f64();
    let total: f64 = r.iter().sum();
    let mut u: Vec<Vec3> = directions.iter().map(|d| d.normalize()).collect();
    let mut v = closure_vector(&r, &u);
    let mut res = v.norm();
    let mut trial = u.clone();
    for _ in 0..200 {
        if res <= BALANCE_TOL {
            return Ok(EdgeFrame::from_unit(weights.clone(), u));
        }
        let mut h = Matrix3::identity() * total;
        for (ri, ui) in r.iter().zip(&u) {
            h -= ui * ui.transpose() * *ri;
        }
        let step = h.lu().solve(&(v * 0.5)).ok_or(Error::NoModuli)?;
        let mut t = 1.0;
        loop {
            let w = step * t;
            if w.norm() < 1.0 {
                for (ti, ui) in trial.iter_mut().zip(&u) {
                    *ti = translate(&w, ui).normalize();
                }
                let vt = closure_vector(&r, &trial);
                if vt.norm() < res {
                    std::mem::swap(&mut u, &mut trial);
                    v = vt;
                    res = v.norm();
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-14 {
                return Err(Error::NonConvergence { residual: res, iterations: 0 });
            }
        }
    }
    if res <= BALANCE_TOL {
        Ok(EdgeFrame::from_unit(weights.clone(), u))
    } else {
        Err(Error::NonConvergence { residual: res, iterations: 200 })
    }
}

/// `Q_J`: the edges `e_j`, `j ∈ J`, closed up by the diagonal `d_J`. The
/// last length is the exact value of the computed `|d_J|`.
pub fn sub_polygon(frame: &EdgeFrame, j: Subset) -> Result<EdgeFrame> {
    if j.len() < 2 {
        return Err(Error::invalid(format!("{j} needs at least two edges")));
    }
    let (d, len) = diagonal(frame, j)?;
    if len == 0.0 {
        return Err(Error::Boundary(format!("the edges in {j} close up on their own")));
    }
    let mut lengths: Vec<Q> = j.iter().map(|l| frame.lengths().get(l).clone()).collect();
    lengths.push(exact(len));
    let mut u: Vec<Vec3> = j.iter().map(|l| frame.direction(l)).collect();
    u.push(d / len);
    Ok(EdgeFrame::from_unit(LengthVector::new(lengths)?, u))
}

/// The canonical isomorphism replacing the last length of `frame` (or of
/// its sub-polygon `Q_J` when `j` is given) by `new_last`.
///
/// Source and target must lie in the same chamber. At the maximal value the
/// result is the line gon with every other edge opposite the last one.
pub fn transport(frame: &EdgeFrame, j: Option<Subset>, new_last: &Q) -> Result<EdgeFrame> {
    let source = match j {
        None => frame.clone(),
        Some(j) => sub_polygon(frame, j)?,
    };
    let n = source.n();
    let others: Q = source.lengths().lengths()[..n - 1].iter().sum();
    if !rational::sign(new_last).is_positive() {
        return Err(Error::invalid(format!("new last length {} is not positive", rational::format(new_last))));
    }
    if new_last > &others {
        return Err(Error::Boundary(format!(
            "last length {} exceeds the sum {} of the others",
            rational::format(new_last),
            rational::format(&others)
        )));
    }
    let mut target = source.lengths().lengths().to_vec();
    target[n - 1] = new_last.clone();
    let target = LengthVector::new(target)?;
    let a = source.direction(n);
    if new_last == &others {
        let mut u = vec![-a; n];
        u[n - 1] = a;
        return Ok(EdgeFrame::from_unit(target, u));
    }
    if !same_chamber(source.lengths(), &target) {
        return Err(Error::invalid(format!(
            "{} and {} lie in different chambers",
            source.lengths(),
            target
        )));
    }
    rebalance(source.directions(), &target)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidenceReport {
    pub holds: bool,
    /// `|d_J(P)|`.
    pub diagonal: f64,
    /// `Σ_J r − 2 min_J r < |d_J| <= Σ_J r`, margin to the nearer end.
    pub window: Predicate,
    /// `|d_J| = Σ_J r` up to the saturation slack.
    pub collapse: bool,
    /// Chordal distance between the moduli points of `Q_J(P)` and `Q`.
    pub moduli_distance: Option<f64>,
}

/// Whether `q`, a frame over `(r_J, Σ_J r − ε)`, is incident to `p`.
pub fn incidence(p: &EdgeFrame, q: &EdgeFrame, j: Subset, tol: &Tolerances) -> Result<IncidenceReport> {
    let n = p.n();
    if j.len() < 2 || !j.fits(n) || j.len() >= n {
        return Err(Error::invalid(format!("{j} is not a proper subset of at least two edges of {{1..{n}}}")));
    }
    let r = p.lengths();
    if q.n() != j.len() + 1 {
        return Err(Error::invalid(format!("bubble has {} edges, expected {}", q.n(), j.len() + 1)));
    }
    if j.iter().enumerate().any(|(k, l)| q.lengths().get(k + 1) != r.get(l)) {
        return Err(Error::invalid(format!("bubble lengths do not start with r_{j}")));
    }
    let sum = r.sum_over(j);
    let lo = &sum - rational::int(2) * r.min_over(j).expect("non-empty");
    let last = q.lengths().get(q.n());
    if !(last > &lo && last < &sum) {
        return Err(Error::invalid(format!("bubble last length {} is outside the window", rational::format(last))));
    }

    let (_, len) = diagonal(p, j)?;
    let (lo, hi) = (rational::to_f64(&lo), rational::to_f64(&sum));
    let slack = tol.saturation_slack(hi);
    let inside = len > lo && len <= hi + slack;
    let window = Predicate { holds: inside, margin: (len - lo).min(hi + slack - len) };
    let collapse = len >= hi - slack;
    let mut report = IncidenceReport { holds: false, diagonal: len, window, collapse, moduli_distance: None };
    if !inside {
        return Ok(report);
    }
    if collapse {
        report.holds = true;
        return Ok(report);
    }
    let qj = sub_polygon(p, j)?;
    if let (Ok(a), Ok(b)) = (moduli_point(&qj, tol), moduli_point(q, tol)) {
        report.moduli_distance = a.distance(&b);
        report.holds = report.moduli_distance.is_some_and(|d| d <= tol.pgl);
    }
    Ok(report)
}

/// Rotation taking `from` to `to`, choosing a half turn when they are opposite.
fn align(from: &Vec3, to: &Vec3) -> Rotation3<f64> {
    Rotation3::rotation_between(from, to).unwrap_or_else(|| {
        let axis = if from.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let perp = Unit::new_normalize(from.cross(&axis));
        Rotation3::from_axis_angle(&perp, std::f64::consts::PI)
    })
}

/// Joins `Q_J` and `Q_{J^c}`, both with last length `ℓ`, along their last
/// edges into a frame over `r` with `|d_J| = ℓ`.
fn glue(n: usize, j: Subset, qj: &EdgeFrame, qc: &EdgeFrame, twist: &Rotation3<f64>, lengths: &LengthVector) -> EdgeFrame {
    let a = qj.direction(qj.n());
    let b = qc.direction(qc.n());
    let rot = align(&b, &-a);
    // spin the complement about the shared axis by a fixed amount
    let spin = Rotation3::from_axis_angle(&Unit::new_normalize(a), twist.angle());
    let mut u = vec![Vec3::zeros(); n];
    for (k, l) in j.iter().enumerate() {
        u[l - 1] = qj.directions()[k];
    }
    for (k, l) in j.complement(n).iter().enumerate() {
        u[l - 1] = (spin * (rot * qc.directions()[k])).normalize();
    }
    EdgeFrame::from_unit(lengths.clone(), u)
}

fn with_last(r: &LengthVector, s: Subset, last: &Q) -> Result<LengthVector> {
    let mut v: Vec<Q> = s.iter().map(|l| r.get(l).clone()).collect();
    v.push(last.clone());
    LengthVector::new(v)
}

/// A family of closed frames over `r` whose `J` edges fold together: the
/// `J` side keeps its moduli while `|d_J|` climbs geometrically toward
/// `Σ_J r`. The last entry is the degenerate frame at `|d_J| = Σ_J r`.
pub fn degeneration_path(r: &LengthVector, j: Subset, steps: usize, seed: u64) -> Result<Vec<EdgeFrame>> {
    r.require_interior()?;
    if !is_relevant(r, j) {
        return Err(Error::invalid(format!("{j} is not relevant for r = {r}")));
    }
    if steps < 2 {
        return Err(Error::invalid("a degeneration path needs at least two steps"));
    }
    let n = r.n();
    let jc = j.complement(n);
    let sum = r.sum_over(j);
    let sum_c = r.sum_over(jc);
    let two = rational::int(2);
    let low_c = jc.iter().map(|k| &two * r.get(k) - &sum_c).max().expect("non-empty");
    let delta = r.min_over(j).expect("non-empty").min((&sum - low_c) / &two);

    let opts = CloseOptions::default();
    let mut g = rng(seed);
    let twist = Rotation3::from_axis_angle(&Unit::new_normalize(random_unit(&mut g)), 1.0);
    let ell0 = &sum - &delta;
    let q0 = close(&with_last(r, j, &ell0)?, &Seed::Rng(seed), &opts)?;
    let mut prev_c: Option<Vec<Vec3>> = None;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let ell = if k == steps { sum.clone() } else { &sum - &delta / rational::int(1i64 << k.min(62)) };
        let qj = if k == 0 { q0.clone() } else { transport(&q0, None, &ell)? };
        let rc = with_last(r, jc, &ell)?;
        let qc = if ell == sum_c {
            let mut u = vec![-Vec3::z(); rc.n()];
            u[rc.n() - 1] = Vec3::z();
            EdgeFrame::from_unit(rc, u)
        } else {
            let s = match prev_c.take() {
                Some(directions) => Seed::Hints { directions, jitter: seed },
                None => Seed::Rng(seed.wrapping_add(1)),
            };
            close(&rc, &s, &opts)?
        };
        prev_c = Some(qc.directions().to_vec());
        out.push(glue(n, j, &qj, &qc, &twist, r));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon_realize::{parallel_classes, pgl2_equivalent};

    fn set(l: &[usize]) -> Subset {
        Subset::from_labels(l.iter().copied()).unwrap()
    }

    #[test]
    fn translation_keeps_sphere_and_centers_w() {
        let w = Vec3::new(0.3, -0.2, 0.5);
        let mut g = rng(1);
        for _ in 0..20 {
            let x = random_unit(&mut g);
            assert!((translate(&w, &x).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrilateral_transport_preserves_moduli() {
        let tol = Tolerances::default();
        let r = LengthVector::parse("1,1,1,1.5").unwrap();
        let f = close(&r, &Seed::Rng(2), &CloseOptions::default()).unwrap();
        let g = transport(&f, None, &rational::parse("1.2").unwrap()).unwrap();
        assert!(g.residual() <= 1e-10);
        assert_eq!(g.lengths(), &LengthVector::parse("1,1,1,1.2").unwrap());
        let (a, b) = (moduli_point(&f, &tol).unwrap(), moduli_point(&g, &tol).unwrap());
        assert!(pgl2_equivalent(&a, &b, 1e-8), "{:?}", a.distance(&b));
        let back = transport(&g, None, &rational::parse("1.5").unwrap()).unwrap();
        assert!(pgl2_equivalent(&a, &moduli_point(&back, &tol).unwrap(), 1e-8));
    }

    #[test]
    fn maximal_length_gives_line_gon() {
        let r = LengthVector::parse("1,1,1,1.5").unwrap();
        let f = close(&r, &Seed::Rng(5), &CloseOptions::default()).unwrap();
        let g = transport(&f, None, &rational::int(3)).unwrap();
        assert!(g.is_line_gon(&Tolerances::default()).holds);
        assert!(g.residual() <= 1e-12);
        assert!(matches!(transport(&f, None, &rational::int(4)), Err(Error::Boundary(_))));
    }

    #[test]
    fn chamber_change_is_refused() {
        // (1,1,1,1.5) and (1,1,1,0.5) sit on opposite sides of W_{1,2}
        let r = LengthVector::parse("1,1,1,1.5").unwrap();
        let f = close(&r, &Seed::Rng(5), &CloseOptions::default()).unwrap();
        assert!(matches!(transport(&f, None, &rational::parse("0.5").unwrap()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn incidence_of_transported_sub_polygon() {
        let tol = Tolerances::default();
        let r = LengthVector::equilateral(6).unwrap();
        let j = set(&[1, 2, 3]);
        let path = degeneration_path(&r, j, 6, 3).unwrap();
        let p = &path[path.len() - 2];
        let q = transport(p, Some(j), &rational::parse("2.5").unwrap()).unwrap();
        assert!(incidence(p, &q, j, &tol).unwrap().holds);
        // the degenerate end is incident to anything
        assert!(incidence(path.last().unwrap(), &q, j, &tol).unwrap().collapse);
        assert!(incidence(path.last().unwrap(), &q, j, &tol).unwrap().holds);
        // a generic closure below the window
        let low = close(&r, &Seed::Rng(1), &CloseOptions::default()).unwrap();
        let (_, len) = diagonal(&low, j).unwrap();
        if len <= 1.0 {
            assert!(!incidence(&low, &q, j, &tol).unwrap().holds);
        }
    }

    #[test]
    fn incidence_rejects_malformed_input() {
        let tol = Tolerances::default();
        let r = LengthVector::equilateral(5).unwrap();
        let p = close(&r, &Seed::Rng(1), &CloseOptions::default()).unwrap();
        let q = close(&LengthVector::parse("1,1,1.5").unwrap(), &Seed::Rng(1), &CloseOptions::default()).unwrap();
        assert!(incidence(&p, &q, set(&[1]), &tol).is_err());
        assert!(incidence(&p, &q, set(&[1, 2, 3]), &tol).is_err());
        assert!(incidence(&p, &q, set(&[1, 2]), &tol).is_ok());
    }

    #[test]
    fn path_climbs_and_collapses() {
        let tol = Tolerances::default();
        let r = LengthVector::parse("1,1,1,1,3.5").unwrap();
        let j = set(&[1, 2]);
        let path = degeneration_path(&r, j, 8, 9).unwrap();
        let lens: Vec<f64> = path.iter().map(|f| diagonal(f, j).unwrap().1).collect();
        assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
        for f in &path {
            assert!(f.residual() <= 1e-10);
        }
        let end = path.last().unwrap();
        assert!((lens[lens.len() - 1] - 2.0).abs() < 1e-12);
        assert!(parallel_classes(end, &tol).contains(&j));
    }
}
