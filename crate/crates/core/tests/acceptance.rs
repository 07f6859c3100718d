//! The acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stable_polygons::cone_atlas::{dimension_check, param_dim};
use stable_polygons::exact_chambers::{
    augment, default_base_point, epsilon_range, favorable_representative, is_favorable_at,
    relevant_subsets, ChamberSignature,
};
use stable_polygons::partition::{all_partitions, Partition};
use stable_polygons::polygon_realize::{
    close, degeneration_path, diagonal, frame_in_stratum, merged_lengths, moduli_point, parallel_classes, transport,
    CloseOptions, EdgeFrame, Seed, Tolerances,
};
use stable_polygons::rational::{self, Q};
use stable_polygons::stable_core::{stabilize, to_stable_curve, Filler};
use stable_polygons::strata_cohomology::{
    ih_poincare_center, poincare_center, poincare_wall_crossing, stable_betti, strata, PoincarePoly,
};
use stable_polygons::{EpsilonAssignment, LengthVector};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer lengths in `1..=hi` until the vector is interior and, if asked,
/// off every wall.
fn random_r(g: &mut ChaCha8Rng, n: usize, hi: i64, off_walls: bool) -> LengthVector {
    loop {
        let v: Vec<i64> = (0..n).map(|_| g.gen_range(1..=hi)).collect();
        let r = LengthVector::from_ints(&v).unwrap();
        if r.is_interior() && (!off_walls || ChamberSignature::of(&r).zeros().is_empty()) {
            return r;
        }
    }
}

fn stable(r: &LengthVector) -> stable_polygons::Result<PoincarePoly> {
    stable_betti(r, &EpsilonAssignment::canonical(r)?)
}

fn b2(n: usize) -> i64 {
    (1i64 << (n - 1)) - ((n * n - n + 2) / 2) as i64
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (n, expect) in [(5, Some(vec![1, 5, 1])), (7, Some(vec![1, 7, 22, 7, 1])), (9, None)] {
        let t = Instant::now();
        let wc = poincare_wall_crossing(&LengthVector::equilateral(n).unwrap()).unwrap();
        let dt = t.elapsed();
        let closed = poincare_center(n).unwrap();
        let ok = wc == closed && expect.as_ref().is_none_or(|e| wc.coeffs() == e.as_slice()) && dt < Duration::from_secs(10);
        pass &= ok;
        notes.push(format!("n={n} {:?} in {:.2?}", wc.coeffs(), dt));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let p6 = ih_poincare_center(6).unwrap();
    let p8 = ih_poincare_center(8).unwrap();
    let dt = t.elapsed();
    let pass = p6.coeffs() == [1, 6, 6, 1] && p8.is_palindromic() && p8.eval(1) % 2 == 0 && dt < Duration::from_secs(1);
    outcome(pass, format!("IH(6) {:?}, IH(8) {:?} with P(1) = {}, {:.2?}", p6.coeffs(), p8.coeffs(), p8.eval(1), dt))
}

fn criterion_3() -> Outcome {
    let mut pass = stable(&LengthVector::parse("1,1,1,1.5").unwrap()).unwrap().coeffs() == [1, 1];
    pass &= stable(&LengthVector::equilateral(5).unwrap()).unwrap().coeffs() == [1, 5, 1];
    let mut notes = Vec::new();
    for n in 5..=8 {
        let r = favorable_representative(n, n);
        let t = Instant::now();
        let p = stable(&r).unwrap();
        let dt = t.elapsed();
        let ok = p.coeff(1) == b2(n) && p.is_palindromic() && (n < 8 || dt < Duration::from_secs(60));
        pass &= ok;
        notes.push(format!("n={n} {:?} ({:.2?})", p.coeffs(), dt));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let mut g = rng(4);
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 5..=7 {
        let mut chambers = vec![favorable_representative(n, n), default_base_point(n)];
        chambers.push(random_r(&mut g, n, 9, true));
        chambers.push(random_r(&mut g, n, 9, true));
        let polys: Vec<PoincarePoly> = chambers.iter().map(|r| stable(r).unwrap()).collect();
        let ok = polys.windows(2).all(|w| w[0] == w[1]);
        pass &= ok;
        notes.push(format!("n={n} {:?}{}", polys[0].coeffs(), if ok { "" } else { " MISMATCH" }));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut g = rng(5);
    let shrink = rational::int(1) - rational::ratio(1, 1_000_000);
    let mut bad = 0;
    for _ in 0..50 {
        let n = g.gen_range(4..=9);
        let r = random_r(&mut g, n, 12, false);
        let j = *relevant_subsets(&r, 2).unwrap().choose(&mut g).unwrap();
        let hi = epsilon_range(&r, j).unwrap().hi;
        let inside = augment(&r, j, &(&hi * &shrink));
        let at = augment(&r, j, &hi);
        let ok = matches!(&inside, Ok(a) if is_favorable_at(a, a.n())) && at.is_err();
        bad += usize::from(!ok);
    }
    outcome(bad == 0, format!("{bad} of 50 (r, J) misbehave at the upper end of the range"))
}

fn criterion_6() -> Outcome {
    let mut g = rng(6);
    let opts = CloseOptions::default();
    let mut times = Vec::new();
    let mut failures = 0;
    let mut worst = 0.0f64;
    for n in 3..=12 {
        for _ in 0..10 {
            let r = random_r(&mut g, n, 10, false);
            for seed in 0..100 {
                let t = Instant::now();
                let res = close(&r, &Seed::Rng(seed), &opts);
                times.push(t.elapsed());
                match res {
                    Ok(f) if f.residual() <= 1e-10 => worst = worst.max(f.residual()),
                    _ => failures += 1,
                }
            }
        }
    }
    times.sort();
    let median = times[times.len() / 2];
    outcome(
        failures == 0 && median < Duration::from_millis(50),
        format!("{} closures, {failures} failed, worst residual {worst:.1e}, median {median:.2?}", times.len()),
    )
}

/// A last length inside the chamber of `r`, within a few percent of the
/// current one.
fn chamber_mate(r: &LengthVector, g: &mut ChaCha8Rng) -> Option<Q> {
    let n = r.n();
    let last = r.get(n).clone();
    let sig = ChamberSignature::of(r);
    for k in 1..40 {
        let step = rational::ratio(g.gen_range(1..100), 100 * (1 << k.min(30)));
        let sign = if g.gen_bool(0.5) { 1 } else { -1 };
        let cand = &last * (rational::int(1) + rational::int(sign) * step);
        let mut v = r.lengths().to_vec();
        v[n - 1] = cand.clone();
        let s = LengthVector::new(v).ok()?;
        if s.is_interior() && ChamberSignature::of(&s).same_cell(&sig) && ChamberSignature::of(&s).zeros().is_empty() {
            return Some(cand);
        }
    }
    None
}

fn criterion_7() -> Outcome {
    let mut g = rng(7);
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut bad = 0;
    let mut done = 0;
    while done < 100 {
        let n = if done % 2 == 0 { 4 } else { 5 };
        let r = random_r(&mut g, n, 10, true);
        let Some(new_last) = chamber_mate(&r, &mut g) else { continue };
        let p = close(&r, &Seed::Rng(done), &CloseOptions::default()).unwrap();
        let there = transport(&p, None, &new_last).unwrap();
        let back = transport(&there, None, r.get(n)).unwrap();
        match (moduli_point(&p, &tol), moduli_point(&back, &tol)) {
            (Ok(a), Ok(b)) => {
                let d = a.distance(&b).unwrap_or(f64::INFINITY);
                worst = worst.max(d);
                bad += usize::from(d > 1e-8);
            }
            _ => bad += 1,
        }
        done += 1;
    }
    outcome(bad == 0, format!("{bad} of 100 round trips off by more than 1e-8, worst {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let tol = Tolerances { angle: 1e-8, ..Tolerances::default() };
    let r = LengthVector::parse("1,1,1,1,2").unwrap();
    let line_gons = ChamberSignature::of(&r).zeros();
    let mut violations = 0;
    let mut sampled = 0;
    for w in &line_gons {
        let j = w.subset();
        let sum = rational::to_f64(&r.sum_over(j));
        let low = sum - 2.0 * rational::to_f64(&r.min_over(j).unwrap());
        let mut frames: Vec<EdgeFrame> = Vec::new();
        // approach the center along degenerating families
        for seed in 0..5u64 {
            let path = degeneration_path(&r, j, 21, seed).unwrap();
            frames.extend(path[1..path.len() - 1].iter().cloned());
        }
        let mut seed = 1000u64;
        while frames.len() < 200 {
            let f = close(&r, &Seed::Rng(seed), &CloseOptions::default()).unwrap();
            seed += 1;
            let d = diagonal(&f, j).unwrap().1;
            if d > low && d < sum {
                frames.push(f);
            }
        }
        for f in frames.iter().take(200) {
            let d = diagonal(f, j).unwrap().1;
            if !(d > low && d < sum) {
                continue;
            }
            sampled += 1;
            if parallel_classes(f, &tol).len() <= 2 {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && line_gons.len() == 4,
        format!("{} line gons, {sampled} in-window frames, {violations} line gons among them", line_gons.len()),
    )
}

fn criterion_9() -> Outcome {
    let mut g = rng(9);
    let tol = Tolerances::default();
    let mut bad = 0;
    for k in 0..200u64 {
        let n = g.gen_range(4..=8);
        let i = g.gen_range(1..=n);
        let r = loop {
            let r = random_r(&mut g, n, 10, true);
            if is_favorable_at(&r, i) {
                break r;
            }
            // push r_i up until edge i dominates
            let mut v = r.lengths().to_vec();
            let others: Q = v.iter().enumerate().filter(|(m, _)| *m != i - 1).map(|(_, x)| x.clone()).sum();
            v[i - 1] = others - rational::ratio(g.gen_range(1..10), 10);
            if let Ok(s) = LengthVector::new(v) {
                if s.is_interior() && ChamberSignature::of(&s).zeros().is_empty() && is_favorable_at(&s, i) {
                    break s;
                }
            }
        };
        let f = close(&r, &Seed::Rng(k), &CloseOptions::default()).unwrap();
        let classes = parallel_classes(&f, &tol);
        if classes.iter().any(|c| c.contains(i) && c.len() >= 2) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} of 200 frames put the favorable edge in a parallel class"))
}

fn criterion_10() -> Outcome {
    let mut g = rng(10);
    let tol = Tolerances::default();
    let partitions = all_partitions(6);
    let mut bad = 0;
    let mut bubbled = 0;
    let mut made = 0;
    while made < 100 {
        let r = random_r(&mut g, 6, 10, true);
        let alpha: &Partition = partitions.choose(&mut g).unwrap();
        let x = merged_lengths(&r, alpha);
        let l: Q = x.iter().sum();
        if x.len() < 3 || x.iter().any(|v| rational::int(2) * v >= l) {
            continue;
        }
        let f = frame_in_stratum(&r, alpha, made, &CloseOptions::default()).unwrap();
        let sp = stabilize(&f, &EpsilonAssignment::canonical(&r).unwrap(), &Filler::Rng(made), &tol).unwrap();
        bubbled += usize::from(sp.bubble_count() > 0);
        let ok = match to_stable_curve(&sp, &tol) {
            Ok(c) => c.is_tree() && c.min_special_points() >= 3,
            Err(_) => false,
        };
        bad += usize::from(!ok);
        made += 1;
    }
    let rep = strata(&LengthVector::parse("1,1,1,1,3.5").unwrap()).unwrap();
    let (points, lines) = (rep.count_open(0, true), rep.count_open(1, true));
    outcome(
        bad == 0 && points == 4 && lines == 6,
        format!("{bad} of 100 curves ({bubbled} with bubbles) not stable trees; Kapranov strata {points} points, {lines} lines"),
    )
}

fn criterion_11() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 5..=9 {
        let (_, check) = dimension_check(n, 200, 11).unwrap();
        pass &= check.violations == 0 && check.param_dim == param_dim(n);
        notes.push(format!("n={n} dim {} violations {}", check.param_dim, check.violations));
    }
    outcome(pass, notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("closed-form Poincaré agreement", criterion_1),
        ("even-case closed form", criterion_2),
        ("stable Betti numbers", criterion_3),
        ("chamber independence", criterion_4),
        ("epsilon legality boundary", criterion_5),
        ("moment-map closure", criterion_6),
        ("canonical-isomorphism round trip", criterion_7),
        ("line-gon window", criterion_8),
        ("favorable edge never parallel", criterion_9),
        ("dual curve combinatorics", criterion_10),
        ("cone dimension identity", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} {:>2} {name}: {} [{:.1?}]", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail, t.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
