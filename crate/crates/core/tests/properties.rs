use proptest::prelude::*;

use stable_polygons::cone_atlas::{param_contains, param_sample, theta, ParamPoint};
use stable_polygons::exact_chambers::{
    augment, canonical_walls, epsilon_range, is_favorable_at, relevant_subsets, wall_margin, ChamberSignature,
};
use stable_polygons::polygon_realize::{close, moduli_point, random_rotation, CloseOptions, EdgeFrame, Seed, Tolerances};
use stable_polygons::rational::{self, Q};
use stable_polygons::strata_cohomology::{poincare_wall_crossing, stable_betti, strata};
use stable_polygons::{EpsilonAssignment, LengthVector, Subset};

fn lengths(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = LengthVector> {
    n.prop_flat_map(|n| prop::collection::vec(1i64..=12, n))
        .prop_map(|v| LengthVector::from_ints(&v).unwrap())
        .prop_filter("interior", |r| r.is_interior())
}

fn off_walls(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = LengthVector> {
    lengths(n).prop_filter("off walls", |r| ChamberSignature::of(r).zeros().is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn margins_are_antisymmetric(r in lengths(4..=9), mask in any::<u64>()) {
        let n = r.n();
        let j = Subset::from_mask(mask & ((1u64 << n) - 1));
        prop_assume!(!j.is_empty() && j.len() < n);
        let a = wall_margin(&r, j).unwrap();
        let b = wall_margin(&r, j.complement(n)).unwrap();
        prop_assert_eq!(a, -b);
    }

    #[test]
    fn wall_count(n in 4usize..=10) {
        prop_assert_eq!(canonical_walls(n).len(), (1usize << (n - 1)) - n - 1);
    }

    #[test]
    fn poincare_is_scale_and_permutation_invariant(r in off_walls(4..=8), k in 1i64..5, seed in any::<u64>()) {
        let p = poincare_wall_crossing(&r).unwrap();
        prop_assert!(p.is_palindromic() && p.is_nonnegative());
        prop_assert_eq!(p.coeff(0), 1);
        let scaled = r.scaled(&rational::ratio(k, 3)).unwrap();
        prop_assert_eq!(&poincare_wall_crossing(&scaled).unwrap(), &p);
        let mut v = r.lengths().to_vec();
        let n = v.len();
        v.rotate_left((seed % n as u64) as usize);
        v.swap(0, (seed / 7 % n as u64) as usize);
        prop_assert_eq!(&poincare_wall_crossing(&LengthVector::new(v).unwrap()).unwrap(), &p);
    }

    #[test]
    fn augmented_vectors_are_favorable(r in lengths(4..=8), pick in any::<prop::sample::Index>(), t in 1i64..1000) {
        let rel = relevant_subsets(&r, 2).unwrap();
        let j = rel[pick.index(rel.len())];
        let hi = epsilon_range(&r, j).unwrap().hi;
        let a = augment(&r, j, &(hi * rational::ratio(t, 1000))).unwrap();
        prop_assert!(is_favorable_at(&a, a.n()));
        prop_assert_eq!(a.n(), j.len() + 1);
    }

    #[test]
    fn closure_and_rotation(r in lengths(4..=9), seed in 0u64..1000) {
        let tol = Tolerances::default();
        let f = close(&r, &Seed::Rng(seed), &CloseOptions::default()).unwrap();
        prop_assert!(f.residual() <= 1e-10);
        let rot = random_rotation(seed ^ 0xabc);
        let g = EdgeFrame::new(r.clone(), f.directions().iter().map(|d| rot * d).collect()).unwrap();
        if let (Ok(a), Ok(b)) = (moduli_point(&f, &tol), moduli_point(&g, &tol)) {
            prop_assert!(a.distance(&b).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn strata_closures_contain_open_parts(r in lengths(4..=6)) {
        let rep = strata(&r).unwrap();
        for s in &rep.strata {
            prop_assert!(!s.open_nonempty || s.closed_nonempty);
        }
        for &(a, b) in &rep.edges {
            prop_assert!(rep.strata[b].partition.coarser_or_equal(&rep.strata[a].partition));
        }
    }

    #[test]
    fn theta_is_additive(seeds in (0u64..1000, 0u64..1000)) {
        let a = param_sample(7, seeds.0).unwrap().r;
        let b = param_sample(7, seeds.1).unwrap().r;
        let sum = LengthVector::new(a.lengths().iter().zip(b.lengths()).map(|(x, y)| x + y).collect()).unwrap();
        prop_assert_eq!(&theta(&a).unwrap() + &theta(&b).unwrap(), theta(&sum).unwrap());
    }

    #[test]
    fn parameter_cone_is_convex(n in 5usize..=7, s in (0u64..1000, 0u64..1000)) {
        let p = param_sample(n, s.0).unwrap();
        let q = param_sample(n, s.1).unwrap();
        let half = rational::ratio(1, 2);
        let r = LengthVector::new(p.r.lengths().iter().zip(q.r.lengths()).map(|(x, y)| (x + y) * &half).collect()).unwrap();
        let entries: Vec<(Subset, Q)> = p
            .eps
            .iter()
            .map(|(j, e)| (*j, (e + q.eps.get(*j).unwrap()) * &half))
            .collect();
        let mid = ParamPoint { eps: EpsilonAssignment::new(&r, entries).unwrap(), r };
        prop_assert!(param_contains(&mid));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn stable_betti_second_coefficient(r in off_walls(5..=6)) {
        let p = stable_betti(&r, &EpsilonAssignment::canonical(&r).unwrap()).unwrap();
        let n = r.n() as i64;
        prop_assert_eq!(p.coeff(1), (1 << (n - 1)) - (n * n - n + 2) / 2);
        prop_assert!(p.is_palindromic());
    }
}
