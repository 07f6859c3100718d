//! Poincaré polynomials three ways.
use stable_polygons::exact_chambers::favorable_representative;
use stable_polygons::strata_cohomology::{ih_poincare_center, poincare_center, poincare_wall_crossing, stable_betti};
use stable_polygons::{EpsilonAssignment, LengthVector};

fn main() -> stable_polygons::Result<()> {
    for n in [5, 7, 9] {
        let r = LengthVector::equilateral(n)?;
        println!("n = {n}: wall crossing {}, closed form {}", poincare_wall_crossing(&r)?, poincare_center(n)?);
    }
    for n in [6, 8] {
        println!("n = {n}: intersection cohomology {}", ih_poincare_center(n)?);
    }
    for n in 4..=7 {
        let r = favorable_representative(n, n);
        println!("stable polygons, n = {n}: {}", stable_betti(&r, &EpsilonAssignment::canonical(&r)?)?);
    }
    Ok(())
}
