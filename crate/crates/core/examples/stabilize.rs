//! Bubble a hexagon whose first three edges are parallel and read off its
//! stable curve.
use stable_polygons::partition::Partition;
use stable_polygons::polygon_realize::{frame_in_stratum, CloseOptions, Tolerances};
use stable_polygons::stable_core::{stabilize, to_stable_curve, validate, Filler};
use stable_polygons::{EpsilonAssignment, LengthVector, Subset};

fn main() -> stable_polygons::Result<()> {
    let tol = Tolerances::default();
    let r = LengthVector::parse("1,1,1,1.2,1.3,1.4")?;
    let alpha = Partition::merging(6, &[Subset::from_labels([1, 2, 3])?])?;
    let f = frame_in_stratum(&r, &alpha, 4, &CloseOptions::default())?;
    let sp = stabilize(&f, &EpsilonAssignment::canonical(&r)?, &Filler::Rng(2), &tol)?;
    println!("bubbles: {:?}", sp.bubble_subsets());
    println!("valid: {}", validate(&sp, &tol)?.valid);
    let curve = to_stable_curve(&sp, &tol)?;
    print!("{}", curve.to_dot());
    Ok(())
}
