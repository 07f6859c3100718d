//! Strata and blowup order in the Kapranov chamber.
use stable_polygons::strata_cohomology::{schedule, strata};
use stable_polygons::LengthVector;

fn main() -> stable_polygons::Result<()> {
    let r = LengthVector::parse("1,1,1,1,3.5")?;
    let rep = strata(&r)?;
    println!("point strata {}, line strata {}", rep.count_open(0, true), rep.count_open(1, true));
    for s in rep.proper_open() {
        println!("  {} (dim {})", s.partition, s.dim);
    }
    print!("{}", schedule(&r, None)?.to_dot());
    Ok(())
}
