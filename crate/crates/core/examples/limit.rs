//! A family of hexagons in which edges 1, 2, 3 straighten out, and the
//! bubble it converges to.
use stable_polygons::polygon_realize::{degeneration_path, diagonal, incidence, Tolerances};
use stable_polygons::rational;
use stable_polygons::stable_core::limit;
use stable_polygons::{LengthVector, Subset};

fn main() -> stable_polygons::Result<()> {
    let tol = Tolerances::default();
    let r = LengthVector::parse("1,1,1,1.2,1.3,1.4")?;
    let j = Subset::from_labels([1, 2, 3])?;
    let path = degeneration_path(&r, j, 10, 0)?;
    for f in &path {
        println!("|d_J| = {:.10}", diagonal(f, j)?.1);
    }
    let family = &path[..path.len() - 1];
    let bubble = limit(family, j, &rational::int(1), &tol)?;
    println!("bubble lengths {}", bubble.lengths());
    let last = family.last().expect("non-empty");
    println!("incidence with the last member: {}", incidence(last, &bubble, j, &tol)?.holds);
    Ok(())
}
