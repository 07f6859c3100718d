//! Coordinates on the parameter cone and its dimension count.
use stable_polygons::cone_atlas::{dimension_check, param_dim, theta};
use stable_polygons::rational;
use stable_polygons::LengthVector;

fn main() -> stable_polygons::Result<()> {
    let t = theta(&LengthVector::parse("1,1,1,1,1")?)?;
    let coords: Vec<String> = t.coords().iter().map(rational::format).collect();
    println!("theta(1,1,1,1,1) = ({})", coords.join(", "));
    for n in 5..=9 {
        let (_, check) = dimension_check(n, 20, 0)?;
        println!("n = {n}: dim {}, violations {}/{}", param_dim(n), check.violations, check.samples);
    }
    Ok(())
}
