//! Move a pentagon to another chamber-mate and back; the marked points on
//! the sphere do not change.
use stable_polygons::polygon_realize::{close, moduli_point, transport, CloseOptions, Seed, Tolerances};
use stable_polygons::rational;
use stable_polygons::LengthVector;

fn main() -> stable_polygons::Result<()> {
    let tol = Tolerances::default();
    let r = LengthVector::parse("1,1,1,1,1")?;
    let p = close(&r, &Seed::Rng(11), &CloseOptions::default())?;
    let there = transport(&p, None, &rational::parse("1.2")?)?;
    let back = transport(&there, None, &rational::int(1))?;
    let (a, b, c) = (moduli_point(&p, &tol)?, moduli_point(&there, &tol)?, moduli_point(&back, &tol)?);
    println!("lengths there: {}", there.lengths());
    println!("moduli distance there {:.1e}, round trip {:.1e}", a.distance(&b).unwrap_or(f64::NAN), a.distance(&c).unwrap_or(f64::NAN));
    Ok(())
}
