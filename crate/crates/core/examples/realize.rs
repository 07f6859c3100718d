//! Close random polygons and a polygon with prescribed parallel edges.
use stable_polygons::partition::Partition;
use stable_polygons::polygon_realize::{close, frame_in_stratum, moduli_point, parallel_classes, CloseOptions, Seed, Tolerances};
use stable_polygons::{LengthVector, Subset};

fn main() -> stable_polygons::Result<()> {
    let tol = Tolerances::default();
    let r = LengthVector::parse("1,2,3,4,5")?;
    for seed in 0..3 {
        let f = close(&r, &Seed::Rng(seed), &CloseOptions::default())?;
        let m = moduli_point(&f, &tol)?;
        let pts: Vec<String> = m
            .points()
            .iter()
            .map(|p| p.value().map_or("inf".to_string(), |z| format!("{:.4}{:+.4}i", z.re, z.im)))
            .collect();
        println!("seed {seed}: residual {:.1e}, marked points {}", f.residual(), pts.join(", "));
    }

    let r = LengthVector::parse("1,1,1,1.2,1.3,1.4")?;
    let alpha = Partition::merging(6, &[Subset::from_labels([1, 2, 3])?])?;
    let f = frame_in_stratum(&r, &alpha, 4, &CloseOptions::default())?;
    println!("stratum {alpha}: classes {:?}", parallel_classes(&f, &tol));
    Ok(())
}
