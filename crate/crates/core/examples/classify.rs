//! Chambers of a few length vectors.
use stable_polygons::exact_chambers::{classify, relevant_subsets};
use stable_polygons::LengthVector;

fn main() -> stable_polygons::Result<()> {
    for text in ["1,1,1,1,1", "1,1,1,1,3.5", "1,1,1,1,2", "1,2,3,4,5"] {
        let r = LengthVector::parse(text)?;
        let c = classify(&r)?;
        println!(
            "r = ({text}): smooth {}, central {}, favorable at {:?}, {} line gons, {} relevant sets",
            c.smooth,
            c.central,
            c.favorable_index,
            c.line_gons.len(),
            relevant_subsets(&r, 2)?.len()
        );
    }
    Ok(())
}
