use crate::error::{Error, Result};
use crate::exact_chambers::{augment, LengthVector};
use crate::polygon_realize::{diagonal, transport, EdgeFrame, Tolerances};
use crate::rational::{self, Q};
use crate::subset::Subset;

/// The `J`-bubble of the limit of a family whose `J` edges fold together.
///
/// The frames at the end of `family` must have `|d_J|` inside the window
/// `(Σ_J r − 2 min_J r, Σ_J r]` and strictly increasing there. The last of
/// them that is not yet collapsed is cut down to `Q_J` and carried to last
/// length `Σ_J r − ε`.
pub fn limit(family: &[EdgeFrame], j: Subset, eps: &Q, tol: &Tolerances) -> Result<EdgeFrame> {
    let first = family.first().ok_or_else(|| Error::NoLimit("empty family".into()))?;
    let r: &LengthVector = first.lengths();
    if family.iter().any(|f| f.lengths() != r) {
        return Err(Error::invalid("family frames have different length vectors"));
    }
    let target = augment(r, j, eps)?;
    let sum = r.sum_over(j);
    let lo = rational::to_f64(&(&sum - rational::int(2) * r.min_over(j).expect("non-empty")));
    let hi = rational::to_f64(&sum);
    let slack = tol.saturation_slack(hi);

    let lens: Vec<f64> = family.iter().map(|f| diagonal(f, j).map(|d| d.1)).collect::<Result<_>>()?;
    let start = lens.iter().rposition(|&d| d <= lo).map_or(0, |p| p + 1);
    let tail = &lens[start..];
    if tail.len() < 2 {
        return Err(Error::NoLimit(format!("the family does not settle inside the window of {j}")));
    }
    if tail.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NoLimit(format!("|d_{j}| does not increase toward Σ_J r")));
    }
    let last = (start..family.len())
        .rev()
        .find(|&i| lens[i] < hi - slack)
        .ok_or_else(|| Error::NoLimit(format!("every frame in the window is already collapsed at {j}")))?;
    transport(&family[last], Some(j), target.lengths().last().expect("non-empty"))
}
