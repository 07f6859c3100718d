//! Walls and chambers of the cone over the hypersimplex, in exact arithmetic.
//!
//! A length vector `r` is interior when every side is shorter than the sum
//! of the others. The interior walls are `W_J = {Σ_J r = Σ_{J^c} r}` for
//! `2 <= |J| <= n - 2`; each is indexed by its canonical representative, the
//! one of `{J, J^c}` that does not contain `n`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::subset::{subsets_with_size, Subset, MAX_EDGES};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LengthVector {
    #[serde(with = "rational::vec")]
    r: Vec<Q>,
}

impl LengthVector {
    /// Requires `n >= 3` and every length strictly positive.
    pub fn new(r: Vec<Q>) -> Result<Self> {
        if r.len() < 3 {
            return Err(Error::invalid(format!("need at least 3 edges, got {}", r.len())));
        }
        if r.len() > MAX_EDGES {
            return Err(Error::invalid(format!("at most {MAX_EDGES} edges supported")));
        }
        if let Some(i) = r.iter().position(|x| !x.is_positive()) {
            return Err(Error::invalid(format!("r_{} = {} is not positive", i + 1, rational::format(&r[i]))));
        }
        Ok(LengthVector { r })
    }

    pub fn from_ints(r: &[i64]) -> Result<Self> {
        Self::new(r.iter().map(|&v| rational::int(v)).collect())
    }

    /// Parses a comma separated list such as `"1,1,1,1,3.5"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(rational::parse_list(text)?)
    }

    /// `(1, ..., 1)`.
    pub fn equilateral(n: usize) -> Result<Self> {
        Self::new(vec![rational::int(1); n])
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn lengths(&self) -> &[Q] {
        &self.r
    }

    /// 1-based access.
    pub fn get(&self, label: usize) -> &Q {
        &self.r[label - 1]
    }

    pub fn perimeter(&self) -> Q {
        self.r.iter().fold(Q::zero(), |acc, x| acc + x)
    }

    /// `2 r / L(r)`, the point of the hypersimplex on the ray through `r`.
    pub fn normalized(&self) -> Vec<Q> {
        let l = self.perimeter();
        self.r.iter().map(|x| rational::int(2) * x / &l).collect()
    }

    pub fn sum_over(&self, j: Subset) -> Q {
        j.iter().fold(Q::zero(), |acc, l| acc + &self.r[l - 1])
    }

    pub fn min_over(&self, j: Subset) -> Option<Q> {
        j.iter().map(|l| self.r[l - 1].clone()).min()
    }

    pub fn min_length(&self) -> Q {
        self.r.iter().min().cloned().expect("non-empty")
    }

    pub fn scaled(&self, lambda: &Q) -> Result<Self> {
        Self::new(self.r.iter().map(|x| x * lambda).collect())
    }

    /// Strict cone interior: `r_i < Σ_{j≠i} r_j` for every `i`.
    pub fn is_interior(&self) -> bool {
        let l = self.perimeter();
        self.r.iter().all(|x| rational::int(2) * x < l)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.r.iter().map(rational::to_f64).collect()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::Boundary(format!("r = {self} has an edge at least as long as all others combined")))
        }
    }
}

impl std::fmt::Display for LengthVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.r.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", rational::format(x))?;
        }
        write!(f, ")")
    }
}

/// Canonical wall representative: `n ∉ J`, `2 <= |J| <= n - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WallIndex(Subset);

impl WallIndex {
    /// Canonicalizes `J` (replacing it by `J^c` if it contains `n`).
    pub fn new(j: Subset, n: usize) -> Result<Self> {
        if !j.fits(n) {
            return Err(Error::invalid(format!("{j} is not a subset of {{1..{n}}}")));
        }
        let rep = if j.contains(n) { j.complement(n) } else { j };
        if rep.len() < 2 || rep.len() + 2 > n {
            return Err(Error::invalid(format!("{j} does not index an interior wall for n = {n}")));
        }
        Ok(WallIndex(rep))
    }

    pub fn subset(self) -> Subset {
        self.0
    }
}

/// All canonical wall indices for `n` edges, lexicographically.
pub fn canonical_walls(n: usize) -> Vec<WallIndex> {
    if n < 4 {
        return Vec::new();
    }
    subsets_with_size(n - 1, 2, n - 2).into_iter().map(WallIndex).collect()
}

/// `Σ_J r − Σ_{J^c} r`.
pub fn wall_margin(r: &LengthVector, j: Subset) -> Result<Q> {
    let n = r.n();
    if j.is_empty() || !j.fits(n) || j == Subset::full(n) {
        return Err(Error::invalid(format!("{j} must be a proper nonempty subset of {{1..{n}}}")));
    }
    Ok(r.sum_over(j) - r.sum_over(j.complement(n)))
}

pub(crate) fn margin_unchecked(r: &LengthVector, j: Subset) -> Q {
    r.sum_over(j) - r.sum_over(j.complement(r.n()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSign {
    pub wall: WallIndex,
    pub sign: i8,
}

/// Signs of the wall margins at every canonical wall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChamberSignature {
    signs: Vec<WallSign>,
}

impl ChamberSignature {
    pub fn of(r: &LengthVector) -> Self {
        let signs = canonical_walls(r.n())
            .into_iter()
            .map(|w| WallSign { wall: w, sign: rational::sign(&margin_unchecked(r, w.subset())) })
            .collect();
        ChamberSignature { signs }
    }

    pub fn signs(&self) -> &[WallSign] {
        &self.signs
    }

    pub fn sign(&self, wall: WallIndex) -> Option<i8> {
        self.signs.iter().find(|s| s.wall == wall).map(|s| s.sign)
    }

    pub fn zeros(&self) -> Vec<WallIndex> {
        self.signs.iter().filter(|s| s.sign == 0).map(|s| s.wall).collect()
    }

    /// Same chamber (or same wall cell): identical signs at every wall.
    pub fn same_cell(&self, other: &ChamberSignature) -> bool {
        self.signs.len() == other.signs.len() && self.signs.iter().zip(&other.signs).all(|(a, b)| a == b)
    }
}

pub fn same_chamber(a: &LengthVector, b: &LengthVector) -> bool {
    a.n() == b.n() && ChamberSignature::of(a).same_cell(&ChamberSignature::of(b))
}

/// `r̄_i + r̄_j > 1` for all `j ≠ i`.
pub fn is_favorable_at(r: &LengthVector, i: usize) -> bool {
    let l = r.perimeter();
    let two = rational::int(2);
    (1..=r.n()).filter(|&j| j != i).all(|j| &two * (r.get(i) + r.get(j)) > l)
}

/// Every index at which `r` is favorable. At most one for `n >= 4`; every
/// index of an interior triangle qualifies.
pub fn favorable_indices(r: &LengthVector) -> Vec<usize> {
    (1..=r.n()).filter(|&i| is_favorable_at(r, i)).collect()
}

/// The favorable index, taking the largest one for triangles.
pub fn favorable_index(r: &LengthVector) -> Option<usize> {
    favorable_indices(r).pop()
}

/// `i` such that `r̄_j + r̄_k > 1` for all distinct `j, k ≠ i`.
pub fn nabla_index(r: &LengthVector) -> Option<usize> {
    let l = r.perimeter();
    let two = rational::int(2);
    (1..=r.n()).find(|&i| {
        let others: Vec<usize> = (1..=r.n()).filter(|&j| j != i).collect();
        others.iter().enumerate().all(|(a, &j)| others[a + 1..].iter().all(|&k| &two * (r.get(j) + r.get(k)) > l))
    })
}

/// Base point singling out the central chamber: `(1,…,1)` for odd `n`; for
/// even `n`, `(1,…,1) + δ(1,2,…,n)` with `δ = 1/n³`, or binary weights
/// `δ·2^{i-1}` with `δ = 2^{-(n+1)}` when the first choice lies on a wall.
pub fn default_base_point(n: usize) -> LengthVector {
    let ones = vec![rational::int(1); n];
    if n % 2 == 1 {
        return LengthVector::new(ones).expect("n >= 3");
    }
    let cube = (n * n * n) as i64;
    let linear: Vec<Q> = (1..=n as i64).map(|i| rational::int(1) + rational::ratio(i, cube)).collect();
    let linear = LengthVector::new(linear).expect("positive");
    if ChamberSignature::of(&linear).zeros().is_empty() {
        return linear;
    }
    let scale = rational::ratio(1, 1i64 << (n + 1));
    let binary: Vec<Q> = (0..n).map(|i| rational::int(1) + &scale * rational::int(1i64 << i)).collect();
    LengthVector::new(binary).expect("positive")
}

/// True if `r` lies strictly inside the chamber containing `base`.
pub fn in_chamber_of(r: &LengthVector, base: &LengthVector) -> bool {
    if r.n() != base.n() || !r.is_interior() {
        return false;
    }
    let sr = ChamberSignature::of(r);
    sr.zeros().is_empty() && sr.same_cell(&ChamberSignature::of(base))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub in_cone_interior: bool,
    pub signature: ChamberSignature,
    /// Zero-margin walls, including facets `{i}` when `r` is on the boundary.
    pub walls_on: Vec<Subset>,
    pub line_gons: Vec<WallIndex>,
    pub smooth: bool,
    pub favorable_index: Option<usize>,
    pub nabla_index: Option<usize>,
    pub central: bool,
}

pub fn classify(r: &LengthVector) -> Result<ClassifyReport> {
    classify_with_base(r, &default_base_point(r.n()))
}

/// As [`classify`] with an explicit base point for the central chamber.
pub fn classify_with_base(r: &LengthVector, base: &LengthVector) -> Result<ClassifyReport> {
    if base.n() != r.n() {
        return Err(Error::invalid("base point has a different edge count"));
    }
    let n = r.n();
    let signature = ChamberSignature::of(r);
    let line_gons = signature.zeros();
    let mut walls_on: Vec<Subset> = (1..=n)
        .map(Subset::singleton)
        .filter(|s| margin_unchecked(r, s.complement(n)).is_zero())
        .collect();
    walls_on.extend(line_gons.iter().map(|w| w.subset()));
    walls_on.sort();
    Ok(ClassifyReport {
        in_cone_interior: r.is_interior(),
        smooth: line_gons.is_empty(),
        favorable_index: favorable_index(r),
        nabla_index: nabla_index(r),
        central: in_chamber_of(r, base),
        line_gons,
        walls_on,
        signature,
    })
}

/// All `J` with `min_size <= |J| <= n-2` and `Σ_J r <= Σ_{J^c} r`, sorted.
pub fn relevant_subsets(r: &LengthVector, min_size: usize) -> Result<Vec<Subset>> {
    r.require_interior()?;
    let n = r.n();
    if n < 3 {
        return Ok(Vec::new());
    }
    Ok(subsets_with_size(n, min_size.max(1), n - 2)
        .into_iter()
        .filter(|&j| !margin_unchecked(r, j).is_positive())
        .collect())
}

/// Relevancy for bubble index sets: `2 <= |J| <= n-2`, `Σ_J <= Σ_{J^c}`.
pub fn is_relevant(r: &LengthVector, j: Subset) -> bool {
    let n = r.n();
    j.fits(n) && j.len() >= 2 && j.len() + 2 <= n && !margin_unchecked(r, j).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenInterval {
    #[serde(with = "rational")]
    pub lo: Q,
    #[serde(with = "rational")]
    pub hi: Q,
}

impl OpenInterval {
    pub fn contains(&self, x: &Q) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// Legal `ε_J`: the open interval `(0, 2 min_J r_j)`.
pub fn epsilon_range(r: &LengthVector, j: Subset) -> Result<OpenInterval> {
    if !is_relevant(r, j) {
        return Err(Error::invalid(format!("{j} is not relevant for r = {r}")));
    }
    let m = r.min_over(j).expect("non-empty");
    Ok(OpenInterval { lo: Q::zero(), hi: rational::int(2) * m })
}

/// `min_i r_i`, legal for every relevant `J` simultaneously.
pub fn canonical_epsilon(r: &LengthVector) -> Q {
    r.min_length()
}

/// `r_{J,ε} = (r_J, Σ_J r − ε)`; always lands in the favorable chamber of
/// its last edge.
pub fn augment(r: &LengthVector, j: Subset, eps: &Q) -> Result<LengthVector> {
    let range = epsilon_range(r, j)?;
    if eps <= &range.lo {
        return Err(Error::Range {
            what: format!("eps_{j}"),
            value: rational::format(eps),
            bound: "eps_J > 0".into(),
        });
    }
    if eps >= &range.hi {
        return Err(Error::Range {
            what: format!("eps_{j}"),
            value: rational::format(eps),
            bound: format!("eps_J < 2 min_J r_j = {}", rational::format(&range.hi)),
        });
    }
    let out = augment_unchecked(r, j, eps);
    if !is_favorable_at(&out, out.n()) {
        return Err(Error::Internal(format!("augmented vector {out} is not favorable at its last edge")));
    }
    Ok(out)
}

pub(crate) fn augment_unchecked(r: &LengthVector, j: Subset, eps: &Q) -> LengthVector {
    let mut v: Vec<Q> = j.iter().map(|l| r.get(l).clone()).collect();
    v.push(r.sum_over(j) - eps);
    LengthVector { r: v }
}

/// A choice of `ε_J` for a family of subsets, each inside `(0, 2 min_J r_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EpsilonAssignment {
    eps: BTreeMap<Subset, Q>,
}

#[derive(Serialize, Deserialize)]
struct EpsEntry {
    subset: Subset,
    #[serde(with = "rational")]
    eps: Q,
}

impl Serialize for EpsilonAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<EpsEntry> =
            self.eps.iter().map(|(j, e)| EpsEntry { subset: *j, eps: e.clone() }).collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EpsilonAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<EpsEntry>::deserialize(d)?;
        Ok(EpsilonAssignment { eps: entries.into_iter().map(|e| (e.subset, e.eps)).collect() })
    }
}

impl EpsilonAssignment {
    /// Validates each entry against `r`: `J` relevant and `ε_J` in range.
    pub fn new(r: &LengthVector, entries: impl IntoIterator<Item = (Subset, Q)>) -> Result<Self> {
        let mut eps = BTreeMap::new();
        for (j, e) in entries {
            let range = epsilon_range(r, j)?;
            if !range.contains(&e) {
                return Err(Error::Range {
                    what: format!("eps_{j}"),
                    value: rational::format(&e),
                    bound: format!("0 < eps_J < {}", rational::format(&range.hi)),
                });
            }
            eps.insert(j, e);
        }
        Ok(EpsilonAssignment { eps })
    }

    /// `ε_J = min_i r_i` for every relevant `J`.
    pub fn canonical(r: &LengthVector) -> Result<Self> {
        Self::uniform(r, &canonical_epsilon(r))
    }

    /// The same `ε` for every relevant `J`.
    pub fn uniform(r: &LengthVector, eps: &Q) -> Result<Self> {
        let subsets = relevant_subsets(r, 2)?;
        Self::new(r, subsets.into_iter().map(|j| (j, eps.clone())))
    }

    pub fn get(&self, j: Subset) -> Result<&Q> {
        self.eps.get(&j).ok_or(Error::MissingEpsilon(j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &Q)> {
        self.eps.iter()
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.eps.keys().copied()
    }
}

/// Representative of the favorable chamber `Δ_i`: ones, with `r_i = n − 3/2`.
pub fn favorable_representative(n: usize, i: usize) -> LengthVector {
    let mut v = vec![rational::int(1); n];
    v[i - 1] = rational::int(n as i64) - rational::ratio(3, 2);
    LengthVector::new(v).expect("positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lv(s: &str) -> LengthVector {
        LengthVector::parse(s).unwrap()
    }

    fn set(l: &[usize]) -> Subset {
        Subset::from_labels(l.iter().copied()).unwrap()
    }

    #[test]
    fn wall_margin_examples() {
        assert_eq!(wall_margin(&lv("1,1,1,1,1"), set(&[1, 2])).unwrap(), int(-1));
        assert_eq!(wall_margin(&lv("1,1,1,1,2"), set(&[1, 2, 3])).unwrap(), int(0));
        assert_eq!(wall_margin(&lv("1,1,1,1,3.5"), set(&[4, 5])).unwrap(), ratio(3, 2));
        assert!(wall_margin(&lv("1,1,1"), Subset::EMPTY).is_err());
        assert!(wall_margin(&lv("1,1,1"), set(&[1, 2, 3])).is_err());
    }

    #[test]
    fn classify_favorable_pentagon() {
        let rep = classify(&lv("1,1,1,1,3.5")).unwrap();
        assert_eq!(rep.favorable_index, Some(5));
        assert!(rep.smooth);
        assert!(!rep.central);
        assert!(rep.in_cone_interior);
        // r̄_5 + r̄_j = (7 + 2) / 7.5 = 1.2
        let rb = lv("1,1,1,1,3.5").normalized();
        assert_eq!(&rb[4] + &rb[0], ratio(6, 5));
    }

    #[test]
    fn classify_equilateral_pentagon_is_central() {
        let rep = classify(&lv("1,1,1,1,1")).unwrap();
        assert!(rep.central);
        assert!(rep.smooth);
        assert_eq!(rep.favorable_index, None);
        assert!(rep.signature.signs().iter().all(|s| s.sign == -1 || s.wall.subset().len() == 3));
    }

    #[test]
    fn classify_line_gons() {
        let rep = classify(&lv("1,1,1,1,2")).unwrap();
        let got: Vec<Vec<usize>> = rep.line_gons.iter().map(|w| w.subset().labels()).collect();
        assert_eq!(got, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]);
        assert!(!rep.smooth);
    }

    #[test]
    fn classify_rejects_nothing_on_boundary() {
        let rep = classify(&lv("1,1,2")).unwrap();
        assert!(!rep.in_cone_interior);
        assert_eq!(rep.walls_on, vec![set(&[3])]);
    }

    #[test]
    fn relevant_subset_examples() {
        assert_eq!(relevant_subsets(&LengthVector::equilateral(7).unwrap(), 3).unwrap().len(), 35);
        assert!(relevant_subsets(&LengthVector::equilateral(5).unwrap(), 3).unwrap().is_empty());
        assert_eq!(relevant_subsets(&LengthVector::equilateral(5).unwrap(), 2).unwrap().len(), 10);
        assert!(relevant_subsets(&lv("1,1,3"), 2).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let r6 = LengthVector::equilateral(6).unwrap();
        let range = epsilon_range(&r6, set(&[1, 2, 3])).unwrap();
        assert_eq!((range.lo, range.hi), (int(0), int(2)));
        assert_eq!(canonical_epsilon(&r6), int(1));
        assert_eq!(epsilon_range(&lv("2,3,5,5,5"), set(&[1, 2])).unwrap().hi, int(4));
        assert!(epsilon_range(&lv("1,1,1,1,3.5"), set(&[1, 5])).is_err());
    }

    #[test]
    fn augment_examples() {
        let r6 = LengthVector::equilateral(6).unwrap();
        let a = augment(&r6, set(&[1, 2, 3]), &int(1)).unwrap();
        assert_eq!(a, LengthVector::from_ints(&[1, 1, 1, 2]).unwrap());
        assert_eq!(favorable_index(&a), Some(4));
        match augment(&r6, set(&[1, 2, 3]), &int(2)) {
            Err(Error::Range { bound, .. }) => assert!(bound.contains("2 min")),
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(matches!(augment(&r6, set(&[1, 2, 3]), &int(0)), Err(Error::Range { .. })));
        let tri = augment(&LengthVector::equilateral(5).unwrap(), set(&[1, 2]), &int(1)).unwrap();
        assert_eq!(tri, LengthVector::from_ints(&[1, 1, 1]).unwrap());
    }

    #[test]
    fn wall_index_is_canonical() {
        let w = WallIndex::new(set(&[3, 4, 5]), 5).unwrap();
        assert_eq!(w.subset(), set(&[1, 2]));
        assert!(WallIndex::new(set(&[1]), 5).is_err());
        assert!(WallIndex::new(set(&[1, 2, 3, 4]), 5).is_err());
        assert_eq!(canonical_walls(5).len(), 10);
        assert_eq!(canonical_walls(6).len(), 25);
    }

    #[test]
    fn even_base_point_avoids_walls() {
        for n in [4usize, 6, 8, 10, 12] {
            let b = default_base_point(n);
            assert!(ChamberSignature::of(&b).zeros().is_empty(), "n = {n}");
            assert!(b.is_interior());
        }
        // n = 6 keeps the linear perturbation.
        assert_eq!(default_base_point(6).get(6), &(int(1) + ratio(6, 216)));
    }

    #[test]
    fn canonical_epsilon_is_legal_everywhere() {
        let r = lv("2,3,5,5,5");
        let eps = EpsilonAssignment::canonical(&r).unwrap();
        assert_eq!(eps.len(), relevant_subsets(&r, 2).unwrap().len());
        assert_eq!(eps.get(set(&[1, 2])).unwrap(), &int(2));
        assert!(matches!(eps.get(set(&[3, 4, 5])), Err(Error::MissingEpsilon(_))));
    }

    #[test]
    fn signature_json_shape() {
        let rep = classify(&lv("1,1,1,1,2")).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["in_cone_interior", "signature", "walls_on", "line_gons", "smooth", "favorable_index", "nabla_index", "central"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["line_gons"][0], serde_json::json!([1, 2, 3]));
    }
}
