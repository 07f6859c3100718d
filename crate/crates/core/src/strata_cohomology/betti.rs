//! Betti numbers of the stable-polygon space by summing E-polynomials of
//! its strata.
//!
//! A stratum is a laminar family of bubble index sets; its points are a
//! product of open polygon spaces, one per component. The open space
//! `M⁰_x` (no parallel edges) is obtained from the closed one by removing
//! every stratum `Y⁰_α ≅ M⁰_{x_α}`.

use std::collections::HashMap;

use num_traits::Zero;

use super::{poincare_by_signs, require_off_walls, PoincarePoly};
use crate::error::{Error, Result};
use crate::exact_chambers::{canonical_walls, margin_unchecked, EpsilonAssignment, LengthVector};
use crate::partition::partitions_of;
use crate::rational::{self, Q};
use crate::subset::Subset;

/// Memo of `E(M⁰_x)` keyed by the sorted lengths.
#[derive(Debug, Default)]
pub struct BettiCache {
    open: HashMap<Vec<Q>, PoincarePoly>,
}

impl BettiCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }
}

fn interior(x: &[Q]) -> bool {
    let l: Q = x.iter().sum();
    x.iter().all(|v| rational::int(2) * v < l)
}

fn block_sums(x: &[Q], blocks: &[Subset]) -> Vec<Q> {
    blocks.iter().map(|b| b.iter().map(|l| &x[l - 1]).sum()).collect()
}

/// `E(M⁰_x)` for an interior, off-wall `x`.
pub fn open_e_polynomial(x: &[Q], cache: &mut BettiCache) -> Result<PoincarePoly> {
    let mut key = x.to_vec();
    key.sort();
    if let Some(p) = cache.open.get(&key) {
        return Ok(p.clone());
    }
    let lv = LengthVector::new(key.clone())?;
    require_off_walls(&lv)?;
    let k = key.len();
    let mut e = poincare_by_signs(&lv);
    for blocks in partitions_of(Subset::full(k)) {
        if blocks.len() == k || blocks.len() < 3 {
            continue;
        }
        let y = block_sums(&key, &blocks);
        if interior(&y) {
            e = &e - &open_e_polynomial(&y, cache)?;
        }
    }
    cache.open.insert(key, e.clone());
    Ok(e)
}

struct Ctx<'a> {
    r: &'a LengthVector,
    eps: &'a EpsilonAssignment,
    cache: BettiCache,
    bubbles: HashMap<Subset, PoincarePoly>,
}

impl Ctx<'_> {
    /// Sum over the laminar families strictly inside `J`, with `J` itself as
    /// the bubble component.
    fn bubble(&mut self, j: Subset) -> Result<PoincarePoly> {
        if let Some(p) = self.bubbles.get(&j) {
            return Ok(p.clone());
        }
        let eps = self.eps.get(j)?.clone();
        let last = self.r.sum_over(j) - eps;
        let mut total = PoincarePoly::zero();
        for beta in partitions_of(j) {
            if beta.len() == 1 {
                continue;
            }
            let mut x: Vec<Q> = beta.iter().map(|b| self.r.sum_over(*b)).collect();
            x.push(last.clone());
            if !interior(&x) {
                continue;
            }
            let mut term = open_e_polynomial(&x, &mut self.cache)?;
            for b in beta.iter().filter(|b| b.len() >= 2) {
                term = &term * &self.bubble(*b)?;
            }
            total = &total + &term;
        }
        self.bubbles.insert(j, total.clone());
        Ok(total)
    }
}

/// Poincaré polynomial (in `t²`) of the space of stable polygons for
/// off-wall `r`.
pub fn stable_betti(r: &LengthVector, eps: &EpsilonAssignment) -> Result<PoincarePoly> {
    let n = r.n();
    if n < 4 {
        return Err(Error::invalid(format!("need n >= 4, got {n}")));
    }
    r.require_interior()?;
    if let Some(w) = canonical_walls(n).into_iter().find(|w| margin_unchecked(r, w.subset()).is_zero()) {
        return Err(Error::Unsupported(format!(
            "r = {r} lies on the wall W_{}; its polygon space is singular",
            w.subset()
        )));
    }
    let mut ctx = Ctx { r, eps, cache: BettiCache::new(), bubbles: HashMap::new() };
    let mut total = PoincarePoly::zero();
    for alpha in partitions_of(Subset::full(n)) {
        if alpha.len() < 3 {
            continue;
        }
        let x: Vec<Q> = alpha.iter().map(|b| r.sum_over(*b)).collect();
        if !interior(&x) {
            continue;
        }
        let mut term = open_e_polynomial(&x, &mut ctx.cache)?;
        for b in alpha.iter().filter(|b| b.len() >= 2) {
            term = &term * &ctx.bubble(*b)?;
        }
        total = &total + &term;
    }
    Ok(total)
}
