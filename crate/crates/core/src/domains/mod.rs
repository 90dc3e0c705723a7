//! Product-of-balls base domains and the expanded domains the calculi
//! operate on: block points for partial difference quotients, nested
//! (x, y, t) triples for directional quotients.
//!
//! Membership is always an exact valuation comparison. Distinctness of two
//! series counts only when *certified*, i.e. their difference has a known
//! nonzero coefficient; a pair that agrees on the whole joint window is not
//! a member of any strict domain at the working precision.

mod sample;

pub use sample::{sample_block_points, sample_bracket_points, Sampler};

#[cfg(test)]
mod domain_tests;

use crate::error::{EngineError, Result};
use crate::field::{AbsValue, LaurentSeries, PrimeField};
use std::fmt;

/// Multi-index over d coordinates; drives divided-difference shapes.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs at least one entry");
        MultiIndex { entries }
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![0; d])
    }

    /// The unit multi-index e_i (1-based i).
    pub fn unit(d: usize, i: usize) -> Self {
        assert!((1..=d).contains(&i));
        let mut entries = vec![0; d];
        entries[i - 1] = 1;
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.entries[i]
    }

    /// |alpha|
    pub fn order(&self) -> usize {
        self.entries.iter().map(|&a| a as usize).sum()
    }

    /// Length d + |alpha| of the flat tuple a block point occupies.
    pub fn flat_len(&self) -> usize {
        self.dim() + self.order()
    }

    /// 0-based flat offset of block i's first entry x^{(i)}_0.
    pub fn block_start(&self, i: usize) -> usize {
        i + self.entries[..i].iter().map(|&a| a as usize).sum::<usize>()
    }

    /// 1 + alpha_i entries.
    pub fn block_len(&self, i: usize) -> usize {
        1 + self.entries[i] as usize
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// First coordinate with a positive entry, if any (0-based).
    pub fn first_positive(&self) -> Option<usize> {
        self.entries.iter().position(|&a| a > 0)
    }
}

/// All multi-indices over d coordinates with 1 <= |alpha| <= max_order, in
/// lexicographic order.
pub fn multi_indices_up_to(d: usize, max_order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    loop {
        let order: u32 = current.iter().sum();
        if (1..=max_order).contains(&order) {
            out.push(MultiIndex::new(current.clone()));
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max_order {
                current[i] += 1;
                for slot in current.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
        if current.iter().sum::<u32>() > max_order {
            continue;
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Element of K^{d+|alpha|} with the block view x^{(i)} of length
/// 1 + alpha_i; flat and block views share the same storage.
#[derive(Clone, PartialEq, Debug)]
pub struct BlockPoint {
    alpha: MultiIndex,
    values: Vec<LaurentSeries>,
}

impl BlockPoint {
    pub fn new(alpha: MultiIndex, values: Vec<LaurentSeries>) -> Result<Self> {
        if values.len() != alpha.flat_len() {
            return Err(EngineError::Shape(format!(
                "block point for {alpha} needs {} scalars, got {}",
                alpha.flat_len(),
                values.len()
            )));
        }
        Ok(BlockPoint { alpha, values })
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn flat(&self) -> &[LaurentSeries] {
        &self.values
    }

    pub fn block(&self, i: usize) -> &[LaurentSeries] {
        let s = self.alpha.block_start(i);
        &self.values[s..s + self.alpha.block_len(i)]
    }

    /// x^{(i)}_j
    pub fn value(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.block(i)[j]
    }

    /// The point (x^{(1)}_{picks[0]}, ..., x^{(d)}_{picks[d-1]}) in K^d.
    pub fn selection(&self, picks: &[usize]) -> Vec<LaurentSeries> {
        assert_eq!(picks.len(), self.alpha.dim());
        picks
            .iter()
            .enumerate()
            .map(|(i, &j)| self.value(i, j).clone())
            .collect()
    }

    /// Iterates over all mixed selections (j_1, ..., j_d), j_i <= alpha_i.
    pub fn selections(&self) -> SelectionIter<'_> {
        SelectionIter {
            alpha: &self.alpha,
            current: Some(vec![0; self.alpha.dim()]),
        }
    }

    /// All within-block pairs are certified distinct.
    pub fn is_strict(&self) -> bool {
        (0..self.alpha.dim()).all(|i| {
            let block = self.block(i);
            (0..block.len()).all(|j| {
                (j + 1..block.len()).all(|k| block[j].sub(&block[k]).valuation().is_some())
            })
        })
    }
}

/// Odometer over the index tuples of the mixed selections.
pub struct SelectionIter<'a> {
    alpha: &'a MultiIndex,
    current: Option<Vec<usize>>,
}

impl Iterator for SelectionIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let mut next = current.clone();
        for i in (0..next.len()).rev() {
            if next[i] < self.alpha.entry(i) as usize {
                next[i] += 1;
                for slot in next.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                self.current = Some(next);
                return Some(current);
            }
        }
        Some(current)
    }
}

/// Product of balls {z : v(z - c_i) >= r_i} in K^d.
#[derive(Clone, Debug)]
pub struct BallDomain {
    field: PrimeField,
    coords: Vec<(LaurentSeries, i64)>,
}

impl BallDomain {
    pub fn new(field: PrimeField, coords: Vec<(LaurentSeries, i64)>) -> Self {
        assert!(!coords.is_empty());
        BallDomain { field, coords }
    }

    /// O^d: all centers 0, all radius exponents 0.
    pub fn unit_ball(field: PrimeField, d: usize) -> Self {
        Self::new(field, vec![(LaurentSeries::zero(field), 0); d])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn center(&self, i: usize) -> &LaurentSeries {
        &self.coords[i].0
    }

    pub fn radius_exp(&self, i: usize) -> i64 {
        self.coords[i].1
    }

    fn coord_contains(&self, i: usize, z: &LaurentSeries) -> Result<bool> {
        let r = self.coords[i].1;
        match z.sub(&self.coords[i].0).abs_value() {
            AbsValue::Finite(v) => Ok(v >= r),
            AbsValue::Zero => Ok(true),
            AbsValue::ZeroToPrec(n) if n >= r => Ok(true),
            AbsValue::ZeroToPrec(n) => Err(EngineError::UndecidableAtPrecision(format!(
                "coordinate {} known only to O(X^{n}), ball needs valuation >= {r}",
                i + 1
            ))),
        }
    }

    /// Exact membership of a point of K^d. A definite "outside" wins over an
    /// undecidable coordinate.
    pub fn contains(&self, point: &[LaurentSeries]) -> Result<bool> {
        if point.len() != self.dim() {
            return Err(EngineError::Shape(format!(
                "point has {} coordinates, domain has {}",
                point.len(),
                self.dim()
            )));
        }
        let mut undecidable = None;
        for (i, z) in point.iter().enumerate() {
            match self.coord_contains(i, z) {
                Ok(true) => {}
                Ok(false) => return Ok(false),
                Err(e) => undecidable = Some(e),
            }
        }
        match undecidable {
            Some(e) => Err(e),
            None => Ok(true),
        }
    }

    /// The product domain U^{<alpha>}: block i ranges over ball i, repeated
    /// 1 + alpha_i times.
    pub fn angle_expand(&self, alpha: &MultiIndex) -> BallDomain {
        assert_eq!(alpha.dim(), self.dim());
        let mut coords = Vec::with_capacity(alpha.flat_len());
        for (i, c) in self.coords.iter().enumerate() {
            for _ in 0..alpha.block_len(i) {
                coords.push(c.clone());
            }
        }
        Self::new(self.field, coords)
    }
}

/// Membership in U^{<alpha>} (every mixed selection lies in U), or in
/// U^{>alpha<} with `strict`: within-block entries also pairwise certified
/// distinct. Repeated or indistinguishable entries make a point non-strict
/// rather than an error; errors are reserved for undecidable radius
/// comparisons.
pub fn member_angle(u: &BallDomain, x: &BlockPoint, strict: bool) -> Result<bool> {
    if x.alpha().dim() != u.dim() {
        return Err(EngineError::Shape(format!(
            "block point over {} coordinates, domain has {}",
            x.alpha().dim(),
            u.dim()
        )));
    }
    // For product domains the mixed-selection condition factorizes: every
    // entry of block i must lie in ball i.
    let mut undecidable = None;
    for i in 0..u.dim() {
        for z in x.block(i) {
            match u.coord_contains(i, z) {
                Ok(true) => {}
                Ok(false) => return Ok(false),
                Err(e) => undecidable = Some(e),
            }
        }
    }
    if strict && !x.is_strict() {
        return Ok(false);
    }
    match undecidable {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// Flat scalar count of a point of E^{[k]} for E = K^d: each bracket level
/// doubles the space and appends one scalar slot.
pub fn bracket_len(d: usize, k: usize) -> usize {
    (1usize << k) * (d + 1) - 1
}

/// Membership in U^{[k]} (or U^{]k[} with `strict`), on flat tuples laid
/// out depth-first as (x-block, y-block, t).
///
/// A point of U^{[k]} splits as z = (a, b, t) with a, b of bracket level
/// k-1; the conditions are a in U^{[k-1]} and a + t*b in U^{[k-1]}. The
/// strict variant additionally needs t certified nonzero at every level of
/// the recursion path.
pub fn member_bracket(u: &BallDomain, k: usize, z: &[LaurentSeries], strict: bool) -> Result<bool> {
    let d = u.dim();
    if z.len() != bracket_len(d, k) {
        return Err(EngineError::Shape(format!(
            "bracket point of level {k} over K^{d} needs {} scalars, got {}",
            bracket_len(d, k),
            z.len()
        )));
    }
    if k == 0 {
        return u.contains(z);
    }
    let half = bracket_len(d, k - 1);
    let (a, rest) = z.split_at(half);
    let (b, t) = rest.split_at(half);
    let t = &t[0];
    if strict && t.valuation().is_none() {
        return Ok(false);
    }
    let shifted: Vec<LaurentSeries> = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| ai.add(&t.mul(bi)))
        .collect();
    let mut undecidable = None;
    let mut all_in = true;
    for part in [a, &shifted[..]] {
        match member_bracket(u, k - 1, part, strict) {
            Ok(true) => {}
            Ok(false) => all_in = false,
            Err(e) => undecidable = Some(e),
        }
    }
    if !all_in {
        return Ok(false);
    }
    match undecidable {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// Membership in the Ludkovsky domain: every subset shift
/// x + sum_{i in S} t_i xi_i stays in U, and (strict) every t_i is
/// certified nonzero.
pub fn member_ludkovsky(
    u: &BallDomain,
    x: &[LaurentSeries],
    xis: &[Vec<LaurentSeries>],
    ts: &[LaurentSeries],
    strict: bool,
) -> Result<bool> {
    assert_eq!(xis.len(), ts.len());
    if strict && ts.iter().any(|t| t.valuation().is_none()) {
        return Ok(false);
    }
    let mut undecidable = None;
    let n = ts.len();
    for mask in 0u32..(1 << n) {
        let mut pt = x.to_vec();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                for (slot, xi) in pt.iter_mut().zip(&xis[i]) {
                    *slot = slot.add(&ts[i].mul(xi));
                }
            }
        }
        match u.contains(&pt) {
            Ok(true) => {}
            Ok(false) => return Ok(false),
            Err(e) => undecidable = Some(e),
        }
    }
    match undecidable {
        Some(e) => Err(e),
        None => Ok(true),
    }
}
