//! Monotone maps between finite linear orders `[m] = {0, ..., m}`.
//!
//! These are the arrows of the simplex category. Injective maps form the
//! wide subcategory of face operators, surjective maps are the degeneracy
//! operators, and every map factors uniquely as a surjection followed by an
//! injection.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("poset maps need a nonempty source and target")]
    Empty,
    #[error("value {value} at position {position} lies outside [0, {max}]")]
    OutOfRange {
        position: usize,
        value: usize,
        max: usize,
    },
    #[error("values are not weakly increasing at position {0}")]
    NotMonotone(usize),
    #[error("cannot compose: inner map has {inner_target} target points, outer map has {outer_source} source points")]
    SizeMismatch {
        inner_target: usize,
        outer_source: usize,
    },
}

/// Which monotone maps to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    All,
    Epi,
    Mono,
}

/// A weakly increasing map `[m] -> [n]`, stored as its value sequence.
///
/// The derived ordering compares target size first and then the value
/// sequences lexicographically, which is the canonical enumeration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetMap {
    target_size: usize,
    values: Vec<usize>,
}

impl PosetMap {
    pub fn new(values: Vec<usize>, target_size: usize) -> Result<Self, DeltaError> {
        if values.is_empty() || target_size == 0 {
            return Err(DeltaError::Empty);
        }
        for (position, &value) in values.iter().enumerate() {
            if value >= target_size {
                return Err(DeltaError::OutOfRange {
                    position,
                    value,
                    max: target_size - 1,
                });
            }
            if position > 0 && values[position - 1] > value {
                return Err(DeltaError::NotMonotone(position));
            }
        }
        Ok(Self {
            target_size,
            values,
        })
    }

    pub(crate) fn from_parts(values: Vec<usize>, target_size: usize) -> Self {
        debug_assert!(Self::new(values.clone(), target_size).is_ok());
        Self {
            target_size,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts((0..=n).collect(), n + 1)
    }

    /// The coface `d^i : [n-1] -> [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n, "coface d^{i} undefined into [{n}]");
        Self::from_parts((0..n).map(|v| if v < i { v } else { v + 1 }).collect(), n + 1)
    }

    /// The codegeneracy `s^i : [n+1] -> [n]` hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n, "codegeneracy s^{i} undefined onto [{n}]");
        Self::from_parts((0..=n + 1).map(|v| if v <= i { v } else { v - 1 }).collect(), n + 1)
    }

    /// The vertex inclusion `[0] -> [n]` picking `v`.
    pub fn vertex(n: usize, v: usize) -> Self {
        assert!(v <= n);
        Self::from_parts(vec![v], n + 1)
    }

    pub fn constant(m: usize, n: usize, v: usize) -> Self {
        assert!(v <= n);
        Self::from_parts(vec![v; m + 1], n + 1)
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target_size - 1
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.target_size == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target_size - 1
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &PosetMap) -> Result<PosetMap, DeltaError> {
        compose(self, inner)
    }

    /// Unique factorization `self = mono ∘ epi` through the image.
    pub fn epi_mono_factorize(&self) -> (PosetMap, PosetMap) {
        let mut image: Vec<usize> = Vec::with_capacity(self.values.len());
        let mut epi = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            if image.last() != Some(&v) {
                image.push(v);
            }
            epi.push(image.len() - 1);
        }
        let image_size = image.len();
        (
            PosetMap::from_parts(epi, image_size),
            PosetMap::from_parts(image, self.target_size),
        )
    }

    /// Target points not hit, in increasing order.
    pub fn missing_values(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target_size];
        for &v in &self.values {
            hit[v] = true;
        }
        (0..self.target_size).filter(|&v| !hit[v]).collect()
    }

    /// Positions `i` with `f(i) = f(i+1)`, in increasing order.
    pub fn repeat_positions(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Debug for PosetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PosetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "):[{}]->[{}]", self.source_dim(), self.target_dim())
    }
}

/// Pointwise composite `g ∘ f`.
pub fn compose(g: &PosetMap, f: &PosetMap) -> Result<PosetMap, DeltaError> {
    if f.target_size != g.source_size() {
        return Err(DeltaError::SizeMismatch {
            inner_target: f.target_size,
            outer_source: g.source_size(),
        });
    }
    Ok(PosetMap::from_parts(
        f.values.iter().map(|&i| g.values[i]).collect(),
        g.target_size,
    ))
}

/// All monotone maps `[m] -> [n]` of the requested kind, in lexicographic
/// order of their value sequences.
pub fn enumerate_maps(m: usize, n: usize, kind: MapKind) -> Vec<PosetMap> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m + 1);
    fill(m + 1, n + 1, &mut current, &mut |values| {
        let map = PosetMap::from_parts(values.to_vec(), n + 1);
        let keep = match kind {
            MapKind::All => true,
            MapKind::Epi => map.is_surjective(),
            MapKind::Mono => map.is_injective(),
        };
        if keep {
            out.push(map);
        }
    });
    out
}

fn fill(len: usize, size: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if current.len() == len {
        emit(current);
        return;
    }
    let lo = current.last().copied().unwrap_or(0);
    for v in lo..size {
        current.push(v);
        fill(len, size, current, emit);
        current.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(values: &[usize], target: usize) -> PosetMap {
        PosetMap::new(values.to_vec(), target + 1).unwrap()
    }

    #[test]
    fn identity_composes_to_identity() {
        let id = PosetMap::identity(2);
        assert_eq!(compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn s0_after_d1_is_identity_on_point() {
        let s0 = PosetMap::codegeneracy(0, 0);
        let d1 = PosetMap::coface(1, 1);
        assert_eq!(compose(&s0, &d1).unwrap(), PosetMap::identity(0));
    }

    #[test]
    fn composition_is_pointwise_on_all_small_pairs() {
        for f in enumerate_maps(2, 3, MapKind::All) {
            for g in enumerate_maps(3, 1, MapKind::All) {
                let gf = compose(&g, &f).unwrap();
                for i in 0..=2 {
                    assert_eq!(gf.apply(i), g.apply(f.apply(i)));
                }
            }
        }
    }

    #[test]
    fn compose_rejects_mismatched_sizes() {
        let f = PosetMap::identity(1);
        let g = PosetMap::identity(2);
        assert!(matches!(compose(&g, &f), Err(DeltaError::SizeMismatch { .. })));
    }

    #[test]
    fn constructor_rejects_bad_values() {
        assert_eq!(PosetMap::new(vec![0, 2], 2), Err(DeltaError::OutOfRange { position: 1, value: 2, max: 1 }));
        assert_eq!(PosetMap::new(vec![1, 0], 2), Err(DeltaError::NotMonotone(1)));
        assert_eq!(PosetMap::new(vec![], 2), Err(DeltaError::Empty));
    }

    #[test]
    fn factorization_examples() {
        let id = PosetMap::identity(2);
        assert_eq!(id.epi_mono_factorize(), (id.clone(), id.clone()));
        let f = map(&[0, 0, 1], 2);
        let (e, m) = f.epi_mono_factorize();
        assert_eq!(e, map(&[0, 0, 1], 1));
        assert_eq!(m, map(&[0, 1], 2));
    }

    #[test]
    fn factorization_is_unique_by_exhaustion() {
        for m in 0..=5 {
            for n in 0..=5 {
                for f in enumerate_maps(m, n, MapKind::All) {
                    let mut hits = 0;
                    for k in 0..=m.min(n) {
                        for e in enumerate_maps(m, k, MapKind::Epi) {
                            for i in enumerate_maps(k, n, MapKind::Mono) {
                                if compose(&i, &e).unwrap() == f {
                                    hits += 1;
                                }
                            }
                        }
                    }
                    assert_eq!(hits, 1, "{f}");
                    let (e, i) = f.epi_mono_factorize();
                    assert!(e.is_surjective() && i.is_injective());
                    assert_eq!(compose(&i, &e).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_maps(1, 0, MapKind::Epi), vec![map(&[0, 0], 0)]);
        assert_eq!(enumerate_maps(2, 1, MapKind::Epi).len(), 2);
        // 000, 001, 011, 111
        assert_eq!(enumerate_maps(2, 1, MapKind::All).len(), 4);
        assert_eq!(enumerate_maps(1, 2, MapKind::All).len(), 6);
    }

    #[test]
    fn enumeration_counts_match_binomials() {
        for m in 0..=6 {
            for n in 0..=6 {
                let all = enumerate_maps(m, n, MapKind::All);
                assert_eq!(all.len() as u128, binomial(m + n + 1, n));
                assert!(all.windows(2).all(|w| w[0] < w[1]), "not lexicographic");
                let epi = enumerate_maps(m, n, MapKind::Epi);
                let expected_epi = if n <= m { binomial(m, n) } else { 0 };
                assert_eq!(epi.len() as u128, expected_epi, "epi {m} {n}");
                assert!(epi.iter().all(PosetMap::is_surjective));
                let mono = enumerate_maps(m, n, MapKind::Mono);
                assert_eq!(mono.len() as u128, binomial(n + 1, m + 1), "mono {m} {n}");
                assert!(mono.iter().all(PosetMap::is_injective));
                // the filtered kinds are exactly the matching subsets of All
                let epi_filter: Vec<_> = all.iter().filter(|f| f.is_surjective()).cloned().collect();
                let mono_filter: Vec<_> = all.iter().filter(|f| f.is_injective()).cloned().collect();
                assert_eq!(epi, epi_filter);
                assert_eq!(mono, mono_filter);
            }
        }
    }

    #[test]
    fn factorization_of_composite_follows_the_square() {
        // epi part of g∘f is the epi part of f followed by the epi induced on images
        for f in enumerate_maps(3, 2, MapKind::All) {
            for g in enumerate_maps(2, 3, MapKind::All) {
                let gf = compose(&g, &f).unwrap();
                let (fe, fm) = f.epi_mono_factorize();
                let (he, hm) = compose(&g, &fm).unwrap().epi_mono_factorize();
                let via_square = (compose(&he, &fe).unwrap(), hm);
                assert_eq!(gf.epi_mono_factorize(), via_square);
            }
        }
    }

    #[test]
    fn coface_and_codegeneracy_shapes() {
        assert_eq!(PosetMap::coface(2, 1).values(), &[0, 2]);
        assert_eq!(PosetMap::codegeneracy(1, 0).values(), &[0, 0, 1]);
        assert_eq!(PosetMap::coface(1, 0).missing_values(), vec![0]);
        assert_eq!(PosetMap::codegeneracy(2, 1).repeat_positions(), vec![1]);
    }
}
