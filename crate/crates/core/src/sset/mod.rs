//! Truncated simplicial and semisimplicial sets stored as dense tables.
//!
//! An `n`-simplex is addressed by `(n, id)` where `id` is a dense index into
//! dimension `n`. Faces are stored for every simplex of positive dimension,
//! degeneracies for every simplex below the truncation dimension.

mod build;
pub mod category;
pub mod json;

use std::collections::HashMap;

use thiserror::Error;

use crate::delta::{enumerate_maps, DeltaError, MapKind, PosetMap};

pub use build::{
    collapse, disjoint_union, nerve, product, random_semisimplicial, standard_simplex,
    standard_simplex_boundary, sub_simplicial_set, Quotient, Subcomplex,
};
pub use category::{CategoryError, FiniteCategory, Functor};

/// Truncation used when a caller does not pick one.
pub const DEFAULT_TRUNC_DIM: usize = 6;

#[derive(Debug, Error)]
pub enum SSetError {
    #[error("dimension {dim} exceeds truncation dimension {trunc_dim}")]
    Truncation { dim: usize, trunc_dim: usize },
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("simplicial identity violated: {0}")]
    Identity(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("subcomplex is not closed: {0}")]
    NotClosed(String),
    #[error("subcomplexes overlap at dimension {dim}, simplex {id}")]
    Overlap { dim: usize, id: usize },
    #[error("truncation mismatch: {0} vs {1}")]
    TruncMismatch(usize, usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

/// A presheaf on injective monotone maps, truncated at `trunc_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimplicialSet {
    trunc_dim: usize,
    counts: Vec<usize>,
    /// `faces[n][x * (n + 1) + i]` is `d_i` of the `n`-simplex `x`; empty for `n = 0`.
    faces: Vec<Vec<usize>>,
}

impl SemisimplicialSet {
    pub fn new(trunc_dim: usize, counts: Vec<usize>, faces: Vec<Vec<usize>>) -> Result<Self, SSetError> {
        let set = Self::from_tables(trunc_dim, counts, faces)?;
        set.validate()?;
        Ok(set)
    }

    /// Checks shapes and references but not the face identities.
    pub(crate) fn from_tables(trunc_dim: usize, counts: Vec<usize>, faces: Vec<Vec<usize>>) -> Result<Self, SSetError> {
        if counts.len() != trunc_dim + 1 || faces.len() != trunc_dim + 1 {
            return Err(SSetError::Shape(format!(
                "expected {} dimensions, got {} counts and {} face tables",
                trunc_dim + 1,
                counts.len(),
                faces.len()
            )));
        }
        for n in 0..=trunc_dim {
            let expected = if n == 0 { 0 } else { counts[n] * (n + 1) };
            if faces[n].len() != expected {
                return Err(SSetError::Shape(format!(
                    "dimension {n}: face table has {} entries, expected {expected}",
                    faces[n].len()
                )));
            }
            if n > 0 {
                if let Some(pos) = faces[n].iter().position(|&f| f >= counts[n - 1]) {
                    return Err(SSetError::Shape(format!(
                        "dimension {n}: simplex {} face {} refers to missing {}-simplex {}",
                        pos / (n + 1),
                        pos % (n + 1),
                        n - 1,
                        faces[n][pos]
                    )));
                }
            }
        }
        Ok(Self {
            trunc_dim,
            counts,
            faces,
        })
    }

    pub fn trunc_dim(&self) -> usize {
        self.trunc_dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        debug_assert!(n >= 1 && i <= n);
        self.faces[n][x * (n + 1) + i]
    }

    pub fn faces_of(&self, n: usize, x: usize) -> &[usize] {
        if n == 0 {
            return &[];
        }
        &self.faces[n][x * (n + 1)..(x + 1) * (n + 1)]
    }

    pub(crate) fn face_table(&self, n: usize) -> &[usize] {
        &self.faces[n]
    }

    /// Pulls the `n`-simplex `x` back along an injective map `[m] -> [n]`.
    pub fn act_mono(&self, n: usize, x: usize, f: &PosetMap) -> usize {
        debug_assert!(f.is_injective() && f.target_dim() == n);
        let mut dim = n;
        let mut cur = x;
        // removing the largest missing vertex first keeps the smaller indices valid
        for &j in f.missing_values().iter().rev() {
            cur = self.face(dim, cur, j);
            dim -= 1;
        }
        cur
    }

    /// Vertices of the `n`-simplex `x`, in order.
    pub fn vertices(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n).map(|v| self.act_mono(n, x, &PosetMap::vertex(n, v))).collect()
    }

    pub fn validate(&self) -> Result<(), SSetError> {
        match self.identity_violations(1).into_iter().next() {
            Some(v) => Err(SSetError::Identity(v)),
            None => Ok(()),
        }
    }

    /// Violations of `d_i d_j = d_{j-1} d_i` for `i < j`, up to `limit`.
    pub fn identity_violations(&self, limit: usize) -> Vec<String> {
        let mut out = Vec::new();
        for n in 2..=self.trunc_dim {
            for x in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, self.face(n, x, j), i);
                        let rhs = self.face(n - 1, self.face(n, x, i), j - 1);
                        if lhs != rhs {
                            out.push(format!("d{i} d{j} != d{} d{i} on {n}-simplex {x}", j - 1));
                            if out.len() >= limit {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn truncate(&self, d: usize) -> SemisimplicialSet {
        if d >= self.trunc_dim {
            return self.clone();
        }
        Self {
            trunc_dim: d,
            counts: self.counts[..=d].to_vec(),
            faces: self.faces[..=d].to_vec(),
        }
    }

    pub fn total_simplices(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// A presheaf on all monotone maps, truncated at `trunc_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    base: SemisimplicialSet,
    /// `degens[n][x * (n + 1) + i]` is `s_i` of the `n`-simplex `x`; empty at the top.
    degens: Vec<Vec<usize>>,
}

impl SimplicialSet {
    pub fn new(
        trunc_dim: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<usize>>,
        degens: Vec<Vec<usize>>,
    ) -> Result<Self, SSetError> {
        let set = Self::from_tables(trunc_dim, counts, faces, degens)?;
        set.validate()?;
        Ok(set)
    }

    pub(crate) fn from_tables(
        trunc_dim: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<usize>>,
        degens: Vec<Vec<usize>>,
    ) -> Result<Self, SSetError> {
        let base = SemisimplicialSet::from_tables(trunc_dim, counts, faces)?;
        if degens.len() != trunc_dim + 1 {
            return Err(SSetError::Shape(format!(
                "expected {} degeneracy tables, got {}",
                trunc_dim + 1,
                degens.len()
            )));
        }
        for n in 0..=trunc_dim {
            let expected = if n == trunc_dim { 0 } else { base.count(n) * (n + 1) };
            if degens[n].len() != expected {
                return Err(SSetError::Shape(format!(
                    "dimension {n}: degeneracy table has {} entries, expected {expected}",
                    degens[n].len()
                )));
            }
            if n < trunc_dim {
                if let Some(pos) = degens[n].iter().position(|&s| s >= base.count(n + 1)) {
                    return Err(SSetError::Shape(format!(
                        "dimension {n}: simplex {} degeneracy {} refers to missing {}-simplex {}",
                        pos / (n + 1),
                        pos % (n + 1),
                        n + 1,
                        degens[n][pos]
                    )));
                }
            }
        }
        Ok(Self { base, degens })
    }

    pub fn as_semi(&self) -> &SemisimplicialSet {
        &self.base
    }

    pub fn trunc_dim(&self) -> usize {
        self.base.trunc_dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.base.count(n)
    }

    pub fn counts(&self) -> &[usize] {
        self.base.counts()
    }

    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        self.base.face(n, x, i)
    }

    pub fn faces_of(&self, n: usize, x: usize) -> &[usize] {
        self.base.faces_of(n, x)
    }

    pub fn degen(&self, n: usize, x: usize, i: usize) -> usize {
        debug_assert!(n < self.trunc_dim() && i <= n);
        self.degens[n][x * (n + 1) + i]
    }

    pub fn degens_of(&self, n: usize, x: usize) -> &[usize] {
        if n >= self.trunc_dim() {
            return &[];
        }
        &self.degens[n][x * (n + 1)..(x + 1) * (n + 1)]
    }

    pub(crate) fn degen_table(&self, n: usize) -> &[usize] {
        &self.degens[n]
    }

    pub fn act_mono(&self, n: usize, x: usize, f: &PosetMap) -> usize {
        self.base.act_mono(n, x, f)
    }

    pub fn vertices(&self, n: usize, x: usize) -> Vec<usize> {
        self.base.vertices(n, x)
    }

    /// Pulls the `n`-simplex `x` back along an arbitrary monotone `f : [m] -> [n]`.
    pub fn act(&self, n: usize, x: usize, f: &PosetMap) -> Result<usize, SSetError> {
        debug_assert_eq!(f.target_dim(), n);
        let m = f.source_dim();
        if m > self.trunc_dim() {
            return Err(SSetError::Truncation {
                dim: m,
                trunc_dim: self.trunc_dim(),
            });
        }
        let (epi, mono) = f.epi_mono_factorize();
        let mut cur = self.act_mono(n, x, &mono);
        Ok({
            let mut dim = epi.target_dim();
            for i in epi.repeat_positions() {
                cur = self.degen(dim, cur, i);
                dim += 1;
            }
            cur
        })
    }

    /// Applies a surjection `[m] ->> [n]` to the `n`-simplex `y`.
    pub fn degenerate(&self, n: usize, y: usize, s: &PosetMap) -> Result<usize, SSetError> {
        debug_assert!(s.is_surjective());
        self.act(n, y, s)
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        n > 0 && (0..n).any(|i| self.degen(n - 1, self.face(n, x, i), i) == x)
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.count(n)).filter(|&x| !self.is_degenerate(n, x)).collect()
    }

    /// The unique `(y, s)` with `x = s*(y)` and `y` nondegenerate.
    pub fn normalize(&self, n: usize, x: usize) -> Result<(usize, PosetMap), SSetError> {
        let mut dim = n;
        let mut cur = x;
        let mut surj = PosetMap::identity(n);
        'outer: loop {
            for i in 0..dim {
                let face = self.face(dim, cur, i);
                if self.degen(dim - 1, face, i) == cur {
                    // cur = s_i(face), so the accumulated surjection picks up s^i
                    let step = PosetMap::codegeneracy(dim - 1, i);
                    surj = step.after(&surj)?;
                    cur = face;
                    dim -= 1;
                    continue 'outer;
                }
            }
            break;
        }
        if self.act(dim, cur, &surj)? != x {
            return Err(SSetError::Integrity(format!(
                "{n}-simplex {x} does not equal {surj} applied to its normal form {cur}"
            )));
        }
        Ok((cur, surj))
    }

    pub fn validate(&self) -> Result<(), SSetError> {
        match self.identity_violations(1).into_iter().next() {
            Some(v) => Err(SSetError::Identity(v)),
            None => Ok(()),
        }
    }

    /// Violations of the full simplicial identities, up to `limit`.
    pub fn identity_violations(&self, limit: usize) -> Vec<String> {
        let mut out = self.base.identity_violations(limit);
        let d = self.trunc_dim();
        let push = |msg: String, out: &mut Vec<String>| -> bool {
            out.push(msg);
            out.len() >= limit
        };
        if out.len() >= limit {
            return out;
        }
        for n in 0..d {
            for x in 0..self.count(n) {
                for j in 0..=n {
                    let sx = self.degen(n, x, j);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, sx, i);
                        let rhs = if i < j {
                            self.degen(n - 1, self.face(n, x, i), j - 1)
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degen(n - 1, self.face(n, x, i - 1), j)
                        };
                        if lhs != rhs && push(format!("d{i} s{j} on {n}-simplex {x}"), &mut out) {
                            return out;
                        }
                    }
                    if n + 2 <= d {
                        for i in 0..=j {
                            let lhs = self.degen(n + 1, sx, i);
                            let rhs = self.degen(n + 1, self.degen(n, x, i), j + 1);
                            if lhs != rhs && push(format!("s{i} s{j} != s{} s{i} on {n}-simplex {x}", j + 1), &mut out) {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Brute-force Eilenberg–Zilber check: every simplex is `s*(y)` for exactly
    /// one nondegenerate `y` and surjection `s`. Returns violations.
    pub fn eilenberg_zilber_violations(&self, limit: usize) -> Vec<String> {
        let d = self.trunc_dim();
        let mut hits: Vec<Vec<u32>> = (0..=d).map(|n| vec![0; self.count(n)]).collect();
        for p in 0..=d {
            for y in self.nondegenerate(p) {
                for n in p..=d {
                    for s in enumerate_maps(n, p, MapKind::Epi) {
                        match self.act(p, y, &s) {
                            Ok(x) => hits[n][x] += 1,
                            Err(e) => return vec![e.to_string()],
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (n, row) in hits.iter().enumerate() {
            for (x, &h) in row.iter().enumerate() {
                if h != 1 {
                    out.push(format!("{n}-simplex {x} has {h} nondegenerate representations"));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    pub fn truncate(&self, d: usize) -> SimplicialSet {
        if d >= self.trunc_dim() {
            return self.clone();
        }
        let mut degens = self.degens[..=d].to_vec();
        degens[d].clear();
        Self {
            base: self.base.truncate(d),
            degens,
        }
    }

    /// Drops the degeneracy tables.
    pub fn restrict(&self) -> SemisimplicialSet {
        self.base.clone()
    }

    pub fn total_simplices(&self) -> usize {
        self.base.total_simplices()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.trunc_dim()).map(|n| self.nondegenerate(n).len()).collect()
    }
}

/// A dimensionwise map of simplex tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexMap {
    pub maps: Vec<Vec<usize>>,
}

impl SimplexMap {
    pub fn identity(counts: &[usize]) -> Self {
        Self {
            maps: counts.iter().map(|&c| (0..c).collect()).collect(),
        }
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.maps[n][x]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &SimplexMap) -> SimplexMap {
        SimplexMap {
            maps: inner
                .maps
                .iter()
                .enumerate()
                .map(|(n, row)| row.iter().map(|&x| self.maps[n][x]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|row| {
            let mut seen = std::collections::HashSet::new();
            row.iter().all(|x| seen.insert(*x))
        })
    }

    pub fn is_surjective_onto(&self, counts: &[usize]) -> bool {
        self.maps.iter().zip(counts).all(|(row, &c)| {
            let mut hit = vec![false; c];
            for &x in row {
                hit[x] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    fn shape_errors(&self, src: &SemisimplicialSet, tgt: &SemisimplicialSet) -> Option<String> {
        if self.maps.len() != src.trunc_dim() + 1 || tgt.trunc_dim() != src.trunc_dim() {
            return Some("dimension mismatch".into());
        }
        for n in 0..=src.trunc_dim() {
            if self.maps[n].len() != src.count(n) {
                return Some(format!("dimension {n}: map has wrong length"));
            }
            if self.maps[n].iter().any(|&y| y >= tgt.count(n)) {
                return Some(format!("dimension {n}: map leaves the target"));
            }
        }
        None
    }

    /// Places where the map fails to commute with faces.
    pub fn semisimplicial_violations(&self, src: &SemisimplicialSet, tgt: &SemisimplicialSet) -> Vec<String> {
        if let Some(e) = self.shape_errors(src, tgt) {
            return vec![e];
        }
        let mut out = Vec::new();
        for n in 1..=src.trunc_dim() {
            for x in 0..src.count(n) {
                for i in 0..=n {
                    if self.maps[n - 1][src.face(n, x, i)] != tgt.face(n, self.maps[n][x], i) {
                        out.push(format!("d{i} on {n}-simplex {x}"));
                    }
                }
            }
        }
        out
    }

    /// Places where the map fails to commute with faces or degeneracies.
    pub fn simplicial_violations(&self, src: &SimplicialSet, tgt: &SimplicialSet) -> Vec<String> {
        let mut out = self.semisimplicial_violations(src.as_semi(), tgt.as_semi());
        if !out.is_empty() && self.shape_errors(src.as_semi(), tgt.as_semi()).is_some() {
            return out;
        }
        for n in 0..src.trunc_dim() {
            for x in 0..src.count(n) {
                for i in 0..=n {
                    if self.maps[n + 1][src.degen(n, x, i)] != tgt.degen(n, self.maps[n][x], i) {
                        out.push(format!("s{i} on {n}-simplex {x}"));
                    }
                }
            }
        }
        out
    }
}

/// Index from simplex labels to dense ids, one table per dimension.
#[derive(Clone, Debug)]
pub(crate) struct LabelIndex<L> {
    pub labels: Vec<Vec<L>>,
    lookup: Vec<HashMap<L, usize>>,
}

impl<L: Clone + Eq + std::hash::Hash> LabelIndex<L> {
    pub fn new(labels: Vec<Vec<L>>) -> Self {
        let lookup = labels
            .iter()
            .map(|row| row.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect())
            .collect();
        Self { labels, lookup }
    }

    pub fn id(&self, n: usize, label: &L) -> Option<usize> {
        self.lookup[n].get(label).copied()
    }

    /// Builds a simplicial set whose structure maps act on labels.
    pub fn build_simplicial(
        &self,
        face: impl Fn(usize, &L, usize) -> L,
        degen: impl Fn(usize, &L, usize) -> L,
    ) -> Result<SimplicialSet, SSetError> {
        let d = self.labels.len() - 1;
        let semi = self.build_semisimplicial(face)?;
        let mut degens = vec![Vec::new(); d + 1];
        for n in 0..d {
            let mut table = Vec::with_capacity(self.labels[n].len() * (n + 1));
            for l in &self.labels[n] {
                for i in 0..=n {
                    let img = degen(n, l, i);
                    table.push(self.id(n + 1, &img).ok_or_else(|| {
                        SSetError::Integrity(format!("degeneracy s{i} of a {n}-simplex leaves the table"))
                    })?);
                }
            }
            degens[n] = table;
        }
        SimplicialSet::from_tables(d, semi.counts, semi.faces, degens)
    }

    pub fn build_semisimplicial(&self, face: impl Fn(usize, &L, usize) -> L) -> Result<SemisimplicialSet, SSetError> {
        let d = self.labels.len() - 1;
        let counts: Vec<usize> = self.labels.iter().map(Vec::len).collect();
        let mut faces = vec![Vec::new(); d + 1];
        for n in 1..=d {
            let mut table = Vec::with_capacity(counts[n] * (n + 1));
            for l in &self.labels[n] {
                for i in 0..=n {
                    let img = face(n, l, i);
                    table.push(self.id(n - 1, &img).ok_or_else(|| {
                        SSetError::Integrity(format!("face d{i} of a {n}-simplex leaves the table"))
                    })?);
                }
            }
            faces[n] = table;
        }
        SemisimplicialSet::from_tables(d, counts, faces)
    }
}
