//! Necklaces over a simplicial set, the bounded categories `(Nec ↓ X)_{x,y}`,
//! their full subcategories of totally nondegenerate and single-bead
//! necklaces, finality checks and mapping-space probes.
//!
//! A necklace with bead dimensions `m_0, …, m_a` has vertices `0..=M`,
//! `M = Σ m_i`, and bead `i` spans the interval `[p_i, p_{i+1}]`. A necklace
//! map is a monotone vertex map fixing both endpoints under which every bead
//! lands inside a single bead of the target. The one-vertex necklace is stored
//! as a single bead of dimension zero.

mod finality;
mod reduction;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::delta::{enumerate_maps, MapKind, PosetMap};
use crate::sset::{FiniteCategory, Functor, SSetError, SimplicialSet};

pub use finality::{check_finality, fiber_category, FiberSummary, FinalityReport};
pub use reduction::{
    f_iso_check, finality_chain, localization_pushout, mapping_space_probe, FIsoReport, FinalityChain, Localization, MappingSpaceReport, ProbeBounds,
    StageSummary,
};

/// Default bound on the total dimension of a necklace.
pub const DEFAULT_BOUND: usize = 3;

#[derive(Debug, Error)]
pub enum NecklaceError {
    #[error("vertex {vertex} is not one of the {vertices} vertices")]
    Vertex { vertex: usize, vertices: usize },
    #[error("necklace bound {bound} exceeds truncation dimension {trunc_dim}")]
    Bound { bound: usize, trunc_dim: usize },
    #[error("endpoints {x} and {y} are not ordered in [{k}]")]
    Endpoints { x: usize, y: usize, k: usize },
    #[error(transparent)]
    Data(#[from] SSetError),
    #[error(transparent)]
    Homotopy(#[from] crate::homotopy::HomotopyError),
}

/// Bead dimensions of a necklace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Necklace {
    pub beads: Vec<usize>,
}

impl Necklace {
    pub fn total_dim(&self) -> usize {
        self.beads.iter().sum()
    }

    /// Positions `p_0 = 0, …, p_{a+1} = M` of the joins, endpoints included.
    pub fn joins(&self) -> Vec<usize> {
        let mut out = vec![0];
        for &m in &self.beads {
            out.push(out[out.len() - 1] + m);
        }
        out
    }

    /// The bead whose interval contains both `lo` and `hi`, if any.
    fn bead_containing(&self, lo: usize, hi: usize) -> Option<usize> {
        let joins = self.joins();
        (0..self.beads.len()).find(|&j| joins[j] <= lo && hi <= joins[j + 1])
    }
}

/// A necklace with a simplex of `X` for every bead, joined end to end.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NecklaceObject {
    pub necklace: Necklace,
    /// `simplices[i]` is an `m_i`-simplex of `X`.
    pub simplices: Vec<usize>,
}

impl NecklaceObject {
    pub fn total_dim(&self) -> usize {
        self.necklace.total_dim()
    }

    pub fn beads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.necklace.beads.iter().copied().zip(self.simplices.iter().copied())
    }

    pub fn is_trivial(&self) -> bool {
        self.necklace.beads == [0]
    }

    /// Vertices of `X` hit by the necklace, in order along the necklace.
    pub fn vertex_images(&self, x: &SimplicialSet) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, (m, s)) in self.beads().enumerate() {
            let vs = x.vertices(m, s);
            out.extend_from_slice(if i == 0 { &vs[..] } else { &vs[1..] });
        }
        out
    }

    pub fn label(&self) -> String {
        self.beads().map(|(m, s)| format!("{m}:{s}")).collect::<Vec<_>>().join("|")
    }
}

/// A bounded `(Nec ↓ X)_{x,y}` or one of its full subcategories, with the
/// vertex map behind every morphism.
#[derive(Clone, Debug)]
pub struct NecklaceCategory {
    pub from: usize,
    pub to: usize,
    pub bound: usize,
    pub objects: Vec<NecklaceObject>,
    /// `maps[f]` is the vertex map of morphism `f`.
    pub maps: Vec<Vec<usize>>,
    pub category: FiniteCategory,
}

impl NecklaceCategory {
    /// The full subcategory on the objects satisfying `keep`, with its inclusion.
    pub fn full_subcategory(&self, keep: impl Fn(&NecklaceObject) -> bool) -> (NecklaceCategory, Functor) {
        let chosen: Vec<usize> = (0..self.objects.len()).filter(|&o| keep(&self.objects[o])).collect();
        let (category, inclusion) = self.category.full_subcategory(&chosen);
        let sub = NecklaceCategory {
            from: self.from,
            to: self.to,
            bound: self.bound,
            objects: chosen.iter().map(|&o| self.objects[o].clone()).collect(),
            maps: inclusion.morphism_map.iter().map(|&f| self.maps[f].clone()).collect(),
            category,
        };
        (sub, inclusion)
    }

    /// Morphisms whose vertex map fails the independent necklace-map check.
    pub fn revalidate(&self, x: &SimplicialSet) -> Vec<String> {
        let mut bad = Vec::new();
        for (f, map) in self.maps.iter().enumerate() {
            let (s, t) = (self.category.source(f), self.category.target(f));
            if !is_map_over(x, &self.objects[s], &self.objects[t], map) {
                bad.push(format!("morphism {f}: {} -> {}", self.objects[s].label(), self.objects[t].label()));
            }
        }
        bad
    }
}

/// All necklaces over `x` from `from` to `to` with total dimension at most `bound`.
pub fn comma_category(x: &SimplicialSet, from: usize, to: usize, bound: usize) -> Result<NecklaceCategory, NecklaceError> {
    comma_category_with(x, from, to, bound, |_| true)
}

/// The full subcategory of `comma_category` on objects satisfying `keep`,
/// built without enumerating the others' morphisms.
pub fn comma_category_with(
    x: &SimplicialSet,
    from: usize,
    to: usize,
    bound: usize,
    keep: impl Fn(&NecklaceObject) -> bool,
) -> Result<NecklaceCategory, NecklaceError> {
    for v in [from, to] {
        if v >= x.count(0) {
            return Err(NecklaceError::Vertex { vertex: v, vertices: x.count(0) });
        }
    }
    if bound > x.trunc_dim() {
        return Err(NecklaceError::Bound { bound, trunc_dim: x.trunc_dim() });
    }
    let mut objects: Vec<NecklaceObject> = enumerate_objects(x, from, to, bound).into_iter().filter(|o| keep(o)).collect();
    objects.sort_by(|a, b| (a.total_dim(), &a.necklace, &a.simplices).cmp(&(b.total_dim(), &b.necklace, &b.simplices)));
    let labels = objects.iter().map(NecklaceObject::label).collect();
    let arrows: Vec<Vec<Vec<Vec<usize>>>> = objects
        .iter()
        .map(|a| objects.iter().map(|b| necklace_maps(x, a, b)).collect())
        .collect();
    let category = FiniteCategory::from_arrows(
        labels,
        |a, b| arrows[a][b].clone(),
        |a| (0..=objects[a].total_dim()).collect::<Vec<usize>>(),
        |g, f| f.iter().map(|&v| g[v]).collect(),
    );
    // `from_arrows` numbers morphisms by source, then target, then list order
    let maps: Vec<Vec<usize>> = arrows.into_iter().flatten().flatten().collect();
    let out = NecklaceCategory { from, to, bound, objects, maps, category };
    Ok(out)
}

fn enumerate_objects(x: &SimplicialSet, from: usize, to: usize, bound: usize) -> Vec<NecklaceObject> {
    // simplices of each positive dimension grouped by first vertex, with their last vertex
    let mut starting: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); x.count(0)]; bound + 1];
    for (m, by_start) in starting.iter_mut().enumerate().skip(1) {
        for s in 0..x.count(m) {
            let vs = x.vertices(m, s);
            by_start[vs[0]].push((s, vs[m]));
        }
    }
    let mut out = Vec::new();
    if from == to {
        out.push(NecklaceObject {
            necklace: Necklace { beads: vec![0] },
            simplices: vec![from],
        });
    }
    let mut beads = Vec::new();
    let mut simplices = Vec::new();
    extend(&starting, from, to, bound, &mut beads, &mut simplices, &mut out);
    out
}

fn extend(
    starting: &[Vec<Vec<(usize, usize)>>],
    at: usize,
    to: usize,
    budget: usize,
    beads: &mut Vec<usize>,
    simplices: &mut Vec<usize>,
    out: &mut Vec<NecklaceObject>,
) {
    for m in 1..=budget {
        for &(s, end) in &starting[m][at] {
            beads.push(m);
            simplices.push(s);
            if end == to {
                out.push(NecklaceObject {
                    necklace: Necklace { beads: beads.clone() },
                    simplices: simplices.clone(),
                });
            }
            extend(starting, end, to, budget - m, beads, simplices, out);
            beads.pop();
            simplices.pop();
        }
    }
}

/// Necklace maps `s -> t` over `x`, bead by bead, in lexicographic order.
pub fn necklace_maps(x: &SimplicialSet, s: &NecklaceObject, t: &NecklaceObject) -> Vec<Vec<usize>> {
    let mut found = BTreeSet::new();
    let mut values = vec![0];
    bead_step(x, s, t, 0, &mut values, &mut found);
    found.into_iter().collect()
}

fn bead_step(
    x: &SimplicialSet,
    s: &NecklaceObject,
    t: &NecklaceObject,
    bead: usize,
    values: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let target_end = t.total_dim();
    if bead == s.necklace.beads.len() {
        if values[values.len() - 1] == target_end {
            found.insert(values.clone());
        }
        return;
    }
    let (m, sigma) = (s.necklace.beads[bead], s.simplices[bead]);
    let start = values[values.len() - 1];
    let joins = t.necklace.joins();
    for j in 0..t.necklace.beads.len() {
        if !(joins[j] <= start && start <= joins[j + 1]) {
            continue;
        }
        let (lo, hi) = (joins[j], joins[j + 1]);
        let (mj, tau) = (t.necklace.beads[j], t.simplices[j]);
        // monotone continuations of length m inside [start, hi]
        for tail in enumerate_maps(m, hi - start, MapKind::All) {
            if tail.apply(0) != 0 {
                continue;
            }
            let local: Vec<usize> = tail.values().iter().map(|&v| v + start - lo).collect();
            let psi = PosetMap::new(local, mj + 1).expect("monotone");
            if x.act(mj, tau, &psi).ok() != Some(sigma) {
                continue;
            }
            let before = values.len();
            values.extend(tail.values()[1..].iter().map(|&v| v + start));
            bead_step(x, s, t, bead + 1, values, found);
            values.truncate(before);
        }
    }
}

/// Direct check that `map` is a necklace map over `x`: endpoints fixed,
/// monotone, every bead inside one target bead, and every vertex and every
/// bead pulled back to the right simplex.
pub fn is_map_over(x: &SimplicialSet, s: &NecklaceObject, t: &NecklaceObject, map: &[usize]) -> bool {
    let (ms, mt) = (s.total_dim(), t.total_dim());
    if map.len() != ms + 1 || map[0] != 0 || map[ms] != mt || map.windows(2).any(|w| w[0] > w[1]) {
        return false;
    }
    let sv = s.vertex_images(x);
    let tv = t.vertex_images(x);
    if (0..=ms).any(|v| tv[map[v]] != sv[v]) {
        return false;
    }
    let sj = s.necklace.joins();
    let tj = t.necklace.joins();
    for (i, (m, sigma)) in s.beads().enumerate() {
        let (lo, hi) = (map[sj[i]], map[sj[i + 1]]);
        let Some(j) = t.necklace.bead_containing(lo, hi) else {
            return false;
        };
        let local: Vec<usize> = (sj[i]..=sj[i + 1]).map(|v| map[v] - tj[j]).collect();
        let Ok(psi) = PosetMap::new(local, t.necklace.beads[j] + 1) else {
            return false;
        };
        debug_assert_eq!(psi.source_dim(), m);
        if x.act(t.necklace.beads[j], t.simplices[j], &psi).ok() != Some(sigma) {
            return false;
        }
    }
    true
}

/// `𝒩`: every bead is a nondegenerate simplex.
pub fn full_subcategory_n(c: &NecklaceCategory, x: &SimplicialSet) -> (NecklaceCategory, Functor) {
    c.full_subcategory(|o| is_totally_nondegenerate(x, o))
}

/// `ℱ`: a single nondegenerate bead hitting every vertex in `required`.
pub fn full_subcategory_f(c: &NecklaceCategory, x: &SimplicialSet, required: &[usize]) -> (NecklaceCategory, Functor) {
    c.full_subcategory(|o| is_flag(x, o, required))
}

pub fn is_totally_nondegenerate(x: &SimplicialSet, o: &NecklaceObject) -> bool {
    o.beads().all(|(m, s)| !x.is_degenerate(m, s))
}

pub fn is_flag(x: &SimplicialSet, o: &NecklaceObject, required: &[usize]) -> bool {
    if o.necklace.beads.len() != 1 || !is_totally_nondegenerate(x, o) {
        return false;
    }
    let hit = o.vertex_images(x);
    required.iter().all(|v| hit.contains(v))
}
