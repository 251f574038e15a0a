//! The localization of `plus(Δ^k_inj)` at its vertex loops, the single-bead
//! category as a product of injection categories, and the mapping-space
//! probe chaining `ℱ ⊂ 𝒩 ⊂ (Nec ↓ 𝒫)`.

use std::collections::HashMap;

use serde::Serialize;

use super::{
    comma_category, comma_category_with, full_subcategory_n, is_flag, is_totally_nondegenerate, check_finality,
    FinalityReport, NecklaceCategory, NecklaceError,
};
use crate::adjunction::{delta_inj, plus, PlusSet};
use crate::delta::{enumerate_maps, MapKind, PosetMap};
use crate::homotopy::{contractibility_probe, HomologyReport, ProbeReport};
use crate::sset::{collapse, nerve, FiniteCategory, Functor, SimplexMap, SimplicialSet, Subcomplex};

/// `𝒫`: `plus(Δ^k_inj)` with each vertex's copy of `plus(Δ^0_inj)` collapsed to a point.
#[derive(Clone, Debug)]
pub struct Localization {
    pub k: usize,
    pub plus: PlusSet,
    pub set: SimplicialSet,
    pub quotient: SimplexMap,
    /// `vertex_of[i]` is the vertex of `set` coming from vertex `i` of `Δ^k`.
    pub vertex_of: Vec<usize>,
}

pub fn localization_pushout(k: usize, trunc_dim: usize) -> Result<Localization, NecklaceError> {
    let p = plus(&delta_inj(k, trunc_dim)?);
    // vertex i of plus(Δ^k_inj) is the pair (i, id_[0]), which has id i
    let loops: Vec<Subcomplex> = (0..=k)
        .map(|i| Subcomplex::from_predicate(&p.set, |n, s| p.set.vertices(n, s).iter().all(|&v| v == i)))
        .collect();
    let q = collapse(&p.set, &loops)?;
    let vertex_of = (0..=k).map(|i| q.map.apply(0, i)).collect();
    Ok(Localization {
        k,
        plus: p,
        set: q.set,
        quotient: q.map,
        vertex_of,
    })
}

/// A factor `[0], …, [max]` of injections, possibly with an endpoint held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pin {
    Free,
    First,
    Last,
    Both,
}

impl Pin {
    fn arrows(self, a: usize, b: usize) -> Vec<PosetMap> {
        enumerate_maps(a, b, MapKind::Mono)
            .into_iter()
            .filter(|g| {
                let first = g.apply(0) == 0;
                let last = g.apply(a) == b;
                match self {
                    Pin::Free => true,
                    Pin::First => first,
                    Pin::Last => last,
                    Pin::Both => first && last,
                }
            })
            .collect()
    }
}

/// `Π_i factor_i` restricted to tuples with `Σ (m_i + 1) - 1 ≤ max_m`, built
/// directly on the bounded tuples. Morphism ids follow the enumeration order
/// of [`FiniteCategory::from_arrows`].
struct BoundedProduct {
    category: FiniteCategory,
    object_index: HashMap<Vec<usize>, usize>,
    morphism_index: HashMap<Vec<PosetMap>, usize>,
}

impl BoundedProduct {
    fn new(pins: Vec<Pin>, max_m: usize) -> Self {
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in &pins {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..=max_m).map(move |m| {
                        let mut next = t.clone();
                        next.push(m);
                        next
                    })
                })
                .collect();
        }
        tuples.retain(|dims| dims.iter().map(|m| m + 1).sum::<usize>() - 1 <= max_m);
        let arrows = |a: &[usize], b: &[usize]| -> Vec<Vec<PosetMap>> {
            let mut out: Vec<Vec<PosetMap>> = vec![Vec::new()];
            for ((pin, &x), &y) in pins.iter().zip(a).zip(b) {
                let choices = pin.arrows(x, y);
                out = out
                    .into_iter()
                    .flat_map(|t| {
                        choices.iter().map(move |g| {
                            let mut next = t.clone();
                            next.push(g.clone());
                            next
                        })
                    })
                    .collect();
            }
            out
        };
        let mut morphism_index = HashMap::new();
        for a in &tuples {
            for b in &tuples {
                for arrow in arrows(a, b) {
                    let id = morphism_index.len();
                    morphism_index.insert(arrow, id);
                }
            }
        }
        let category = FiniteCategory::from_arrows(
            tuples.iter().map(|dims| format!("{dims:?}")).collect(),
            |a, b| arrows(&tuples[a], &tuples[b]),
            |a| tuples[a].iter().map(|&m| PosetMap::identity(m)).collect(),
            |g: &Vec<PosetMap>, f: &Vec<PosetMap>| {
                g.iter().zip(f).map(|(g, f)| g.after(f).expect("composable maps")).collect()
            },
        );
        debug_assert_eq!(category.morphism_count(), morphism_index.len());
        let object_index = tuples.into_iter().enumerate().map(|(i, dims)| (dims, i)).collect();
        Self { category, object_index, morphism_index }
    }

    fn object(&self, dims: &[usize]) -> Option<usize> {
        self.object_index.get(dims).copied()
    }

    fn morphism(&self, maps: &[PosetMap]) -> Option<usize> {
        self.morphism_index.get(maps).copied()
    }
}

/// Sends a single-bead object with vertex word `f` to the sizes of the fibers
/// of `f`, and a vertex map to its restrictions to those fibers.
fn fiber_functor(flags: &NecklaceCategory, words: &[Vec<usize>], k: usize, target: &BoundedProduct) -> Option<Functor> {
    let positions = |w: &[usize], i: usize| -> Vec<usize> { (0..w.len()).filter(|&p| w[p] == i).collect() };
    let mut object_map = Vec::new();
    for w in words {
        let dims: Vec<usize> = (0..=k).map(|i| positions(w, i).len() - 1).collect();
        object_map.push(target.object(&dims)?);
    }
    let mut morphism_map = Vec::new();
    for (f, map) in flags.maps.iter().enumerate() {
        let (s, t) = (flags.category.source(f), flags.category.target(f));
        let mut parts = Vec::new();
        for i in 0..=k {
            let (src, tgt) = (positions(&words[s], i), positions(&words[t], i));
            let values: Option<Vec<usize>> = src.iter().map(|&p| tgt.iter().position(|&q| q == map[p])).collect();
            parts.push(PosetMap::new(values?, tgt.len()).ok()?);
        }
        morphism_map.push(target.morphism(&parts)?);
    }
    Some(Functor { object_map, morphism_map })
}

#[derive(Clone, Debug, Serialize)]
pub struct FIsoReport {
    pub k: usize,
    pub max_m: usize,
    pub flag_objects: usize,
    pub flag_morphisms: usize,
    pub product_objects: usize,
    pub product_morphisms: usize,
    /// The fiber-size assignment is a functor into the injection product.
    pub functor_defined: bool,
    pub bijective_on_objects: bool,
    pub fully_faithful: bool,
    /// Pairs of objects whose hom-sets have different sizes on the two sides.
    pub hom_mismatches: usize,
    pub first_mismatch: Option<String>,
    /// The same comparison against the product whose first factor fixes the
    /// initial vertex and whose last factor fixes the final vertex.
    pub pinned_product_morphisms: usize,
    pub pinned_isomorphism: bool,
    pub passed: bool,
}

/// Compares the single-bead category over `plus(Δ^k_inj)` from vertex `0` to
/// vertex `k`, bead dimension at most `max_m`, with the product of `1 + k`
/// copies of the category of injections between `[0], …, [max_m]`.
pub fn f_iso_check(k: usize, max_m: usize) -> Result<FIsoReport, NecklaceError> {
    let c = plus(&delta_inj(k, max_m)?).set;
    let all: Vec<usize> = (0..=k).collect();
    let flags = comma_category_with(&c, 0, k, max_m, |o| is_flag(&c, o, &all))?;
    let words: Vec<Vec<usize>> = flags.objects.iter().map(|o| o.vertex_images(&c)).collect();

    let free = BoundedProduct::new(vec![Pin::Free; k + 1], max_m);
    let pins = match k {
        0 => vec![Pin::Both],
        _ => {
            let mut p = vec![Pin::Free; k + 1];
            p[0] = Pin::First;
            p[k] = Pin::Last;
            p
        }
    };
    let pinned = BoundedProduct::new(pins, max_m);

    let compare = |target: &BoundedProduct| -> (bool, bool, bool) {
        match fiber_functor(&flags, &words, k, target) {
            Some(func) if func.validate(&flags.category, &target.category).is_ok() => (
                true,
                func.is_bijective_on_objects(&target.category),
                func.is_fully_faithful(&flags.category, &target.category),
            ),
            _ => (false, false, false),
        }
    };
    let (functor_defined, bijective_on_objects, fully_faithful) = compare(&free);
    let (pinned_ok, pinned_bij, pinned_ff) = compare(&pinned);

    let mut hom_mismatches = 0;
    let mut first_mismatch = None;
    if let Some(func) = fiber_functor(&flags, &words, k, &free) {
        let n = flags.objects.len();
        for a in 0..n {
            for b in 0..n {
                let ours = flags.category.hom(a, b).len();
                let theirs = free.category.hom(func.object_map[a], func.object_map[b]).len();
                if ours != theirs {
                    hom_mismatches += 1;
                    first_mismatch.get_or_insert_with(|| {
                        format!(
                            "{:?} -> {:?}: {ours} necklace maps, {theirs} injection tuples",
                            words[a], words[b]
                        )
                    });
                }
            }
        }
    }
    Ok(FIsoReport {
        k,
        max_m,
        flag_objects: flags.objects.len(),
        flag_morphisms: flags.category.morphism_count(),
        product_objects: free.category.object_count(),
        product_morphisms: free.category.morphism_count(),
        functor_defined,
        bijective_on_objects,
        fully_faithful,
        hom_mismatches,
        first_mismatch,
        pinned_product_morphisms: pinned.category.morphism_count(),
        pinned_isomorphism: pinned_ok && pinned_bij && pinned_ff,
        passed: functor_defined && bijective_on_objects && fully_faithful,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub name: String,
    pub bound: usize,
    pub objects: usize,
    pub morphisms: usize,
}

impl StageSummary {
    fn of(name: &str, c: &NecklaceCategory) -> Self {
        Self {
            name: name.into(),
            bound: c.bound,
            objects: c.objects.len(),
            morphisms: c.category.morphism_count(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeBounds {
    /// Total dimension bound for `(Nec ↓ 𝒫)` and the objects whose fibers are checked.
    pub necklace_bound: usize,
    /// Bound for `𝒩` and `ℱ` in the second finality check; it leaves room for
    /// completing a necklace to a single bead through every vertex.
    pub extended_bound: usize,
    /// Bead dimension bound for the `ℱ` whose nerve is probed.
    pub flag_bound: usize,
    pub max_deg: usize,
    pub budget: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinalityChain {
    pub necklaces_to_comma: FinalityReport,
    pub flags_to_necklaces: FinalityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingSpaceReport {
    pub k: usize,
    pub from: usize,
    pub to: usize,
    pub reduction_chain: Vec<StageSummary>,
    pub finality: FinalityChain,
    pub homology: HomologyReport,
    pub probe: ProbeReport,
    pub passed: bool,
    pub verdict: String,
    pub bounds: ProbeBounds,
}

struct FinalityStages {
    comma: NecklaceCategory,
    necklaces: NecklaceCategory,
    extended: NecklaceCategory,
    chain: FinalityChain,
}

fn finality_stages(
    p: &SimplicialSet,
    xv: usize,
    yv: usize,
    required: &[usize],
    bound: usize,
    extended: usize,
    max_deg: usize,
) -> Result<FinalityStages, NecklaceError> {
    let comma = comma_category(p, xv, yv, bound)?;
    let (necklaces, nec_incl) = full_subcategory_n(&comma, p);
    let all: Vec<usize> = (0..comma.objects.len()).collect();
    let first = check_finality(&necklaces.category, &comma.category, &nec_incl, &all, Some(max_deg));

    let nec_ext = comma_category_with(p, xv, yv, extended, |o| is_totally_nondegenerate(p, o))?;
    let (flags_ext, flags_incl) = nec_ext.full_subcategory(|o| is_flag(p, o, required));
    let within: Vec<usize> = (0..nec_ext.objects.len()).filter(|&o| nec_ext.objects[o].total_dim() <= bound).collect();
    let second = check_finality(&flags_ext.category, &nec_ext.category, &flags_incl, &within, Some(max_deg));
    Ok(FinalityStages {
        comma,
        necklaces,
        extended: nec_ext,
        chain: FinalityChain {
            necklaces_to_comma: first,
            flags_to_necklaces: second,
        },
    })
}

/// Both finality checks of [`mapping_space_probe`] without the final probe.
pub fn finality_chain(k: usize, x: usize, y: usize, bound: usize, max_deg: usize) -> Result<FinalityChain, NecklaceError> {
    if !(x <= y && y <= k) {
        return Err(NecklaceError::Endpoints { x, y, k });
    }
    let extended = bound + (y - x).saturating_sub(1);
    let loc = localization_pushout(k, extended.max(max_deg + 1).max(1))?;
    let required: Vec<usize> = loc.vertex_of[x..=y].to_vec();
    let stages = finality_stages(&loc.set, loc.vertex_of[x], loc.vertex_of[y], &required, bound, extended, max_deg)?;
    Ok(stages.chain)
}

/// Builds `(Nec ↓ 𝒫)_{x,y}`, `𝒩` and `ℱ` over the localization of
/// `plus(Δ^k_inj)`, checks both finality steps fiber by fiber and probes the
/// nerve of `ℱ`.
///
/// A category of injections cut off at `[n]` can carry homology in degree `n`
/// that the full category does not have, so `ℱ` is built with bead dimension
/// up to `max(bound, (y - x) + max_deg + 1)`: then every factor reaches past
/// `[max_deg]`.
pub fn mapping_space_probe(
    k: usize,
    x: usize,
    y: usize,
    bound: usize,
    max_deg: usize,
    budget: usize,
) -> Result<MappingSpaceReport, NecklaceError> {
    if !(x <= y && y <= k) {
        return Err(NecklaceError::Endpoints { x, y, k });
    }
    let span = y - x;
    let extended = bound + span.saturating_sub(1);
    let flag_bound = bound.max(span + max_deg + 1);
    let loc = localization_pushout(k, extended.max(flag_bound).max(1))?;
    let p = &loc.set;
    let (xv, yv) = (loc.vertex_of[x], loc.vertex_of[y]);
    let required: Vec<usize> = loc.vertex_of[x..=y].to_vec();

    let stages = finality_stages(p, xv, yv, &required, bound, extended, max_deg)?;

    let flags = comma_category_with(p, xv, yv, flag_bound, |o| is_flag(p, o, &required))?;
    let n = nerve(&flags.category, max_deg + 1)?;
    let probe = contractibility_probe(&n, max_deg, budget)?;
    let homology = HomologyReport::from(&probe.homology[..]);
    let passed = probe.passed;
    let verdict = if passed {
        format!(
            "pass: N(F) from {x} to {y} is {} (necklace bound {bound}, bead bound {flag_bound})",
            probe.verdict
        )
    } else {
        format!("fail: {} (necklace bound {bound}, bead bound {flag_bound})", probe.verdict)
    };
    Ok(MappingSpaceReport {
        k,
        from: x,
        to: y,
        reduction_chain: vec![
            StageSummary::of("F", &flags),
            StageSummary::of("N", &stages.extended),
            StageSummary::of("N", &stages.necklaces),
            StageSummary::of("Nec", &stages.comma),
        ],
        finality: stages.chain,
        homology,
        probe,
        passed,
        verdict,
        bounds: ProbeBounds {
            necklace_bound: bound,
            extended_bound: extended,
            flag_bound,
            max_deg,
            budget,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::DEFAULT_BUDGET;

    #[test]
    fn localization_shapes() {
        for k in 0..=3 {
            let loc = localization_pushout(k, 3).unwrap();
            assert_eq!(loc.set.count(0), k + 1);
            loc.set.validate().unwrap();
        }
        let point = localization_pushout(0, 4).unwrap();
        assert_eq!(point.set.counts(), &[1, 1, 1, 1, 1]);
        let edge = localization_pushout(1, 3).unwrap();
        assert_eq!(edge.set.nondegenerate_counts()[1], 1);
    }

    #[test]
    fn flags_over_the_edge_are_surjections() {
        let loc = localization_pushout(1, 3).unwrap();
        let p = &loc.set;
        let c = comma_category(p, loc.vertex_of[0], loc.vertex_of[1], 3).unwrap();
        let (f, _) = c.full_subcategory(|o| is_flag(p, o, &loc.vertex_of));
        let mut words: Vec<Vec<usize>> = f.objects.iter().map(|o| o.vertex_images(p)).collect();
        words.sort();
        let mut surjections: Vec<Vec<usize>> = (1..=3)
            .flat_map(|m| enumerate_maps(m, 1, MapKind::Epi))
            .map(|s| s.values().to_vec())
            .collect();
        surjections.sort();
        assert_eq!(words, surjections);
        let (n, _) = full_subcategory_n(&c, p);
        assert!(n.objects.iter().all(|o| is_totally_nondegenerate(p, o)));
        assert!(c.revalidate(p).is_empty());
    }

    #[test]
    fn flag_categories_agree_before_and_after_localizing() {
        for k in 1..=2 {
            let loc = localization_pushout(k, 3).unwrap();
            let p = &loc.set;
            let after = comma_category_with(p, loc.vertex_of[0], loc.vertex_of[k], 3, |o| is_flag(p, o, &loc.vertex_of))
                .unwrap();
            let c = &loc.plus.set;
            let all: Vec<usize> = (0..=k).collect();
            let before = comma_category_with(c, 0, k, 3, |o| is_flag(c, o, &all)).unwrap();
            let words = |cat: &NecklaceCategory, x: &SimplicialSet| -> Vec<Vec<usize>> {
                cat.objects.iter().map(|o| o.vertex_images(x)).collect()
            };
            let relabel: Vec<Vec<usize>> = words(&after, p)
                .into_iter()
                .map(|w| w.iter().map(|v| loc.vertex_of.iter().position(|u| u == v).unwrap()).collect())
                .collect();
            assert_eq!(relabel, words(&before, c));
            assert_eq!(after.maps, before.maps);
        }
    }

    #[test]
    fn small_f_iso_instances() {
        let r = f_iso_check(1, 2).unwrap();
        assert_eq!((r.flag_objects, r.product_objects), (3, 3));
        assert!(r.bijective_on_objects);
        // (0,1) -> (0,0,1) must fix both ends, so only one of the two injections of the
        // first fiber survives
        assert_eq!((r.flag_morphisms, r.product_morphisms), (5, 7));
        assert!(!r.fully_faithful);
        assert!(r.pinned_isomorphism);
        let r0 = f_iso_check(0, 3).unwrap();
        assert_eq!(r0.flag_objects, 4);
        assert!(r0.pinned_isomorphism);
    }

    #[test]
    fn probe_on_the_edge() {
        let r = mapping_space_probe(1, 0, 1, 3, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.passed, "{}", r.verdict);
        assert_eq!(r.bounds.flag_bound, 4);

        // A degenerate loop bead followed by the edge maps to the 2-simplex (0,0,1) in
        // two ways; whether the loop lands on the initial vertex is preserved by every
        // fiber morphism, so such fibers split into components.
        let first = &r.finality.necklaces_to_comma;
        assert_eq!((first.checked, first.with_initial, first.acyclic), (32, 17, Some(17)));
        for f in first.fibers.iter().filter(|f| f.initial.is_none()) {
            assert!(f.homology.as_ref().unwrap()[0].betti >= 2, "{}", f.object);
        }

        // The completed single bead is initial in every fiber, not terminal.
        let second = &r.finality.flags_to_necklaces;
        assert!(second.all_initial);
        assert_eq!((second.checked, second.with_terminal), (6, 3));

        let same = mapping_space_probe(1, 1, 1, 3, 2, DEFAULT_BUDGET).unwrap();
        assert!(same.passed);
        assert!(matches!(mapping_space_probe(1, 1, 0, 3, 2, 10), Err(NecklaceError::Endpoints { .. })));
    }

    #[test]
    fn truncated_injection_categories() {
        // cut off at [1] the nerve is a circle; from [2] on it is acyclic through degree 2
        for m in 0..=3 {
            let n = nerve(&FiniteCategory::delta_inj(m), 3).unwrap();
            let r = contractibility_probe(&n, 2, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.passed, m != 1, "m = {m}: {}", r.verdict);
        }
    }
}
