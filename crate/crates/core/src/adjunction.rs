//! Restriction from simplicial to semisimplicial sets and its left adjoint,
//! which adjoins degeneracies freely.
//!
//! An `N`-simplex of `plus(X)` is a pair `(base, surj)` with `base` an
//! `N'`-simplex of `X` and `surj : [N] ->> [N']`. A monotone `g : [M] -> [N]`
//! acts by factoring `surj ∘ g = mono ∘ epi` and returning `(mono*(base), epi)`.

use serde::Serialize;

use crate::delta::{enumerate_maps, MapKind, PosetMap};
use crate::sset::json::{plus_pairs_doc, simplicial_doc, to_line};
use crate::sset::{LabelIndex, SSetError, SemisimplicialSet, SimplexMap, SimplicialSet};

/// Forgets degeneracies.
pub fn restrict(x: &SimplicialSet) -> SemisimplicialSet {
    x.restrict()
}

/// `Δ^k` with its degeneracies forgotten; it keeps its degenerate simplices.
pub fn delta_inj(k: usize, trunc_dim: usize) -> Result<SemisimplicialSet, SSetError> {
    Ok(crate::sset::standard_simplex(k, trunc_dim)?.restrict())
}

/// The free simplicial set on a semisimplicial set, with the pair behind each simplex.
#[derive(Clone, Debug)]
pub struct PlusSet {
    pub set: SimplicialSet,
    /// `pairs[n][id] = (base, surj)`.
    pub pairs: Vec<Vec<(usize, PosetMap)>>,
    index: LabelIndex<(usize, PosetMap)>,
}

impl PlusSet {
    pub fn pair(&self, n: usize, id: usize) -> &(usize, PosetMap) {
        &self.pairs[n][id]
    }

    /// The id of `(base, surj)` in dimension `surj.source_dim()`.
    pub fn id_of(&self, base: usize, surj: &PosetMap) -> Option<usize> {
        self.index.id(surj.source_dim(), &(base, surj.clone()))
    }

    /// The action of `g : [m] -> [n]` computed on the pair, without the tables.
    pub fn act_formula(&self, base_set: &SemisimplicialSet, n: usize, id: usize, g: &PosetMap) -> (usize, PosetMap) {
        let (base, surj) = &self.pairs[n][id];
        pair_action(base_set, surj.target_dim(), *base, surj, g)
    }

    pub fn to_json(&self) -> String {
        let mut doc = simplicial_doc(&self.set);
        doc.plus_pairs = Some(plus_pairs_doc(&self.pairs));
        to_line(&doc)
    }
}

fn pair_action(x: &SemisimplicialSet, base_dim: usize, base: usize, surj: &PosetMap, g: &PosetMap) -> (usize, PosetMap) {
    let composite = surj.after(g).expect("composable");
    let (epi, mono) = composite.epi_mono_factorize();
    debug_assert_eq!(mono.target_dim(), base_dim);
    (x.act_mono(base_dim, base, &mono), epi)
}

/// Adjoins degeneracies freely, keeping the truncation dimension.
pub fn plus(x: &SemisimplicialSet) -> PlusSet {
    let d = x.trunc_dim();
    let labels: Vec<Vec<(usize, PosetMap)>> = (0..=d)
        .map(|n| {
            let mut row = Vec::new();
            for p in 0..=n {
                let surjections = enumerate_maps(n, p, MapKind::Epi);
                for base in 0..x.count(p) {
                    row.extend(surjections.iter().map(|s| (base, s.clone())));
                }
            }
            row
        })
        .collect();
    let index = LabelIndex::new(labels);
    let set = index
        .build_simplicial(
            |n, (base, s), i| pair_action(x, s.target_dim(), *base, s, &PosetMap::coface(n, i)),
            |n, (base, s), i| (*base, s.after(&PosetMap::codegeneracy(n, i)).expect("composable")),
        )
        .expect("pairs are closed under faces and degeneracies");
    PlusSet {
        set,
        pairs: index.labels.clone(),
        index,
    }
}

/// `(S, s) ↦ s*(S)` from `plus(restrict(y))` to `y`.
pub fn counit(y: &SimplicialSet) -> Result<(PlusSet, SimplexMap), SSetError> {
    let p = plus(&y.restrict());
    let maps = p
        .pairs
        .iter()
        .map(|row| {
            row.iter()
                .map(|(base, s)| y.degenerate(s.target_dim(), *base, s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((p, SimplexMap { maps }))
}

/// `x ↦ (x, id)` from `x` to `restrict(plus(x))`.
pub fn unit(x: &SemisimplicialSet) -> (PlusSet, SimplexMap) {
    let p = plus(x);
    let maps = (0..=x.trunc_dim())
        .map(|n| {
            let id = PosetMap::identity(n);
            (0..x.count(n)).map(|s| p.id_of(s, &id).expect("unit pair exists")).collect()
        })
        .collect();
    (p, SimplexMap { maps })
}

/// `plus(φ) : (S, s) ↦ (φ(S), s)` for a semisimplicial map `φ : X -> Y`.
pub fn plus_map(phi: &SimplexMap, source: &PlusSet, target: &PlusSet) -> SimplexMap {
    SimplexMap {
        maps: source
            .pairs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(base, s)| {
                        let image = phi.apply(s.target_dim(), *base);
                        target.id_of(image, s).expect("image pair exists")
                    })
                    .collect()
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct TriangleReport {
    /// Simplices of `plus(X)` checked against `ε_{plus X} ∘ plus(η_X) = id`.
    pub left_checked: usize,
    pub left_violations: Vec<String>,
    /// Simplices of `restrict(Y)` checked against `restrict(ε_Y) ∘ η_{restrict Y} = id`.
    pub right_checked: usize,
    pub right_violations: Vec<String>,
    /// Failures of the unit and counit to commute with structure maps.
    pub naturality_violations: Vec<String>,
}

impl TriangleReport {
    pub fn holds(&self) -> bool {
        self.left_violations.is_empty() && self.right_violations.is_empty() && self.naturality_violations.is_empty()
    }
}

fn mismatches(map: &SimplexMap, label: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (n, row) in map.maps.iter().enumerate() {
        for (x, &y) in row.iter().enumerate() {
            if x != y {
                out.push(format!("{label}: {n}-simplex {x} goes to {y}"));
            }
        }
    }
    out
}

/// Checks both zigzag identities simplex by simplex.
pub fn check_triangle_identities(x: &SemisimplicialSet, y: &SimplicialSet) -> Result<TriangleReport, SSetError> {
    let mut report = TriangleReport::default();

    let (px, eta_x) = unit(x);
    let (ppx, eps_px) = counit(&px.set)?;
    let plus_eta = plus_map(&eta_x, &px, &ppx);
    let left = eps_px.after(&plus_eta);
    report.left_checked = px.set.total_simplices();
    report.left_violations = mismatches(&left, "left");
    report
        .naturality_violations
        .extend(eta_x.semisimplicial_violations(x, px.set.as_semi()).into_iter().map(|v| format!("unit of X: {v}")));
    report
        .naturality_violations
        .extend(eps_px.simplicial_violations(&ppx.set, &px.set).into_iter().map(|v| format!("counit at plus(X): {v}")));
    report
        .naturality_violations
        .extend(plus_eta.simplicial_violations(&px.set, &ppx.set).into_iter().map(|v| format!("plus of unit: {v}")));

    let ry = y.restrict();
    let (_, eta_ry) = unit(&ry);
    let (py, eps_y) = counit(y)?;
    let right = eps_y.after(&eta_ry);
    report.right_checked = ry.total_simplices();
    report.right_violations = mismatches(&right, "right");
    report
        .naturality_violations
        .extend(eps_y.simplicial_violations(&py.set, y).into_iter().map(|v| format!("counit at Y: {v}")));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::binomial;
    use crate::sset::{nerve, random_semisimplicial, standard_simplex, FiniteCategory};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn count_oracle(n: usize, k: usize) -> u128 {
        (0..=n).map(|p| binomial(n, p) * binomial(p + k + 1, k)).sum()
    }

    #[test]
    fn restriction_examples() {
        let pt = restrict(&standard_simplex(0, 3).unwrap());
        assert_eq!(pt.counts(), &[1, 1, 1, 1]);
        for n in 1..=3 {
            assert!(pt.faces_of(n, 0).iter().all(|&f| f == 0));
        }
        let n1 = nerve(&FiniteCategory::linear_order(1), 3).unwrap();
        assert_eq!(restrict(&n1).count(1), 3);
        assert_eq!(restrict(&n1), *n1.as_semi());
    }

    #[test]
    fn plus_of_point_has_one_nondegenerate_simplex_per_dimension() {
        let p = plus(&delta_inj(0, 6).unwrap());
        p.set.validate().unwrap();
        for n in 0..=6 {
            assert_eq!(p.set.count(n), 1 << n);
        }
        assert_eq!(p.set.nondegenerate_counts(), vec![1; 7]);
    }

    #[test]
    fn plus_counts_follow_the_coproduct_formula() {
        for k in 0..=3 {
            let p = plus(&delta_inj(k, 5).unwrap());
            for n in 0..=5 {
                assert_eq!(p.set.count(n) as u128, count_oracle(n, k), "k={k} n={n}");
            }
        }
        assert_eq!(plus(&delta_inj(1, 2).unwrap()).set.count(2), 12);
    }

    #[test]
    fn faces_of_a_degenerate_edge_pair() {
        let x = delta_inj(1, 2).unwrap();
        let p = plus(&x);
        // the 01 edge of Δ¹ is the map (0,1), id 1 among the 1-simplices
        assert_eq!(x.vertices(1, 1), vec![0, 1]);
        let s = PosetMap::new(vec![0, 0, 1], 2).unwrap();
        let id = p.id_of(1, &s).unwrap();
        let d0 = p.set.face(2, id, 0);
        assert_eq!(p.pair(1, d0), &(1, PosetMap::identity(1)));
        let d2 = p.set.face(2, id, 2);
        assert_eq!(p.pair(1, d2), &(0, PosetMap::constant(1, 0, 0)));
    }

    #[test]
    fn plus_action_is_functorial() {
        let base = delta_inj(2, 4).unwrap();
        let p = plus(&base);
        for n in 0..=4 {
            for id in 0..p.set.count(n) {
                for m in 0..=4 {
                    for g in enumerate_maps(m, n, MapKind::All) {
                        let by_table = p.set.act(n, id, &g).unwrap();
                        let (b, s) = p.act_formula(&base, n, id, &g);
                        assert_eq!(p.id_of(b, &s), Some(by_table));
                    }
                }
            }
        }
    }

    #[test]
    fn counit_examples() {
        let y = standard_simplex(1, 3).unwrap();
        let (p, eps) = counit(&y).unwrap();
        assert!(eps.simplicial_violations(&p.set, &y).is_empty());
        assert!(eps.is_surjective_onto(y.counts()));
        for n in 0..=3 {
            let id = PosetMap::identity(n);
            for s in 0..y.count(n) {
                assert_eq!(eps.apply(n, p.id_of(s, &id).unwrap()), s);
            }
        }
        let s = PosetMap::new(vec![0, 0, 1], 2).unwrap();
        let image = eps.apply(2, p.id_of(1, &s).unwrap());
        assert_eq!(y.vertices(2, image), vec![0, 0, 1]);
    }

    #[test]
    fn unit_hits_exactly_the_nondegenerate_simplices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut inputs = vec![delta_inj(0, 4).unwrap(), delta_inj(2, 3).unwrap()];
        inputs.extend((0..10).map(|_| random_semisimplicial(&mut rng, 4, 5)));
        for x in inputs {
            let (p, eta) = unit(&x);
            assert!(eta.is_injective());
            assert!(eta.semisimplicial_violations(&x, p.set.as_semi()).is_empty());
            for n in 0..=x.trunc_dim() {
                let mut image = eta.maps[n].clone();
                image.sort_unstable();
                assert_eq!(image, p.set.nondegenerate(n));
            }
        }
    }

    #[test]
    fn triangle_identities_hold() {
        for k in 0..=2 {
            let r = check_triangle_identities(&delta_inj(k, 3).unwrap(), &nerve(&FiniteCategory::linear_order(k), 3).unwrap())
                .unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(r.left_checked > 0 && r.right_checked > 0);
        }
    }

    #[test]
    fn plus_json_carries_pairs() {
        let p = plus(&delta_inj(0, 2).unwrap());
        let text = p.to_json();
        assert!(text.contains("\"plus_pairs\":[[{\"base\":0,\"surj\":[0]}]"));
        let back = crate::sset::json::parse_simplicial(&text).unwrap();
        assert_eq!(back, p.set);
    }
}
