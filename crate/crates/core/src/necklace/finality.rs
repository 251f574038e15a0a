use std::collections::HashMap;

use serde::Serialize;

use crate::homotopy::{homology, normalized_chains, HomologyGroup};
use crate::sset::{nerve, FiniteCategory, Functor};

/// The coslice fiber `small ×_big big_{t/}`: objects are pairs `(c, g)` with
/// `g : t -> F(c)`, morphisms `h : c -> c'` with `F(h) ∘ g = g'`.
/// Returns the category and its object pairs.
pub fn fiber_category(
    small: &FiniteCategory,
    big: &FiniteCategory,
    inclusion: &Functor,
    t: usize,
) -> (FiniteCategory, Vec<(usize, usize)>) {
    let mut pairs = Vec::new();
    for c in 0..small.object_count() {
        for &g in big.hom(t, inclusion.object_map[c]) {
            pairs.push((c, g));
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut morphisms = Vec::new();
    let mut labels = Vec::new();
    for (i, &(c, g)) in pairs.iter().enumerate() {
        for &h in small.morphisms_from(c) {
            let composite = big.compose(inclusion.morphism_map[h], g).expect("composable");
            let j = index[&(small.target(h), composite)];
            morphisms.push((i, j));
            labels.push(h);
        }
    }
    let by_label: HashMap<(usize, usize), usize> =
        morphisms.iter().zip(&labels).enumerate().map(|(m, (&(i, _), &h))| ((i, h), m)).collect();
    let identities = pairs.iter().enumerate().map(|(i, &(c, _))| by_label[&(i, small.identity(c))]).collect();
    let names = pairs.iter().map(|&(c, g)| format!("({}, {g})", small.object_label(c))).collect();
    let fiber = FiniteCategory::from_fn(names, morphisms.clone(), identities, |g2, f2| {
        let h = small.compose(labels[g2], labels[f2])?;
        by_label.get(&(morphisms[f2].0, h)).copied()
    })
    .expect("fibers are closed under composition");
    (fiber, pairs)
}

fn initial_objects(c: &FiniteCategory) -> Vec<usize> {
    let n = c.object_count();
    (0..n).filter(|&o| (0..n).all(|p| c.hom(o, p).len() == 1)).collect()
}

fn terminal_objects(c: &FiniteCategory) -> Vec<usize> {
    let n = c.object_count();
    (0..n).filter(|&o| (0..n).all(|p| c.hom(p, o).len() == 1)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSummary {
    pub object: String,
    pub fiber_objects: usize,
    pub fiber_morphisms: usize,
    /// One initial object of the fiber, if any.
    pub initial: Option<String>,
    pub terminal: Option<String>,
    /// Homology of the fiber's nerve, when requested.
    pub homology: Option<Vec<HomologyGroup>>,
}

impl FiberSummary {
    /// `H_0 = Z` and higher groups vanish, within the computed degrees.
    pub fn acyclic(&self) -> Option<bool> {
        self.homology
            .as_ref()
            .map(|h| h[0].is_integers() && h[1..].iter().all(HomologyGroup::is_zero))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FinalityReport {
    pub checked: usize,
    pub with_initial: usize,
    pub with_terminal: usize,
    /// Fibers whose nerve has the homology of a point, when homology was requested.
    pub acyclic: Option<usize>,
    pub all_initial: bool,
    pub all_terminal: bool,
    pub fibers: Vec<FiberSummary>,
}

/// Builds the fiber over every object in `objects` of `big` and looks for
/// initial and terminal objects by inspecting every hom-set. With
/// `homology_deg`, also computes the fiber nerves' homology through that degree.
pub fn check_finality(
    small: &FiniteCategory,
    big: &FiniteCategory,
    inclusion: &Functor,
    objects: &[usize],
    homology_deg: Option<usize>,
) -> FinalityReport {
    let fibers: Vec<FiberSummary> = objects
        .iter()
        .map(|&t| {
            let (fiber, _) = fiber_category(small, big, inclusion, t);
            let label = |o: usize| fiber.object_label(o).to_string();
            let homology = homology_deg.map(|d| {
                let n = nerve(&fiber, d + 1).expect("fiber is a category");
                homology(&normalized_chains(&n), d).expect("degree within the nerve")
            });
            FiberSummary {
                object: big.object_label(t).to_string(),
                fiber_objects: fiber.object_count(),
                fiber_morphisms: fiber.morphism_count(),
                initial: initial_objects(&fiber).first().map(|&o| label(o)),
                terminal: terminal_objects(&fiber).first().map(|&o| label(o)),
                homology,
            }
        })
        .collect();
    let with_initial = fibers.iter().filter(|f| f.initial.is_some()).count();
    let with_terminal = fibers.iter().filter(|f| f.terminal.is_some()).count();
    let acyclic = homology_deg.map(|_| fibers.iter().filter(|f| f.acyclic() == Some(true)).count());
    FinalityReport {
        checked: fibers.len(),
        with_initial,
        with_terminal,
        acyclic,
        all_initial: with_initial == fibers.len(),
        all_terminal: with_terminal == fibers.len(),
        fibers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inclusion_fibers_are_coslices() {
        let c = FiniteCategory::linear_order(3);
        let id = Functor::identity(&c);
        let objects: Vec<usize> = (0..c.object_count()).collect();
        let r = check_finality(&c, &c, &id, &objects, Some(1));
        // t/C has the initial object (t, id_t); its terminal object is the top of the order
        assert!(r.all_initial);
        assert!(r.all_terminal);
        assert_eq!(r.acyclic, Some(4));
        for (t, f) in r.fibers.iter().enumerate() {
            assert_eq!(f.fiber_objects, 4 - t);
        }
    }

    #[test]
    fn coslices_need_not_have_terminal_objects() {
        // a -> b, a -> c with no terminal object in a/C
        let c = FiniteCategory::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)],
            vec![0, 1, 2],
            vec![
                (0, 0, 0), (1, 1, 1), (2, 2, 2),
                (3, 0, 3), (1, 3, 3), (4, 0, 4), (2, 4, 4),
            ],
        )
        .unwrap();
        let id = Functor::identity(&c);
        let r = check_finality(&c, &c, &id, &[0, 1, 2], None);
        assert!(r.all_initial);
        assert_eq!(r.with_terminal, 2);
        assert!(r.fibers[0].terminal.is_none());
    }

    #[test]
    fn inclusion_of_the_top_of_an_order() {
        // {2} ⊂ [2]: every coslice fiber is a single point
        let big = FiniteCategory::linear_order(2);
        let (small, incl) = big.full_subcategory(&[2]);
        let r = check_finality(&small, &big, &incl, &[0, 1, 2], None);
        assert!(r.all_initial && r.all_terminal);
        // {0} ⊂ [2]: fibers over 1 and 2 are empty
        let (small, incl) = big.full_subcategory(&[0]);
        let r = check_finality(&small, &big, &incl, &[0, 1, 2], None);
        assert_eq!(r.with_initial, 1);
    }
}
