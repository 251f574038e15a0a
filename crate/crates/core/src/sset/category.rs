//! Finite categories with an explicit composition table, and functors between them.

use std::collections::HashMap;

use thiserror::Error;

use crate::delta::{enumerate_maps, MapKind, PosetMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("malformed category: {0}")]
    Shape(String),
    #[error("composition is not defined for composable pair ({g}, {f})")]
    MissingComposite { g: usize, f: usize },
    #[error("unit law fails for morphism {0}")]
    Unit(usize),
    #[error("associativity fails for ({h}, {g}, {f})")]
    Associativity { h: usize, g: usize, f: usize },
    #[error("functor is invalid: {0}")]
    Functor(String),
}

/// Objects, morphisms with source and target, identities and a total
/// composition table on composable pairs. `compose(g, f)` is `g ∘ f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    sources: Vec<usize>,
    targets: Vec<usize>,
    identities: Vec<usize>,
    composites: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    homs: HashMap<(usize, usize), Vec<usize>>,
}

impl FiniteCategory {
    /// Builds and exhaustively validates a category. `composites` lists
    /// `(g, f, g ∘ f)` for every composable pair.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(usize, usize)>,
        identities: Vec<usize>,
        composites: Vec<(usize, usize, usize)>,
    ) -> Result<Self, CategoryError> {
        let mut table = HashMap::with_capacity(composites.len());
        for (g, f, h) in composites {
            if table.insert((g, f), h).is_some() {
                return Err(CategoryError::Shape(format!("composite of ({g}, {f}) given twice")));
            }
        }
        let cat = Self::assemble(objects, morphisms, identities, table)?;
        cat.validate()?;
        Ok(cat)
    }

    /// Builds a category whose composition is computed by `compose` on every
    /// composable pair. Associativity is not rechecked; call `validate` for that.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<(usize, usize)>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, CategoryError> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (f, &(s, _)) in morphisms.iter().enumerate() {
            if s >= objects.len() {
                return Err(CategoryError::Shape(format!("morphism {f} has unknown source {s}")));
            }
            out[s].push(f);
        }
        let mut table = HashMap::new();
        for (f, &(_, t)) in morphisms.iter().enumerate() {
            if t >= objects.len() {
                return Err(CategoryError::Shape(format!("morphism {f} has unknown target {t}")));
            }
            for &g in &out[t] {
                let h = compose(g, f).ok_or(CategoryError::MissingComposite { g, f })?;
                table.insert((g, f), h);
            }
        }
        let cat = Self::assemble(objects, morphisms, identities, table)?;
        cat.check_closure()?;
        Ok(cat)
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<(usize, usize)>,
        identities: Vec<usize>,
        composites: HashMap<(usize, usize), usize>,
    ) -> Result<Self, CategoryError> {
        let n = objects.len();
        if identities.len() != n {
            return Err(CategoryError::Shape(format!("{} identities for {n} objects", identities.len())));
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (f, &(s, t)) in morphisms.iter().enumerate() {
            if s >= n || t >= n {
                return Err(CategoryError::Shape(format!("morphism {f} has endpoints outside the objects")));
            }
            out[s].push(f);
            homs.entry((s, t)).or_default().push(f);
        }
        for (c, &id) in identities.iter().enumerate() {
            if morphisms.get(id) != Some(&(c, c)) {
                return Err(CategoryError::Shape(format!("identity of object {c} is not an endomorphism of it")));
            }
        }
        Ok(Self {
            objects,
            sources: morphisms.iter().map(|m| m.0).collect(),
            targets: morphisms.iter().map(|m| m.1).collect(),
            identities,
            composites,
            out,
            homs,
        })
    }

    /// Every composable pair has a composite with the right endpoints, and nothing else is listed.
    fn check_closure(&self) -> Result<(), CategoryError> {
        let mut expected = 0usize;
        for f in 0..self.morphism_count() {
            for &g in &self.out[self.targets[f]] {
                expected += 1;
                let h = *self.composites.get(&(g, f)).ok_or(CategoryError::MissingComposite { g, f })?;
                if h >= self.morphism_count() || self.sources[h] != self.sources[f] || self.targets[h] != self.targets[g] {
                    return Err(CategoryError::Shape(format!("composite of ({g}, {f}) has the wrong endpoints")));
                }
            }
        }
        if expected != self.composites.len() {
            return Err(CategoryError::Shape("composition table lists non-composable pairs".into()));
        }
        Ok(())
    }

    /// Closure, unit laws and associativity, all checked exhaustively.
    pub fn validate(&self) -> Result<(), CategoryError> {
        self.check_closure()?;
        for f in 0..self.morphism_count() {
            let (s, t) = (self.sources[f], self.targets[f]);
            if self.composites[&(f, self.identities[s])] != f || self.composites[&(self.identities[t], f)] != f {
                return Err(CategoryError::Unit(f));
            }
        }
        for f in 0..self.morphism_count() {
            for &g in &self.out[self.targets[f]] {
                let gf = self.composites[&(g, f)];
                for &h in &self.out[self.targets[g]] {
                    let hg = self.composites[&(h, g)];
                    if self.composites[&(h, gf)] != self.composites[&(hg, f)] {
                        return Err(CategoryError::Associativity { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.sources.len()
    }

    pub fn object_label(&self, c: usize) -> &str {
        &self.objects[c]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn source(&self, f: usize) -> usize {
        self.sources[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.targets[f]
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.sources[f]] == f
    }

    /// `g ∘ f`, if `f` and `g` are composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composites.get(&(g, f)).copied()
    }

    pub fn morphisms_from(&self, c: usize) -> &[usize] {
        &self.out[c]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.homs.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// `(g, f, g ∘ f)` for every composable pair, sorted.
    pub fn composite_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = self.composites.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        v.sort_unstable();
        v
    }

    pub fn morphism_endpoints(&self) -> Vec<(usize, usize)> {
        self.sources.iter().copied().zip(self.targets.iter().copied()).collect()
    }

    /// One object, one morphism.
    pub fn terminal() -> Self {
        Self::new(vec!["*".into()], vec![(0, 0)], vec![0], vec![(0, 0, 0)]).expect("terminal category")
    }

    /// The poset `0 < 1 < ... < k` as a category.
    pub fn linear_order(k: usize) -> Self {
        let objects: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for a in 0..=k {
            for b in a..=k {
                index.insert((a, b), morphisms.len());
                morphisms.push((a, b));
            }
        }
        let identities = (0..=k).map(|a| index[&(a, a)]).collect();
        Self::from_fn(objects, morphisms.clone(), identities, |g, f| {
            let (a, _) = morphisms[f];
            let (_, c) = morphisms[g];
            index.get(&(a, c)).copied()
        })
        .expect("linear order")
    }

    /// Two objects and inverse isomorphisms between them.
    pub fn walking_isomorphism() -> Self {
        // 0 = id_a, 1 = id_b, 2 = f : a -> b, 3 = g : b -> a
        let composites = vec![
            (0, 0, 0),
            (1, 1, 1),
            (2, 0, 2),
            (1, 2, 2),
            (3, 1, 3),
            (0, 3, 3),
            (3, 2, 0),
            (2, 3, 1),
        ];
        Self::new(vec!["a".into(), "b".into()], vec![(0, 0), (1, 1), (0, 1), (1, 0)], vec![0, 1], composites)
            .expect("walking isomorphism")
    }

    /// Injective monotone maps between `[0], ..., [max_dim]`.
    pub fn delta_inj(max_dim: usize) -> Self {
        Self::concrete(
            (0..=max_dim).map(|m| format!("[{m}]")).collect(),
            |a, b| enumerate_maps(a, b, MapKind::Mono),
            PosetMap::identity,
        )
    }

    /// A category of objects and explicit arrows, composed as poset maps.
    /// `arrows(a, b)` lists the morphisms `a -> b`.
    pub fn concrete(
        objects: Vec<String>,
        arrows: impl Fn(usize, usize) -> Vec<PosetMap>,
        identity: impl Fn(usize) -> PosetMap,
    ) -> Self {
        Self::from_arrows(objects, arrows, identity, |g, f| g.after(f).expect("composable maps"))
    }

    /// Like `concrete`, for any arrow type with a composition.
    pub fn from_arrows<A: Clone + Eq + std::hash::Hash>(
        objects: Vec<String>,
        arrows: impl Fn(usize, usize) -> Vec<A>,
        identity: impl Fn(usize) -> A,
        compose: impl Fn(&A, &A) -> A,
    ) -> Self {
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut labels = Vec::new();
        let mut index: HashMap<(usize, usize, A), usize> = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for arrow in arrows(a, b) {
                    index.insert((a, b, arrow.clone()), morphisms.len());
                    morphisms.push((a, b));
                    labels.push(arrow);
                }
            }
        }
        let identities = (0..n).map(|a| index[&(a, a, identity(a))]).collect();
        Self::from_fn(objects, morphisms.clone(), identities, |g, f| {
            let h = compose(&labels[g], &labels[f]);
            index.get(&(morphisms[f].0, morphisms[g].1, h)).copied()
        })
        .expect("arrows are closed under composition")
    }

    /// Product category; the object pair `(a, b)` has id `a * |B| + b`.
    pub fn product(&self, other: &FiniteCategory) -> Self {
        let nb = other.object_count();
        let mb = other.morphism_count();
        let objects = (0..self.object_count())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", self.objects[a], other.objects[b]))
            .collect();
        let morphisms = (0..self.morphism_count())
            .flat_map(|f| (0..mb).map(move |g| (f, g)))
            .map(|(f, g)| (self.sources[f] * nb + other.sources[g], self.targets[f] * nb + other.targets[g]))
            .collect();
        let identities = (0..self.object_count())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| self.identities[a] * mb + other.identities[b])
            .collect();
        Self::from_fn(objects, morphisms, identities, |g, f| {
            let first = self.compose(g / mb, f / mb)?;
            let second = other.compose(g % mb, f % mb)?;
            Some(first * mb + second)
        })
        .expect("product of categories")
    }

    /// The full subcategory on `objects`, listed in the given order, with its inclusion.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FiniteCategory, Functor) {
        let new_obj: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut morphisms = Vec::new();
        let mut morphism_map = Vec::new();
        let mut new_mor = HashMap::new();
        for &a in objects {
            for &f in &self.out[a] {
                if let Some(&tb) = new_obj.get(&self.targets[f]) {
                    new_mor.insert(f, morphisms.len());
                    morphisms.push((new_obj[&a], tb));
                    morphism_map.push(f);
                }
            }
        }
        let labels = objects.iter().map(|&o| self.objects[o].clone()).collect();
        let identities = objects.iter().map(|&o| new_mor[&self.identities[o]]).collect();
        let sub = Self::from_fn(labels, morphisms, identities, |g, f| {
            self.compose(morphism_map[g], morphism_map[f]).map(|h| new_mor[&h])
        })
        .expect("full subcategory is closed");
        let inclusion = Functor {
            object_map: objects.to_vec(),
            morphism_map,
        };
        (sub, inclusion)
    }
}

/// A functor given by its action on object and morphism ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Self {
        Self {
            object_map: (0..c.object_count()).collect(),
            morphism_map: (0..c.morphism_count()).collect(),
        }
    }

    /// Checks endpoints, identities and composites.
    pub fn validate(&self, src: &FiniteCategory, tgt: &FiniteCategory) -> Result<(), CategoryError> {
        if self.object_map.len() != src.object_count() || self.morphism_map.len() != src.morphism_count() {
            return Err(CategoryError::Functor("maps have the wrong length".into()));
        }
        if self.object_map.iter().any(|&o| o >= tgt.object_count())
            || self.morphism_map.iter().any(|&m| m >= tgt.morphism_count())
        {
            return Err(CategoryError::Functor("maps leave the target".into()));
        }
        for f in 0..src.morphism_count() {
            let img = self.morphism_map[f];
            if tgt.source(img) != self.object_map[src.source(f)] || tgt.target(img) != self.object_map[src.target(f)] {
                return Err(CategoryError::Functor(format!("morphism {f} lands between the wrong objects")));
            }
        }
        for c in 0..src.object_count() {
            if self.morphism_map[src.identity(c)] != tgt.identity(self.object_map[c]) {
                return Err(CategoryError::Functor(format!("identity of object {c} is not preserved")));
            }
        }
        for (g, f, h) in src.composite_triples() {
            let lhs = tgt.compose(self.morphism_map[g], self.morphism_map[f]);
            if lhs != Some(self.morphism_map[h]) {
                return Err(CategoryError::Functor(format!("composite ({g}, {f}) is not preserved")));
            }
        }
        Ok(())
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.object_map.iter().all(|o| seen.insert(*o))
    }

    pub fn is_bijective_on_objects(&self, tgt: &FiniteCategory) -> bool {
        self.is_injective_on_objects() && self.object_map.len() == tgt.object_count()
    }

    /// Every hom-set `C(a, b) -> D(Fa, Fb)` is a bijection.
    pub fn is_fully_faithful(&self, src: &FiniteCategory, tgt: &FiniteCategory) -> bool {
        for a in 0..src.object_count() {
            for b in 0..src.object_count() {
                let mut images: Vec<usize> = src.hom(a, b).iter().map(|&f| self.morphism_map[f]).collect();
                images.sort_unstable();
                images.dedup();
                let target = tgt.hom(self.object_map[a], self.object_map[b]);
                if images.len() != src.hom(a, b).len() || images.len() != target.len() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_categories_validate() {
        for c in [
            FiniteCategory::terminal(),
            FiniteCategory::linear_order(3),
            FiniteCategory::walking_isomorphism(),
            FiniteCategory::delta_inj(3),
        ] {
            c.validate().unwrap();
        }
        assert_eq!(FiniteCategory::linear_order(3).morphism_count(), 10);
        // injections [a] -> [b] for a, b <= 2: 1+2+3 + 1+3 + 1
        assert_eq!(FiniteCategory::delta_inj(2).morphism_count(), 11);
    }

    #[test]
    fn rejects_broken_tables() {
        let err = FiniteCategory::new(vec!["a".into()], vec![(0, 0), (0, 0)], vec![0], vec![(0, 0, 0), (1, 0, 1), (0, 1, 1)])
            .unwrap_err();
        assert_eq!(err, CategoryError::MissingComposite { g: 1, f: 1 });
        // an idempotent e with e∘e = id breaks nothing, but id∘e = id breaks the unit law
        let err = FiniteCategory::new(
            vec!["a".into()],
            vec![(0, 0), (0, 0)],
            vec![0],
            vec![(0, 0, 0), (1, 0, 1), (0, 1, 0), (1, 1, 0)],
        )
        .unwrap_err();
        assert_eq!(err, CategoryError::Unit(1));
    }

    #[test]
    fn associativity_failure_is_detected() {
        // non-identity endomorphisms a = 1, b = 2, c = 3 with (a∘a)∘b = b but a∘(a∘b) = a
        let op = |g: usize, f: usize| match (g, f) {
            (0, f) => f,
            (g, 0) => g,
            (1, 1) => 2,
            (1, 2) => 3,
            (2, 2) => 2,
            _ => 1,
        };
        let composites: Vec<_> = (0..4).flat_map(|g| (0..4).map(move |f| (g, f, op(g, f)))).collect();
        let err = FiniteCategory::new(vec!["x".into()], vec![(0, 0); 4], vec![0], composites).unwrap_err();
        assert!(matches!(err, CategoryError::Associativity { .. }));
    }

    #[test]
    fn products_and_subcategories() {
        let a = FiniteCategory::linear_order(1);
        let p = a.product(&a);
        p.validate().unwrap();
        assert_eq!(p.object_count(), 4);
        assert_eq!(p.morphism_count(), 9);
        let (sub, inc) = p.full_subcategory(&[0, 3]);
        sub.validate().unwrap();
        inc.validate(&sub, &p).unwrap();
        assert!(inc.is_fully_faithful(&sub, &p));
        assert_eq!(sub.hom(0, 1).len(), 1);
        let id = Functor::identity(&p);
        id.validate(&p, &p).unwrap();
        assert!(id.is_bijective_on_objects(&p));
    }
}
