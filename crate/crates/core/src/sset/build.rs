use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::{FiniteCategory, LabelIndex, SSetError, SemisimplicialSet, SimplexMap, SimplicialSet};
use crate::delta::{enumerate_maps, MapKind};

/// `Δ^k` truncated at `trunc_dim`; `n`-simplices are monotone maps `[n] -> [k]`
/// in lexicographic order.
pub fn standard_simplex(k: usize, trunc_dim: usize) -> Result<SimplicialSet, SSetError> {
    let labels: Vec<Vec<Vec<usize>>> = (0..=trunc_dim)
        .map(|n| enumerate_maps(n, k, MapKind::All).into_iter().map(|f| f.values().to_vec()).collect())
        .collect();
    LabelIndex::new(labels).build_simplicial(
        |_, v, i| {
            let mut w = v.clone();
            w.remove(i);
            w
        },
        |_, v, i| {
            let mut w = v.clone();
            w.insert(i, v[i]);
            w
        },
    )
}

/// `∂Δ^k`: the simplices of `Δ^k` that miss at least one vertex.
pub fn standard_simplex_boundary(k: usize, trunc_dim: usize) -> Result<SimplicialSet, SSetError> {
    let full = standard_simplex(k, trunc_dim)?;
    let keep = Subcomplex::from_predicate(&full, |n, x| {
        let mut hit = vec![false; k + 1];
        for v in full.vertices(n, x) {
            hit[v] = true;
        }
        !hit.into_iter().all(|h| h)
    });
    Ok(sub_simplicial_set(&full, &keep)?.0)
}

/// Nerve of a finite category: `n`-simplices are chains of `n` composable
/// morphisms, with the starting object recorded for `n = 0`.
pub fn nerve(category: &FiniteCategory, trunc_dim: usize) -> Result<SimplicialSet, SSetError> {
    category.validate()?;
    type Chain = (usize, Vec<usize>);
    let mut labels: Vec<Vec<Chain>> = vec![(0..category.object_count()).map(|c| (c, Vec::new())).collect()];
    for n in 1..=trunc_dim {
        let mut next = Vec::new();
        for (start, fs) in &labels[n - 1] {
            let end = fs.last().map_or(*start, |&f| category.target(f));
            for &g in category.morphisms_from(end) {
                let mut chain = fs.clone();
                chain.push(g);
                next.push((*start, chain));
            }
        }
        labels.push(next);
    }
    let index = LabelIndex::new(labels);
    index.build_simplicial(
        |n, (start, fs), i| {
            if i == 0 {
                (category.target(fs[0]), fs[1..].to_vec())
            } else if i == n {
                (*start, fs[..n - 1].to_vec())
            } else {
                let mut chain = fs[..i - 1].to_vec();
                chain.push(category.compose(fs[i], fs[i - 1]).expect("composable chain"));
                chain.extend_from_slice(&fs[i + 1..]);
                (*start, chain)
            }
        },
        |_, (start, fs), i| {
            let object = if i == 0 { *start } else { category.target(fs[i - 1]) };
            let mut chain = fs.clone();
            chain.insert(i, category.identity(object));
            (*start, chain)
        },
    )
}

pub fn disjoint_union(x: &SimplicialSet, y: &SimplicialSet) -> Result<SimplicialSet, SSetError> {
    let d = x.trunc_dim();
    if y.trunc_dim() != d {
        return Err(SSetError::TruncMismatch(d, y.trunc_dim()));
    }
    let counts: Vec<usize> = (0..=d).map(|n| x.count(n) + y.count(n)).collect();
    let mut faces = vec![Vec::new(); d + 1];
    let mut degens = vec![Vec::new(); d + 1];
    for n in 0..=d {
        if n > 0 {
            faces[n].extend_from_slice(x.as_semi().face_table(n));
            let off = x.count(n - 1);
            faces[n].extend(y.as_semi().face_table(n).iter().map(|f| f + off));
        }
        if n < d {
            degens[n].extend_from_slice(x.degen_table(n));
            let off = x.count(n + 1);
            degens[n].extend(y.degen_table(n).iter().map(|s| s + off));
        }
    }
    SimplicialSet::from_tables(d, counts, faces, degens)
}

/// Dimensionwise product; the pair `(a, b)` of `n`-simplices gets id `a * |Y_n| + b`.
pub fn product(x: &SimplicialSet, y: &SimplicialSet) -> Result<SimplicialSet, SSetError> {
    let d = x.trunc_dim();
    if y.trunc_dim() != d {
        return Err(SSetError::TruncMismatch(d, y.trunc_dim()));
    }
    let counts: Vec<usize> = (0..=d).map(|n| x.count(n) * y.count(n)).collect();
    let mut faces = vec![Vec::new(); d + 1];
    let mut degens = vec![Vec::new(); d + 1];
    for n in 0..=d {
        for a in 0..x.count(n) {
            for b in 0..y.count(n) {
                if n > 0 {
                    for i in 0..=n {
                        faces[n].push(x.face(n, a, i) * y.count(n - 1) + y.face(n, b, i));
                    }
                }
                if n < d {
                    for i in 0..=n {
                        degens[n].push(x.degen(n, a, i) * y.count(n + 1) + y.degen(n, b, i));
                    }
                }
            }
        }
    }
    SimplicialSet::from_tables(d, counts, faces, degens)
}

/// A set of simplices, one id set per dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    pub simplices: Vec<BTreeSet<usize>>,
}

impl Subcomplex {
    pub fn empty(trunc_dim: usize) -> Self {
        Self {
            simplices: vec![BTreeSet::new(); trunc_dim + 1],
        }
    }

    pub fn whole(x: &SimplicialSet) -> Self {
        Self::from_predicate(x, |_, _| true)
    }

    pub fn from_predicate(x: &SimplicialSet, keep: impl Fn(usize, usize) -> bool) -> Self {
        Self {
            simplices: (0..=x.trunc_dim())
                .map(|n| (0..x.count(n)).filter(|&s| keep(n, s)).collect())
                .collect(),
        }
    }

    /// Smallest subcomplex containing the given `(dim, id)` simplices.
    pub fn generated_by(x: &SimplicialSet, generators: &[(usize, usize)]) -> Self {
        let mut out = Self::empty(x.trunc_dim());
        let mut stack: Vec<(usize, usize)> = generators.to_vec();
        while let Some((n, s)) = stack.pop() {
            if !out.simplices[n].insert(s) {
                continue;
            }
            if n > 0 {
                stack.extend(x.faces_of(n, s).iter().map(|&f| (n - 1, f)));
            }
            stack.extend(x.degens_of(n, s).iter().map(|&t| (n + 1, t)));
        }
        out
    }

    pub fn contains(&self, n: usize, x: usize) -> bool {
        self.simplices.get(n).is_some_and(|s| s.contains(&x))
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.iter().all(BTreeSet::is_empty)
    }

    pub fn check_closed(&self, x: &SimplicialSet) -> Result<(), SSetError> {
        if self.simplices.len() != x.trunc_dim() + 1 {
            return Err(SSetError::Shape("subcomplex dimension count differs from the ambient set".into()));
        }
        for (n, set) in self.simplices.iter().enumerate() {
            for &s in set {
                if s >= x.count(n) {
                    return Err(SSetError::Shape(format!("{n}-simplex {s} does not exist")));
                }
                if let Some(i) = x.faces_of(n, s).iter().position(|f| !self.contains(n - 1, *f)) {
                    return Err(SSetError::NotClosed(format!("face d{i} of {n}-simplex {s} is missing")));
                }
                if let Some(i) = x.degens_of(n, s).iter().position(|t| !self.contains(n + 1, *t)) {
                    return Err(SSetError::NotClosed(format!("degeneracy s{i} of {n}-simplex {s} is missing")));
                }
            }
        }
        Ok(())
    }
}

/// Restricts `x` to a closed subcomplex, renumbering densely in the old order.
/// The returned map is the inclusion.
pub fn sub_simplicial_set(x: &SimplicialSet, keep: &Subcomplex) -> Result<(SimplicialSet, SimplexMap), SSetError> {
    keep.check_closed(x)?;
    let d = x.trunc_dim();
    let old_ids: Vec<Vec<usize>> = keep.simplices.iter().map(|s| s.iter().copied().collect()).collect();
    let new_id: Vec<HashMap<usize, usize>> = old_ids
        .iter()
        .map(|ids| ids.iter().enumerate().map(|(i, &o)| (o, i)).collect())
        .collect();
    let counts: Vec<usize> = old_ids.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); d + 1];
    let mut degens = vec![Vec::new(); d + 1];
    for n in 0..=d {
        for &s in &old_ids[n] {
            if n > 0 {
                faces[n].extend(x.faces_of(n, s).iter().map(|f| new_id[n - 1][f]));
            }
            degens[n].extend(x.degens_of(n, s).iter().map(|t| new_id[n + 1][t]));
        }
    }
    let set = SimplicialSet::from_tables(d, counts, faces, degens)?;
    Ok((set, SimplexMap { maps: old_ids }))
}

/// A quotient simplicial set together with the quotient map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub set: SimplicialSet,
    pub map: SimplexMap,
}

/// Collapses each listed subcomplex to a point. This is the pushout of
/// `X <- ⊔ A_j -> ⊔ *`, computed dimensionwise; new ids follow the first
/// occurrence of each class in the old order.
pub fn collapse(x: &SimplicialSet, subcomplexes: &[Subcomplex]) -> Result<Quotient, SSetError> {
    let d = x.trunc_dim();
    let mut owner: Vec<Vec<Option<usize>>> = (0..=d).map(|n| vec![None; x.count(n)]).collect();
    for (j, a) in subcomplexes.iter().enumerate() {
        a.check_closed(x)?;
        for (n, set) in a.simplices.iter().enumerate() {
            for &s in set {
                if owner[n][s].is_some() {
                    return Err(SSetError::Overlap { dim: n, id: s });
                }
                owner[n][s] = Some(j);
            }
        }
    }
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Class {
        Point(usize),
        Kept(usize),
    }
    let mut maps = Vec::with_capacity(d + 1);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut ids: HashMap<Class, usize> = HashMap::new();
        let mut row = Vec::with_capacity(x.count(n));
        let mut rep = Vec::new();
        for s in 0..x.count(n) {
            let class = owner[n][s].map_or(Class::Kept(s), Class::Point);
            let next = ids.len();
            let id = *ids.entry(class).or_insert_with(|| {
                rep.push(s);
                next
            });
            row.push(id);
        }
        maps.push(row);
        reps.push(rep);
    }
    let counts: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut faces = vec![Vec::new(); d + 1];
    let mut degens = vec![Vec::new(); d + 1];
    for n in 0..=d {
        for &s in &reps[n] {
            if n > 0 {
                faces[n].extend(x.faces_of(n, s).iter().map(|&f| maps[n - 1][f]));
            }
            degens[n].extend(x.degens_of(n, s).iter().map(|&t| maps[n + 1][t]));
        }
    }
    let set = SimplicialSet::from_tables(d, counts, faces, degens)?;
    let map = SimplexMap { maps };
    let violations = map.simplicial_violations(x, &set);
    if let Some(v) = violations.first() {
        return Err(SSetError::Integrity(format!("quotient map is not simplicial: {v}")));
    }
    Ok(Quotient { set, map })
}

/// A random semisimplicial set with between one and `max_per_dim` vertices and
/// up to `max_per_dim` simplices in each higher dimension, each with a
/// uniformly chosen compatible boundary.
pub fn random_semisimplicial(rng: &mut impl Rng, trunc_dim: usize, max_per_dim: usize) -> SemisimplicialSet {
    assert!(max_per_dim >= 1);
    let mut counts = vec![rng.gen_range(1..=max_per_dim)];
    let mut faces: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=trunc_dim {
        let partial = SemisimplicialSet::from_tables(n - 1, counts.clone(), faces.clone()).expect("valid prefix");
        let boundaries = compatible_boundaries(&partial, n);
        let count = if boundaries.is_empty() { 0 } else { rng.gen_range(0..=max_per_dim) };
        let mut table = Vec::with_capacity(count * (n + 1));
        for _ in 0..count {
            table.extend_from_slice(&boundaries[rng.gen_range(0..boundaries.len())]);
        }
        counts.push(count);
        faces.push(table);
    }
    SemisimplicialSet::new(trunc_dim, counts, faces).expect("generated tables satisfy the face identities")
}

/// All `(n + 1)`-tuples of `(n - 1)`-simplices that could be the faces of an
/// `n`-simplex.
pub(crate) fn compatible_boundaries(x: &SemisimplicialSet, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n + 1);
    extend_boundary(x, n, &mut current, &mut out);
    out
}

fn extend_boundary(x: &SemisimplicialSet, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let k = current.len();
    if k == n + 1 {
        out.push(current.clone());
        return;
    }
    for cand in 0..x.count(n - 1) {
        // d_j(face_k) = d_{k-1}(face_j) for j < k
        let ok = n < 2 || (0..k).all(|j| x.face(n - 1, cand, j) == x.face(n - 1, current[j], k - 1));
        if ok {
            current.push(cand);
            extend_boundary(x, n, current, out);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_simplex_counts() {
        let d1 = standard_simplex(1, 3).unwrap();
        assert_eq!(d1.count(2), 4);
        let d2 = standard_simplex(2, 3).unwrap();
        assert_eq!(d2.count(1), 6);
        for k in 0..=3 {
            let x = standard_simplex(k, 4).unwrap();
            x.validate().unwrap();
            for n in 0..=4 {
                assert_eq!(x.count(n) as u128, crate::delta::binomial(n + k + 1, k));
            }
            let mut nondeg = vec![0; 5];
            for (n, c) in nondeg.iter_mut().enumerate() {
                *c = crate::delta::binomial(k + 1, n + 1) as usize;
            }
            assert_eq!(x.nondegenerate_counts(), nondeg);
        }
    }

    #[test]
    fn action_on_standard_simplex_precomposes_vertex_sequences() {
        let x = standard_simplex(2, 4).unwrap();
        for n in 0..=4 {
            for s in 0..x.count(n) {
                let v = x.vertices(n, s);
                for m in 0..=4 {
                    for f in enumerate_maps(m, n, MapKind::All) {
                        let image = x.act(n, s, &f).unwrap();
                        let expected: Vec<usize> = f.values().iter().map(|&i| v[i]).collect();
                        assert_eq!(x.vertices(m, image), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_of_triangle() {
        let b = standard_simplex_boundary(2, 3).unwrap();
        b.validate().unwrap();
        assert_eq!(b.nondegenerate_counts(), vec![3, 3, 0, 0]);
    }

    #[test]
    fn nerve_of_terminal_and_linear_orders() {
        let pt = nerve(&FiniteCategory::terminal(), 3).unwrap();
        assert_eq!(pt, standard_simplex(0, 3).unwrap());
        for k in 0..=3 {
            let nk = nerve(&FiniteCategory::linear_order(k), 4).unwrap();
            nk.validate().unwrap();
            let dk = standard_simplex(k, 4).unwrap();
            assert_eq!(nk.counts(), dk.counts());
            // simplices of both are determined by their vertex sequences
            for n in 0..=4 {
                let mut a: Vec<_> = (0..nk.count(n)).map(|s| nk.vertices(n, s)).collect();
                let mut b: Vec<_> = (0..dk.count(n)).map(|s| dk.vertices(n, s)).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn nerve_of_walking_isomorphism() {
        let x = nerve(&FiniteCategory::walking_isomorphism(), 3).unwrap();
        x.validate().unwrap();
        assert_eq!(x.nondegenerate(1).len(), 2);
        assert_eq!(x.nondegenerate(2).len(), 2);
    }

    #[test]
    fn products_and_unions() {
        let pt = standard_simplex(0, 3).unwrap();
        let y = standard_simplex(2, 3).unwrap();
        assert_eq!(product(&pt, &y).unwrap(), y);
        let sq = product(&standard_simplex(1, 3).unwrap(), &standard_simplex(1, 3).unwrap()).unwrap();
        sq.validate().unwrap();
        assert_eq!(sq.count(1), 9);
        assert_eq!(sq.nondegenerate_counts(), vec![4, 5, 2, 0]);
        let u = disjoint_union(&pt, &y).unwrap();
        u.validate().unwrap();
        for n in 0..=3 {
            assert_eq!(u.count(n), pt.count(n) + y.count(n));
        }
        assert!(matches!(product(&pt, &standard_simplex(0, 2).unwrap()), Err(SSetError::TruncMismatch(3, 2))));
    }

    #[test]
    fn collapse_trivial_cases() {
        let x = standard_simplex(1, 3).unwrap();
        assert_eq!(collapse(&x, &[]).unwrap().set, x);
        let q = collapse(&x, &[Subcomplex::whole(&x)]).unwrap();
        assert_eq!(q.set, standard_simplex(0, 3).unwrap());
    }

    #[test]
    fn collapse_rejects_bad_subsets() {
        let x = standard_simplex(1, 2).unwrap();
        let mut open = Subcomplex::empty(2);
        open.simplices[1].insert(1); // the 01 edge without its vertices
        assert!(matches!(collapse(&x, &[open]), Err(SSetError::NotClosed(_))));
        let v0 = Subcomplex::generated_by(&x, &[(0, 0)]);
        assert!(matches!(collapse(&x, &[v0.clone(), v0]), Err(SSetError::Overlap { .. })));
    }

    #[test]
    fn collapsing_an_edge_of_a_triangle() {
        let x = standard_simplex(2, 3).unwrap();
        // the 01 edge is the map (0,1) which is id 1 in dimension 1
        assert_eq!(x.vertices(1, 1), vec![0, 1]);
        let edge = Subcomplex::generated_by(&x, &[(1, 1)]);
        let q = collapse(&x, &[edge]).unwrap();
        q.set.validate().unwrap();
        assert_eq!(q.set.nondegenerate_counts(), vec![2, 2, 1, 0]);
    }

    #[test]
    fn random_sets_are_valid_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_semisimplicial(&mut a, 4, 5);
            x.validate().unwrap();
            assert!(x.counts().iter().all(|&c| c <= 5));
            assert_eq!(x, random_semisimplicial(&mut b, 4, 5));
        }
    }
}
