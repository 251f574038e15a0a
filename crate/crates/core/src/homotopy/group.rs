//! Edge-path presentations of the fundamental group and a bounded triviality
//! decision: idempotent rule, Tietze elimination, abelianization, coset
//! enumeration.

use std::collections::{BTreeSet, VecDeque};

use num_traits::One;
use serde::Serialize;

use super::smith::{reduce, SparseMatrix};
use super::HomotopyError;
use crate::sset::SimplicialSet;

/// Default cap on coset table rows.
pub const DEFAULT_BUDGET: usize = 10_000;

/// A letter is `(generator, inverted)`.
pub type Letter = (usize, bool);
pub type Word = Vec<Letter>;

/// `lhs = rhs` in the group generated by `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    /// `lhs · rhs⁻¹`, freely reduced.
    pub fn relator(&self) -> Word {
        let mut w = self.lhs.clone();
        w.extend(inverse(&self.rhs));
        free_reduce(&w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    /// Names of the generators; for edge-path presentations, the edge IDs.
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

impl GroupPresentation {
    pub fn from_relators(generators: usize, relators: Vec<Word>) -> Self {
        Self {
            generators: (0..generators).map(|g| format!("g{g}")).collect(),
            relations: relators.into_iter().map(|lhs| Relation { lhs, rhs: Vec::new() }).collect(),
        }
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&(g, inv)| format!("{}{}", self.generators[g], if inv { "⁻¹" } else { "" }))
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl std::fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| format!("{} = {}", self.word_to_string(&r.lhs), self.word_to_string(&r.rhs)))
            .collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rels.join(", "))
    }
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last().is_some_and(|&(g, inv)| g == l.0 && inv != l.1) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 {
        let (a, b) = (w[0], w[w.len() - 1]);
        if a.0 == b.0 && a.1 != b.1 {
            w.pop();
            w.remove(0);
        } else {
            break;
        }
    }
    w
}

/// Presentation relative to a breadth-first spanning tree of the 1-skeleton.
/// Each nondegenerate 2-simplex `T` contributes `[d₂T]·[d₀T] = [d₁T]`, where
/// tree edges and degenerate edges read as the identity.
pub fn pi1_presentation(x: &SimplicialSet, basepoint: usize) -> Result<GroupPresentation, HomotopyError> {
    let vertices = x.count(0);
    if basepoint >= vertices {
        return Err(HomotopyError::Basepoint { basepoint, vertices });
    }
    let edges = if x.trunc_dim() >= 1 { x.nondegenerate(1) } else { Vec::new() };
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for &e in &edges {
        let (s, t) = (x.face(1, e, 1), x.face(1, e, 0));
        incident[s].push((e, t));
        incident[t].push((e, s));
    }
    let mut seen = vec![false; vertices];
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([basepoint]);
    seen[basepoint] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &incident[v] {
            if !seen[w] {
                seen[w] = true;
                tree.insert(e);
                queue.push_back(w);
            }
        }
    }
    if let Some(unreached) = seen.iter().position(|s| !s) {
        return Err(HomotopyError::Disconnected { basepoint, unreached });
    }
    let generators: Vec<usize> = edges.iter().copied().filter(|e| !tree.contains(e)).collect();
    let letter = |e: usize| -> Word {
        match generators.binary_search(&e) {
            Ok(g) => vec![(g, false)],
            Err(_) => Vec::new(),
        }
    };
    let mut relations = Vec::new();
    if x.trunc_dim() >= 2 {
        for t in x.nondegenerate(2) {
            let mut lhs = letter(x.face(2, t, 2));
            lhs.extend(letter(x.face(2, t, 0)));
            let rhs = letter(x.face(2, t, 1));
            if lhs != rhs {
                relations.push(Relation { lhs, rhs });
            }
        }
    }
    Ok(GroupPresentation {
        generators: generators.iter().map(|e| format!("e{e}")).collect(),
        relations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Triviality {
    Trivial,
    Nontrivial,
    Unknown,
}

impl std::fmt::Display for Triviality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Triviality::Trivial => "trivial",
            Triviality::Nontrivial => "nontrivial",
            Triviality::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialityReport {
    pub verdict: Triviality,
    /// One line per simplification or decision step.
    pub steps: Vec<String>,
    pub cosets_used: usize,
    pub budget: usize,
}

/// Bounded decision of whether a presentation defines the trivial group.
pub fn is_trivial_group(p: &GroupPresentation, budget: usize) -> TrivialityReport {
    let n = p.generators.len();
    let mut steps = Vec::new();
    let mut killed = vec![false; n];

    // x·x = x forces x = 1
    for r in &p.relations {
        let (lhs, rhs) = (free_reduce(&r.lhs), free_reduce(&r.rhs));
        if let [y] = rhs[..] {
            if lhs == [y, y] && !killed[y.0] {
                killed[y.0] = true;
                steps.push(format!("idempotent rule: {} = 1", p.generators[y.0]));
            }
        }
    }

    let mut alive: Vec<bool> = killed.iter().map(|k| !k).collect();
    let mut relators: Vec<Word> = p
        .relations
        .iter()
        .map(|r| cyclic_reduce(&strip(&r.relator(), &killed)))
        .filter(|w| !w.is_empty())
        .collect();

    // Tietze: drop a generator occurring exactly once in some relator
    loop {
        let mut changed = false;
        for ri in 0..relators.len() {
            let w = relators[ri].clone();
            let Some(pos) = (0..w.len()).find(|&i| w.iter().filter(|l| l.0 == w[i].0).count() == 1) else {
                continue;
            };
            let (g, inv) = w[pos];
            // w = a·g^±·b, so g = (b·a)^∓
            let mut rest: Word = w[pos + 1..].to_vec();
            rest.extend_from_slice(&w[..pos]);
            let value = if inv { free_reduce(&rest) } else { inverse(&rest) };
            relators.remove(ri);
            relators = relators
                .iter()
                .map(|r| {
                    let mut out = Vec::new();
                    for &(h, hinv) in r {
                        if h == g {
                            out.extend(if hinv { inverse(&value) } else { value.clone() });
                        } else {
                            out.push((h, hinv));
                        }
                    }
                    cyclic_reduce(&out)
                })
                .filter(|w| !w.is_empty())
                .collect();
            alive[g] = false;
            steps.push(format!("eliminated {} using a relator of length {}", p.generators[g], w.len()));
            changed = true;
            break;
        }
        if !changed {
            break;
        }
    }
    let remaining: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    if remaining.is_empty() {
        steps.push("no generators remain".into());
        return TrivialityReport { verdict: Triviality::Trivial, steps, cosets_used: 0, budget };
    }

    // renumber the survivors
    let mut slot = vec![usize::MAX; n];
    for (i, &g) in remaining.iter().enumerate() {
        slot[g] = i;
    }
    let relators: Vec<Word> = relators
        .iter()
        .map(|w| w.iter().map(|&(g, inv)| (slot[g], inv)).collect())
        .collect();

    let mut abel = SparseMatrix::new(relators.len(), remaining.len());
    for (r, w) in relators.iter().enumerate() {
        for &(g, inv) in w {
            abel.add(r, g, if inv { -1 } else { 1 });
        }
    }
    let red = reduce(&abel);
    let free_rank = remaining.len() - red.rank;
    if free_rank > 0 || !red.torsion.is_empty() {
        let mut parts: Vec<String> = Vec::new();
        if free_rank > 0 {
            parts.push(format!("Z^{free_rank}"));
        }
        parts.extend(red.torsion.iter().filter(|t| !t.is_one()).map(|t| format!("Z/{t}")));
        steps.push(format!("abelianization {}", parts.join(" + ")));
        return TrivialityReport { verdict: Triviality::Nontrivial, steps, cosets_used: 0, budget };
    }
    steps.push(format!("abelianization trivial with {} generators left", remaining.len()));

    let outcome = CosetTable::enumerate(remaining.len(), &relators, budget);
    let verdict = match outcome.index {
        Some(1) => Triviality::Trivial,
        Some(_) => Triviality::Nontrivial,
        None => Triviality::Unknown,
    };
    match outcome.index {
        Some(i) => steps.push(format!("coset enumeration closed with index {i}")),
        None => steps.push(format!("coset enumeration exceeded {budget} rows")),
    }
    TrivialityReport { verdict, steps, cosets_used: outcome.defined, budget }
}

fn strip(w: &[Letter], killed: &[bool]) -> Word {
    w.iter().copied().filter(|l| !killed[l.0]).collect()
}

struct Enumeration {
    index: Option<usize>,
    defined: usize,
}

/// Coset table over the trivial subgroup, filled in HLT order with coincidence
/// processing. Column `2g` is generator `g`, column `2g + 1` its inverse.
struct CosetTable {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    columns: usize,
}

impl CosetTable {
    fn enumerate(generators: usize, relators: &[Word], budget: usize) -> Enumeration {
        let columns = 2 * generators;
        let mut ct = CosetTable {
            table: vec![vec![None; columns]],
            parent: vec![0],
            columns,
        };
        let rels: Vec<Vec<usize>> = relators
            .iter()
            .map(|w| w.iter().map(|&(g, inv)| 2 * g + usize::from(inv)).collect())
            .collect();
        let mut c = 0;
        while c < ct.table.len() {
            if ct.table.len() > budget {
                return Enumeration { index: None, defined: ct.table.len() };
            }
            for r in &rels {
                if !ct.live(c) {
                    break;
                }
                ct.scan_and_fill(c, r);
            }
            if ct.live(c) {
                for x in 0..columns {
                    if ct.table[c][x].is_none() {
                        ct.define(c, x);
                    }
                }
            }
            c += 1;
        }
        let index = (0..ct.table.len()).filter(|&i| ct.live(i)).count();
        Enumeration { index: Some(index), defined: ct.table.len() }
    }

    fn inv(x: usize) -> usize {
        x ^ 1
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) {
        let n = self.table.len();
        self.table.push(vec![None; self.columns]);
        self.parent.push(n);
        self.table[c][x] = Some(n);
        self.table[n][Self::inv(x)] = Some(c);
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() - 1);
        loop {
            while i <= j {
                match self.table[f][w[i]] {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i {
                match self.table[b][Self::inv(w[j])] {
                    Some(next) => {
                        b = next;
                        if j == 0 {
                            // the whole word scanned backwards; j < i is implied
                            self.coincidence(f, b);
                            return;
                        }
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i {
                self.coincidence(f, b);
                return;
            }
            if i == j {
                self.table[f][w[i]] = Some(b);
                self.table[b][Self::inv(w[i])] = Some(f);
                return;
            }
            self.define(f, w[i]);
        }
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            queue.push(drop);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut qi = 0;
        while qi < queue.len() {
            let e = queue[qi];
            qi += 1;
            for x in 0..self.columns {
                let Some(f) = self.table[e][x] else { continue };
                if self.table[f][Self::inv(x)] == Some(e) {
                    self.table[f][Self::inv(x)] = None;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][Self::inv(x)] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][Self::inv(x)] = Some(e1);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjunction::{delta_inj, plus};
    use crate::sset::{standard_simplex, standard_simplex_boundary};

    fn w(letters: &[i32]) -> Word {
        letters.iter().map(|&l| ((l.unsigned_abs() - 1) as usize, l < 0)).collect()
    }

    fn index_of(gens: usize, rels: &[&[i32]]) -> Option<usize> {
        let rels: Vec<Word> = rels.iter().map(|r| w(r)).collect();
        CosetTable::enumerate(gens, &rels, 100_000).index
    }

    #[test]
    fn point_with_free_degeneracies_has_one_idempotent_generator() {
        let p = plus(&delta_inj(0, 3).unwrap()).set;
        let pres = pi1_presentation(&p, 0).unwrap();
        assert_eq!(pres.generators.len(), 1);
        assert_eq!(pres.relations, vec![Relation { lhs: w(&[1, 1]), rhs: w(&[1]) }]);
        let report = is_trivial_group(&pres, DEFAULT_BUDGET);
        assert_eq!(report.verdict, Triviality::Trivial);
        assert!(report.steps[0].starts_with("idempotent rule"));
    }

    #[test]
    fn circle_and_disk() {
        let circle = pi1_presentation(&standard_simplex_boundary(2, 2).unwrap(), 0).unwrap();
        assert_eq!(circle.generators.len(), 1);
        assert!(circle.relations.is_empty());
        assert_eq!(is_trivial_group(&circle, DEFAULT_BUDGET).verdict, Triviality::Nontrivial);
        let disk = pi1_presentation(&standard_simplex(2, 2).unwrap(), 1).unwrap();
        assert_eq!(is_trivial_group(&disk, DEFAULT_BUDGET).verdict, Triviality::Trivial);
    }

    #[test]
    fn disconnected_and_bad_basepoint() {
        let two = crate::sset::disjoint_union(&standard_simplex(0, 2).unwrap(), &standard_simplex(0, 2).unwrap()).unwrap();
        assert!(matches!(pi1_presentation(&two, 0), Err(HomotopyError::Disconnected { unreached: 1, .. })));
        assert!(matches!(pi1_presentation(&two, 5), Err(HomotopyError::Basepoint { .. })));
    }

    #[test]
    fn small_presentations() {
        let free = GroupPresentation::from_relators(1, vec![]);
        assert_eq!(is_trivial_group(&free, 100).verdict, Triviality::Nontrivial);
        let torus = GroupPresentation::from_relators(2, vec![w(&[1, 2, -1, -2])]);
        assert_eq!(is_trivial_group(&torus, 100).verdict, Triviality::Nontrivial);
        let idem = GroupPresentation {
            generators: vec!["e".into()],
            relations: vec![Relation { lhs: w(&[1, 1]), rhs: w(&[1]) }],
        };
        assert_eq!(is_trivial_group(&idem, 100).verdict, Triviality::Trivial);
    }

    #[test]
    fn coset_enumeration_indices() {
        // cyclic group of order 5
        assert_eq!(index_of(1, &[&[1, 1, 1, 1, 1]]), Some(5));
        // S3 = ⟨a, b | a², b³, (ab)²⟩
        assert_eq!(index_of(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]), Some(6));
        // S4 = ⟨a, b | a², b³, (ab)⁴⟩
        assert_eq!(index_of(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2]]), Some(24));
        // binary icosahedral group ⟨r, s, t | r² = s³ = t⁵ = rst⟩
        assert_eq!(
            index_of(3, &[&[1, 1, -3, -2, -1], &[2, 2, 2, -3, -2, -1], &[3, 3, 3, 3, 3, -3, -2, -1]]),
            Some(120)
        );
        // PSL(2, 7) = ⟨a, b | a², b³, (ab)⁷, [a, b]⁴⟩
        assert_eq!(
            index_of(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2], &[1, 2, -1, -2, 1, 2, -1, -2, 1, 2, -1, -2, 1, 2, -1, -2]]),
            Some(168)
        );
        // trivial group presented with redundant generators
        assert_eq!(index_of(2, &[&[1], &[1, 2]]), Some(1));
    }

    #[test]
    fn perfect_group_needs_enumeration() {
        // A5 = ⟨a, b | a², b³, (ab)⁵⟩ has trivial abelianization
        let a5 = GroupPresentation::from_relators(2, vec![w(&[1, 1]), w(&[2, 2, 2]), w(&[1, 2, 1, 2, 1, 2, 1, 2, 1, 2])]);
        let r = is_trivial_group(&a5, DEFAULT_BUDGET);
        assert_eq!(r.verdict, Triviality::Nontrivial);
        assert!(r.steps.iter().any(|s| s.contains("index 60")));
        let tiny = is_trivial_group(&a5, 10);
        assert_eq!(tiny.verdict, Triviality::Unknown);
    }

    #[test]
    fn tietze_elimination_reaches_trivial() {
        // ⟨a, b | a·b, b⟩
        let p = GroupPresentation::from_relators(2, vec![w(&[1, 2]), w(&[2])]);
        let r = is_trivial_group(&p, 10);
        assert_eq!(r.verdict, Triviality::Trivial);
        assert_eq!(r.cosets_used, 0);
    }
}
