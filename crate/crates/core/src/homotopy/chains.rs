use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::smith::{reduce, SparseMatrix};
use super::HomotopyError;
use crate::sset::SimplicialSet;

/// Normalized chains: free on nondegenerate simplices, degenerate faces dropped.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// Nondegenerate simplex IDs per degree; position in the list is the basis index.
    pub basis: Vec<Vec<usize>>,
    /// `boundaries[n]` maps degree `n` to degree `n - 1`; `boundaries[0]` is empty.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Degrees `n` with `∂_{n-1} ∘ ∂_n ≠ 0`.
    pub fn square_violations(&self) -> Vec<usize> {
        (2..=self.top_degree())
            .filter(|&n| !self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
            .collect()
    }
}

pub fn normalized_chains(x: &SimplicialSet) -> ChainComplex {
    let top = x.trunc_dim();
    let basis: Vec<Vec<usize>> = (0..=top).map(|n| x.nondegenerate(n)).collect();
    let position: Vec<HashMap<usize, usize>> = basis
        .iter()
        .map(|ids| ids.iter().enumerate().map(|(i, &id)| (id, i)).collect())
        .collect();
    let mut boundaries = vec![SparseMatrix::new(0, basis[0].len())];
    for n in 1..=top {
        let mut m = SparseMatrix::new(basis[n - 1].len(), basis[n].len());
        for (col, &s) in basis[n].iter().enumerate() {
            for i in 0..=n {
                if let Some(&row) = position[n - 1].get(&x.face(n, s, i)) {
                    m.add(row, col, if i % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex { basis, boundaries }
}

/// One homology group: free rank and the nontrivial invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(serialize_with = "torsion_as_numbers")]
    pub torsion: Vec<BigInt>,
}

/// Machine-sized factors as JSON numbers, larger ones as decimal strings.
fn torsion_as_numbers<S: Serializer>(torsion: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(torsion.len()))?;
    for t in torsion {
        match t.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&t.to_string())?,
        }
    }
    seq.end()
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_integers(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `H_0, …, H_max_deg` over the integers.
pub fn homology(c: &ChainComplex, max_deg: usize) -> Result<Vec<HomologyGroup>, HomotopyError> {
    if max_deg >= c.top_degree() {
        return Err(HomotopyError::Range {
            max_deg,
            top: c.top_degree(),
        });
    }
    // reductions[n] describes ∂_n; ∂_0 is zero
    let reductions: Vec<_> = (0..=max_deg + 1)
        .map(|n| if n == 0 { Default::default() } else { reduce(&c.boundaries[n]) })
        .collect();
    Ok((0..=max_deg)
        .map(|n| {
            let out: &super::smith::Reduction = &reductions[n];
            let inc = &reductions[n + 1];
            HomologyGroup {
                betti: c.basis[n].len() - out.rank - inc.rank,
                torsion: inc.torsion.clone(),
            }
        })
        .collect())
}
