//! JSON documents for simplicial sets, semisimplicial sets and finite categories.
//!
//! A semisimplicial document is a simplicial one without `degens` keys. Dimension
//! 0 lists no faces and, for simplicial sets, the top dimension lists no degeneracies.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CategoryError, FiniteCategory, SSetError, SemisimplicialSet, SimplicialSet};
use crate::delta::PosetMap;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid simplicial data: {0}")]
    Data(#[from] SSetError),
    #[error("invalid category: {0}")]
    Category(#[from] CategoryError),
    #[error("invalid document: {0}")]
    Document(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DimDoc {
    pub count: usize,
    pub faces: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degens: Option<Vec<Vec<usize>>>,
}

/// Origin of a simplex of a free-degeneracy construction.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PlusPairDoc {
    pub base: usize,
    pub surj: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    pub trunc_dim: usize,
    pub dims: Vec<DimDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_pairs: Option<Vec<Vec<PlusPairDoc>>>,
}

/// A parsed set document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySet {
    Simplicial(SimplicialSet),
    Semisimplicial(SemisimplicialSet),
}

impl AnySet {
    pub fn trunc_dim(&self) -> usize {
        match self {
            AnySet::Simplicial(x) => x.trunc_dim(),
            AnySet::Semisimplicial(x) => x.trunc_dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnySet::Simplicial(_) => "simplicial",
            AnySet::Semisimplicial(_) => "semisimplicial",
        }
    }
}

fn chunk(table: &[usize], width: usize) -> Vec<Vec<usize>> {
    table.chunks(width).map(<[usize]>::to_vec).collect()
}

fn semi_dims(x: &SemisimplicialSet) -> Vec<DimDoc> {
    (0..=x.trunc_dim())
        .map(|n| DimDoc {
            count: x.count(n),
            faces: if n == 0 { Vec::new() } else { chunk(x.face_table(n), n + 1) },
            degens: None,
        })
        .collect()
}

pub fn simplicial_doc(x: &SimplicialSet) -> SetDoc {
    let mut dims = semi_dims(x.as_semi());
    for (n, dim) in dims.iter_mut().enumerate() {
        dim.degens = Some(if n == x.trunc_dim() { Vec::new() } else { chunk(x.degen_table(n), n + 1) });
    }
    SetDoc {
        trunc_dim: x.trunc_dim(),
        dims,
        plus_pairs: None,
    }
}

pub fn semisimplicial_doc(x: &SemisimplicialSet) -> SetDoc {
    SetDoc {
        trunc_dim: x.trunc_dim(),
        dims: semi_dims(x),
        plus_pairs: None,
    }
}

/// Per dimension, `(base id, surjection)` for each simplex.
pub fn plus_pairs_doc(pairs: &[Vec<(usize, PosetMap)>]) -> Vec<Vec<PlusPairDoc>> {
    pairs
        .iter()
        .map(|row| {
            row.iter()
                .map(|(base, s)| PlusPairDoc {
                    base: *base,
                    surj: s.values().to_vec(),
                })
                .collect()
        })
        .collect()
}

/// Compact single-line JSON terminated by a newline.
pub fn to_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn simplicial_to_json(x: &SimplicialSet) -> String {
    to_line(&simplicial_doc(x))
}

pub fn semisimplicial_to_json(x: &SemisimplicialSet) -> String {
    to_line(&semisimplicial_doc(x))
}

fn flatten(rows: &[Vec<usize>], n: usize, width: usize, what: &str) -> Result<Vec<usize>, JsonError> {
    let mut out = Vec::with_capacity(rows.len() * width);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(JsonError::Document(format!(
                "dimension {n}: {what} entry {i} has {} indices, expected {width}",
                row.len()
            )));
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

impl SetDoc {
    pub fn into_set(self) -> Result<AnySet, JsonError> {
        let d = self.trunc_dim;
        if self.dims.len() != d + 1 {
            return Err(JsonError::Document(format!(
                "trunc_dim is {d} but {} dimensions are listed",
                self.dims.len()
            )));
        }
        let with_degens = self.dims.iter().filter(|dim| dim.degens.is_some()).count();
        if with_degens != 0 && with_degens != d + 1 {
            return Err(JsonError::Document(
                "either every dimension or none must carry degens".into(),
            ));
        }
        let counts: Vec<usize> = self.dims.iter().map(|dim| dim.count).collect();
        let mut faces = Vec::with_capacity(d + 1);
        let mut degens = Vec::with_capacity(d + 1);
        for (n, dim) in self.dims.iter().enumerate() {
            let face_rows = if n == 0 { 0 } else { dim.count };
            if dim.faces.len() != face_rows {
                return Err(JsonError::Document(format!(
                    "dimension {n}: {} face entries for {face_rows} simplices",
                    dim.faces.len()
                )));
            }
            faces.push(flatten(&dim.faces, n, n + 1, "face")?);
            if let Some(rows) = &dim.degens {
                let degen_rows = if n == d { 0 } else { dim.count };
                if rows.len() != degen_rows {
                    return Err(JsonError::Document(format!(
                        "dimension {n}: {} degeneracy entries for {degen_rows} simplices",
                        rows.len()
                    )));
                }
                degens.push(flatten(rows, n, n + 1, "degeneracy")?);
            }
        }
        if with_degens == 0 {
            Ok(AnySet::Semisimplicial(SemisimplicialSet::new(d, counts, faces)?))
        } else {
            Ok(AnySet::Simplicial(SimplicialSet::new(d, counts, faces, degens)?))
        }
    }
}

/// Parses and validates a set document.
pub fn parse_set(text: &str) -> Result<AnySet, JsonError> {
    let doc: SetDoc = serde_json::from_str(text)?;
    doc.into_set()
}

pub fn parse_simplicial(text: &str) -> Result<SimplicialSet, JsonError> {
    match parse_set(text)? {
        AnySet::Simplicial(x) => Ok(x),
        AnySet::Semisimplicial(_) => Err(JsonError::Document("expected a simplicial set (degens missing)".into())),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub src: usize,
    pub tgt: usize,
}

/// `compose` lists `[g, f, g∘f]` for every composable pair, sorted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub compose: Vec<[usize; 3]>,
    pub ids: Vec<usize>,
}

pub fn category_doc(c: &FiniteCategory) -> CategoryDoc {
    CategoryDoc {
        objects: c.object_labels().to_vec(),
        morphisms: c
            .morphism_endpoints()
            .into_iter()
            .map(|(src, tgt)| MorphismDoc { src, tgt })
            .collect(),
        compose: c.composite_triples().into_iter().map(|(g, f, h)| [g, f, h]).collect(),
        ids: c.identities().to_vec(),
    }
}

pub fn category_to_json(c: &FiniteCategory) -> String {
    to_line(&category_doc(c))
}

pub fn parse_category(text: &str) -> Result<FiniteCategory, JsonError> {
    let doc: CategoryDoc = serde_json::from_str(text)?;
    Ok(FiniteCategory::new(
        doc.objects,
        doc.morphisms.into_iter().map(|m| (m.src, m.tgt)).collect(),
        doc.ids,
        doc.compose.into_iter().map(|[g, f, h]| (g, f, h)).collect(),
    )?)
}
