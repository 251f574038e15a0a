//! Normalized chains, integer homology, edge-path fundamental groups and
//! degree-bounded contractibility probes.

mod chains;
mod group;
mod probe;
pub mod smith;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use chains::{homology, normalized_chains, ChainComplex, HomologyGroup};
pub use group::{
    free_reduce, inverse, is_trivial_group, pi1_presentation, GroupPresentation, Letter, Relation, Triviality,
    TrivialityReport, Word, DEFAULT_BUDGET,
};
pub use probe::{contractibility_probe, ProbeReport, PROBE_CAVEAT};

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("homology through degree {max_deg} needs chains in degree {}, but the top degree is {top}", max_deg + 1)]
    Range { max_deg: usize, top: usize },
    #[error("basepoint {basepoint} is not one of the {vertices} vertices")]
    Basepoint { basepoint: usize, vertices: usize },
    #[error("vertex {unreached} is not connected to basepoint {basepoint}")]
    Disconnected { basepoint: usize, unreached: usize },
}

/// Homology report keyed by degree.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub degrees: BTreeMap<usize, HomologyGroup>,
}

impl From<&[HomologyGroup]> for HomologyReport {
    fn from(groups: &[HomologyGroup]) -> Self {
        Self {
            degrees: groups.iter().cloned().enumerate().collect(),
        }
    }
}
