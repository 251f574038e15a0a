use serde::Serialize;

use super::chains::{homology, normalized_chains, HomologyGroup};
use super::group::{is_trivial_group, pi1_presentation, Triviality};
use super::HomotopyError;
use crate::sset::SimplicialSet;

/// Passing every check is necessary for contractibility, never sufficient.
pub const PROBE_CAVEAT: &str = "a pass is necessary but not sufficient evidence of contractibility: \
only finitely many degrees and a budgeted coset enumeration were examined";

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub max_deg: usize,
    pub trunc_dim: usize,
    pub components: usize,
    pub connected: bool,
    pub homology: Vec<HomologyGroup>,
    /// `H_0 = Z` and `H_k = 0` for `1 ≤ k ≤ max_deg`.
    pub reduced_homology_zero: bool,
    /// Absent when the set is disconnected or has no vertices.
    pub pi1: Option<Triviality>,
    pub pi1_steps: Vec<String>,
    pub budget: usize,
    pub passed: bool,
    pub verdict: String,
    pub caveat: &'static str,
}

/// Connectivity, homology through `max_deg` and a budgeted π₁ check.
pub fn contractibility_probe(x: &SimplicialSet, max_deg: usize, budget: usize) -> Result<ProbeReport, HomotopyError> {
    let chains = normalized_chains(x);
    let homology = homology(&chains, max_deg)?;
    let components = homology[0].betti;
    let connected = components == 1;
    let reduced_homology_zero = homology[0].is_integers() && homology[1..].iter().all(HomologyGroup::is_zero);
    let (pi1, pi1_steps) = if connected {
        let report = is_trivial_group(&pi1_presentation(x, 0)?, budget);
        (Some(report.verdict), report.steps)
    } else {
        (None, Vec::new())
    };
    let passed = connected && reduced_homology_zero && pi1 == Some(Triviality::Trivial);
    let verdict = if passed {
        format!("contractible up to degree {max_deg}")
    } else {
        let mut reasons = Vec::new();
        if !connected {
            reasons.push(format!("{components} components"));
        }
        for (k, h) in homology.iter().enumerate().skip(1) {
            if !h.is_zero() {
                reasons.push(format!("H{k} = {h}"));
            }
        }
        match pi1 {
            Some(Triviality::Nontrivial) => reasons.push("fundamental group nontrivial".into()),
            Some(Triviality::Unknown) => reasons.push(format!("fundamental group undecided within {budget} cosets")),
            _ => {}
        }
        format!("not contractible up to degree {max_deg}: {}", reasons.join("; "))
    };
    Ok(ProbeReport {
        max_deg,
        trunc_dim: x.trunc_dim(),
        components,
        connected,
        homology,
        reduced_homology_zero,
        pi1,
        pi1_steps,
        budget,
        passed,
        verdict,
        caveat: PROBE_CAVEAT,
    })
}
