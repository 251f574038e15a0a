//! Shared test corpus and the structural checks run over it.

#![allow(dead_code)]

use freedegen::adjunction::{delta_inj, plus, plus_map, unit};
use freedegen::homotopy::normalized_chains;
use freedegen::horn::{counterexample_input, counterexample_seed};
use freedegen::necklace::localization_pushout;
use freedegen::sset::{
    collapse, disjoint_union, nerve, product, random_semisimplicial, standard_simplex, standard_simplex_boundary,
    FiniteCategory, SemisimplicialSet, SimplicialSet, Subcomplex,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RANDOM_SEEDS: u64 = 30;

/// Named simplicial sets; semisimplicial members enter through free degeneracies.
pub fn corpus() -> Vec<(String, SimplicialSet)> {
    let d = 4;
    let mut out: Vec<(String, SimplicialSet)> = Vec::new();
    for k in 0..=3 {
        out.push((format!("simplex {k}"), standard_simplex(k, d).unwrap()));
    }
    for k in 1..=3 {
        out.push((format!("boundary of simplex {k}"), standard_simplex_boundary(k, d).unwrap()));
    }
    out.push(("nerve of terminal".into(), nerve(&FiniteCategory::terminal(), d).unwrap()));
    for k in 1..=3 {
        out.push((format!("nerve of order {k}"), nerve(&FiniteCategory::linear_order(k), d).unwrap()));
    }
    out.push(("nerve of walking isomorphism".into(), nerve(&FiniteCategory::walking_isomorphism(), d).unwrap()));
    out.push(("nerve of injections up to 2".into(), nerve(&FiniteCategory::delta_inj(2), 3).unwrap()));
    for k in 0..=3 {
        out.push((format!("plus of injective simplex {k}"), plus(&delta_inj(k, d).unwrap()).set));
    }
    out.push(("plus of counterexample seed".into(), plus(&counterexample_seed(d)).set));
    out.push(("counterexample input".into(), counterexample_input(d)));
    out.push(("plus of counterexample input".into(), plus(&counterexample_input(3).restrict()).set));
    for k in 0..=2 {
        out.push((format!("localization {k}"), localization_pushout(k, d).unwrap().set));
    }
    let edge = standard_simplex(1, d).unwrap();
    out.push(("square".into(), product(&edge, &edge).unwrap()));
    out.push((
        "edge and circle".into(),
        disjoint_union(&edge, &standard_simplex_boundary(2, d).unwrap()).unwrap(),
    ));
    let tri = standard_simplex(2, d).unwrap();
    // edges of the triangle in order 00, 01, 02, 11, 12, 22
    let front = Subcomplex::generated_by(&tri, &[(1, 1)]);
    out.push(("triangle with its front edge collapsed".into(), collapse(&tri, &[front]).unwrap().set));
    for seed in 0..RANDOM_SEEDS {
        let x = random_semisimplicial(&mut ChaCha8Rng::seed_from_u64(seed), d, 5);
        out.push((format!("plus of random seed {seed}"), plus(&x).set));
    }
    out
}

/// Seeded random semisimplicial sets, as used by the triangle-identity checks.
pub fn random_semis(count: u64, trunc_dim: usize, max_per_dim: usize) -> Vec<SemisimplicialSet> {
    (0..count)
        .map(|seed| random_semisimplicial(&mut ChaCha8Rng::seed_from_u64(seed), trunc_dim, max_per_dim))
        .collect()
}

/// Simplicial identities, Eilenberg–Zilber, `∂∂ = 0` and functoriality of the
/// free-degeneracy construction along `X -> R P X -> R P R P X`.
pub fn structural_violations(x: &SimplicialSet) -> Vec<String> {
    let mut out = Vec::new();
    out.extend(x.identity_violations(5).into_iter().map(|v| format!("identities: {v}")));
    out.extend(x.eilenberg_zilber_violations(5).into_iter().map(|v| format!("normal form: {v}")));
    out.extend(
        normalized_chains(x)
            .square_violations()
            .into_iter()
            .map(|n| format!("boundary squared nonzero in degree {n}")),
    );
    out.extend(functoriality_violations(&x.restrict().truncate(x.trunc_dim().min(3))));
    out
}

pub fn functoriality_violations(x: &SemisimplicialSet) -> Vec<String> {
    let mut out = Vec::new();
    let (px, eta) = unit(x);
    let rpx = px.set.restrict();
    let (ppx, eta2) = unit(&rpx);
    let pppx = plus(&ppx.set.restrict());
    let id = freedegen::sset::SimplexMap::identity(x.counts());
    if plus_map(&id, &px, &px) != freedegen::sset::SimplexMap::identity(px.set.counts()) {
        out.push("plus of the identity is not the identity".into());
    }
    let composite = eta2.after(&eta);
    let whole = plus_map(&composite, &px, &pppx);
    let stepwise = plus_map(&eta2, &ppx, &pppx).after(&plus_map(&eta, &px, &ppx));
    if whole != stepwise {
        out.push("plus does not preserve composition".into());
    }
    out.extend(whole.simplicial_violations(&px.set, &pppx.set).into_iter().take(5).map(|v| format!("plus map: {v}")));
    out
}
