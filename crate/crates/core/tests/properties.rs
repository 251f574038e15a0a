mod common;

use common::{corpus, functoriality_violations, random_semis, structural_violations};

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 50);
}

#[test]
fn every_corpus_object_is_well_formed() {
    for (name, x) in corpus() {
        let v = structural_violations(&x);
        assert!(v.is_empty(), "{name}: {v:?}");
    }
}

#[test]
fn random_semisimplicial_sets_satisfy_face_identities() {
    for (seed, x) in random_semis(40, 4, 5).iter().enumerate() {
        assert!(x.identity_violations(5).is_empty(), "seed {seed}");
        assert!(functoriality_violations(&x.truncate(3)).is_empty(), "seed {seed}");
    }
}
