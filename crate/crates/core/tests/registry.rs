use std::collections::BTreeSet;

use sha2::{Digest, Sha256};

use quadsemi::diophantine::{
    modular_obstruction, registry, solve_system_bounded, swap, symmetry_holds, verify_lemma, Obstruction, Quad,
    SolutionFamily, Technique, DEFAULT_BOUND, EXTENDED_BOUND, REGISTRY_TOML,
};

const REGISTRY_SHA256: &str = "6b16d8fe54c7206164c5494574266b2b6785df639580f0829e7bb73bddc9a110";

#[test]
fn registry_checksum_is_pinned() {
    let digest = hex::encode(Sha256::digest(REGISTRY_TOML.as_bytes()));
    assert_eq!(digest, REGISTRY_SHA256, "registry.toml changed; review and update the pin");
}

#[test]
fn every_entry_matches_at_default_bound() {
    for e in registry().unwrap() {
        let v = verify_lemma(&e, DEFAULT_BOUND).unwrap();
        assert!(v.is_match(), "{}: {v:?}", e.id);
    }
}

#[test]
fn every_entry_matches_at_extended_bound() {
    for e in registry().unwrap() {
        let v = verify_lemma(&e, EXTENDED_BOUND).unwrap();
        assert!(v.is_match(), "{}: {v:?}", e.id);
    }
}

#[test]
fn mod_tagged_entries_are_obstructed_and_empty() {
    let entries = registry().unwrap();
    let mut tagged = 0;
    for e in &entries {
        for (tag, m) in [(Technique::Mod4, 4), (Technique::Mod8, 8)] {
            if e.has(&tag) {
                tagged += 1;
                assert!(matches!(modular_obstruction(e, m).unwrap(), Obstruction::Confirmed { .. }), "{}", e.id);
                assert!(e.claimed.is_empty(), "{}", e.id);
                assert!(solve_system_bounded(&e.system, DEFAULT_BOUND).unwrap().is_empty(), "{}", e.id);
            }
        }
    }
    assert_eq!(tagged, 9);
}

#[test]
fn symmetric_entries_mirror_their_targets() {
    let entries = registry().unwrap();
    let mut checked = 0;
    for e in &entries {
        for bound in [3, 17, DEFAULT_BOUND] {
            if let Some(ok) = symmetry_holds(&entries, e, bound).unwrap() {
                assert!(ok, "{} at bound {bound}", e.id);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 9 * 3);
}

#[test]
fn swap_is_an_involution() {
    let q: Quad = [3, 5, -2, 7];
    assert_eq!(swap(&swap(&q)), q);
}

#[test]
fn parametric_families_solve_their_systems() {
    for e in registry().unwrap() {
        for fam in &e.claimed {
            if let SolutionFamily::Parametric(_) = fam {
                for q in fam.instances(50) {
                    assert!(e.system.satisfies(&q), "{}: {fam} at {q:?}", e.id);
                }
            }
        }
    }
}

#[test]
fn claimed_points_are_canonical_solutions() {
    for e in registry().unwrap() {
        let claimed: BTreeSet<Quad> = e.claimed_in_box(20);
        assert!(claimed.iter().all(|q| q[0] >= 0 && q[1] >= 0));
        assert!(claimed.iter().all(|q| e.system.satisfies(q)), "{}", e.id);
    }
}
