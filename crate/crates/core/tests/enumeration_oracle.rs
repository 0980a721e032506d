//! `enumerate_all` against a brute-force walk over every partition of the
//! concept lattice, keeping those preserved by all permutations.

use std::collections::BTreeSet;

use abstraction_lab::relation::{enumerate_all, enumerate_all_uncapped, swap_orbits, InvariantRelation};
use abstraction_lab::universe::{Permutation, Universe};

/// Every set partition of `0..len` as a restricted growth string.
fn partitions(len: usize) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, max: u32, len: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for l in 0..=max + 1 {
            prefix.push(l);
            go(prefix, max.max(l), len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    go(&mut prefix, 0, len, &mut out);
    out
}

fn invariant(u: Universe, labels: &[u32], perms: &[Permutation]) -> bool {
    perms.iter().all(|p| {
        let image: Vec<usize> = u.concepts().map(|x| p.apply(x).unwrap().bits() as usize).collect();
        (0..labels.len()).all(|x| (0..x).all(|y| (labels[x] == labels[y]) == (labels[image[x]] == labels[image[y]])))
    })
}

#[test]
fn bell_numbers() {
    assert_eq!(partitions(4).len(), 15);
    assert_eq!(partitions(8).len(), 4140);
}

#[test]
fn enumeration_matches_partition_oracle() {
    for n in 1..=3 {
        let u = Universe::new(n).unwrap();
        let perms = Permutation::all(u);
        let oracle: BTreeSet<Vec<u32>> =
            partitions(u.concept_count()).into_iter().filter(|l| invariant(u, l, &perms)).collect();
        let enumerated: Vec<InvariantRelation> = enumerate_all(n).unwrap();
        let ours: BTreeSet<Vec<u32>> = enumerated.iter().map(|e| e.labels().labels).collect();
        assert_eq!(ours.len(), enumerated.len(), "duplicates at n={n}");
        assert_eq!(ours, oracle, "n={n}");
        for labels in &oracle {
            assert!(InvariantRelation::from_partition(u, labels).is_ok());
        }
    }
}

#[test]
fn counts_and_caps() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_all(n).unwrap().len()).collect();
    assert_eq!(counts[0], 2);
    // 2^17 candidates at n = 4
    assert_eq!(swap_orbits(Universe::new(4).unwrap()).len(), 17);
    assert!(enumerate_all(5).is_err());
    assert!(enumerate_all_uncapped(2).unwrap().len() == counts[1]);
    let all4 = enumerate_all(4).unwrap();
    let distinct: BTreeSet<String> = all4.iter().map(|e| e.to_canonical_text()).collect();
    assert_eq!(distinct.len(), all4.len());
}
