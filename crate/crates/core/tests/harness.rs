mod common;

use std::fs;

use common::random_permutation;
use logfree::arrangement::catalog;
use logfree::classifier::{classify, ClassifyOptions};
use logfree::harness::cache::encode_record;
use logfree::harness::*;
use logfree::{F3, F5};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(n: usize, ks: Vec<usize>, p: i64) -> EnumerationSpec {
    EnumerationSpec {
        n,
        ks,
        values: (0..p).collect(),
        essential_only: false,
        cap: DEFAULT_CAP,
    }
}

#[test]
fn enumeration_counts_match_projective_point_counts() {
    // P^2(F_p) has p^2 + p + 1 points; every k-subset appears once
    let e = enumerate::<F3>(&spec(2, vec![2, 3], 3)).unwrap();
    assert_eq!(e.arrangements.len(), 78 + 286);
    let mut seen = std::collections::HashSet::new();
    for a in &e.arrangements {
        assert!(seen.insert(a.forms().to_vec()));
    }
}

#[test]
fn essential_filter() {
    let mut s = spec(2, vec![3], 3);
    s.essential_only = true;
    let e = enumerate::<F3>(&s).unwrap();
    assert!(e.arrangements.iter().all(|a| a.is_essential()));
    // 286 triples minus 13 * 4 concurrent ones
    assert_eq!(e.arrangements.len(), 286 - 52);
}

#[test]
fn grouping_is_a_partition_independent_of_order() {
    let e = enumerate::<F3>(&spec(2, vec![3, 4], 3)).unwrap();
    let opts = ClassifyOptions::default();
    let items = classify_all(&e.arrangements, &opts, None).unwrap();
    let classes = group_and_check(&items);
    assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), e.arrangements.len());

    let perm = random_permutation(&mut ChaCha8Rng::seed_from_u64(4), e.arrangements.len());
    let shuffled: Vec<_> = perm.iter().map(|&i| e.arrangements[i].clone()).collect();
    let again = group_and_check(&classify_all(&shuffled, &opts, None).unwrap());
    let key = |cs: &[ClassReport]| -> Vec<_> { cs.iter().map(|c| (c.hash.clone(), c.tally.clone(), c.free, c.stably_free)).collect() };
    assert_eq!(key(&classes), key(&again));
}

#[test]
fn generic_and_concurrent_triples_are_distinct_classes() {
    let e = enumerate::<F5>(&spec(2, vec![3], 5)).unwrap();
    let classes = group_and_check(&classify_all(&e.arrangements, &ClassifyOptions::default(), None).unwrap());
    let counts: Vec<Vec<usize>> = classes.iter().map(|c| c.lattice.rank_counts.clone()).collect();
    assert_eq!(classes.len(), 2);
    assert!(counts.contains(&vec![1, 3, 3]) && counts.contains(&vec![1, 3, 1]));
}

#[test]
fn undecided_member_makes_class_inconclusive() {
    let e = enumerate::<F3>(&spec(2, vec![4], 3)).unwrap();
    let opts = ClassifyOptions::default();
    let mut items = classify_all(&e.arrangements, &opts, None).unwrap();
    let generic = items.iter().position(|i| i.lattice.rank_counts == vec![1, 4, 6]).unwrap();
    let tight = ClassifyOptions {
        max_pairs: Some(0),
        ..Default::default()
    };
    let undecided = classify_all(&e.arrangements[generic..=generic], &tight, None).unwrap();
    assert_eq!(undecided[0].member.free, Verdict::Undecided);
    items[generic] = undecided[0].clone();
    let classes = group_and_check(&items);
    let c = classes.iter().find(|c| c.hash == items[generic].lattice.canonical_hash).unwrap();
    assert_eq!(c.free, Invariance::Inconclusive);
    assert_eq!(c.tally.undecided, 1);
}

#[test]
fn mixed_verdicts_are_a_violation_and_flag_cohomology() {
    let e = enumerate::<F3>(&spec(2, vec![4], 3)).unwrap();
    let items = classify_all(&e.arrangements, &ClassifyOptions::default(), None).unwrap();
    let mut classes = group_and_check(&items);
    // forge a disagreement inside a non-free class to exercise the reporting rule
    let c = classes.iter_mut().find(|c| c.tally.not_free > 1).unwrap();
    c.members[0].free = Verdict::Yes;
    c.members[0].intermediate = Some(vec![(1, vec![])]);
    c.free = invariance(&c.members.iter().map(|m| m.free).collect::<Vec<_>>());
    assert_eq!(c.free, Invariance::Violation);
    let coh = cohomology_by_class(&classes);
    assert_eq!(coh.iter().filter(|x| x.flagged).count(), 1);
}

#[test]
fn free_classes_have_identical_zero_intermediate_rows() {
    let (r, _) = search::<F3>(&spec(2, vec![3, 4], 3), Property::Free, &ClassifyOptions::default(), None).unwrap();
    for (c, coh) in r.classes.iter().zip(&r.cohomology) {
        assert!(coh.rows.iter().all(|row| row.identical), "class {}", c.hash);
        if c.tally.free == c.tally.members {
            for m in &c.members {
                assert!(m.intermediate.as_ref().unwrap().iter().all(|(_, row)| row.is_empty()));
            }
        }
    }
}

#[test]
fn cache_hits_are_byte_identical_to_fresh_results() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(2, vec![3, 4], 3);
    let opts = ClassifyOptions::default();
    let mut cache = Cache::open(dir.path()).unwrap();
    let (fresh, st1) = search::<F3>(&s, Property::Free, &opts, Some(&mut cache)).unwrap();
    assert_eq!(st1.cache_hits, 0);
    assert!(st1.cache_added > 0);

    let mut reopened = Cache::open(dir.path()).unwrap();
    assert_eq!(reopened.stats().records, st1.cache_added);
    let (cached, st2) = search::<F3>(&s, Property::Free, &opts, Some(&mut reopened)).unwrap();
    assert_eq!(st2.cache_hits, st1.cache_added);
    assert_eq!(st2.cache_added, 0);
    assert_eq!(serde_json::to_vec(&fresh).unwrap(), serde_json::to_vec(&cached).unwrap());

    // sampled dossiers
    let en = enumerate::<F3>(&s).unwrap();
    for a in en.arrangements.iter().step_by(37) {
        let d = classify(a, &opts).unwrap();
        let hit = reopened.get(&cache_key(a, &opts)).unwrap();
        assert_eq!(serde_json::to_vec(&d).unwrap(), serde_json::to_vec(hit).unwrap());
    }
}

#[test]
fn corrupt_records_are_quarantined() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ClassifyOptions::default();
    let mut recs = Vec::new();
    for name in ["boolean-2", "concurrent-3", "generic-4-2"] {
        let a = catalog(name).unwrap().instantiate::<F5>().unwrap();
        recs.push((cache_key(&a, &opts), classify(&a, &opts).unwrap()));
    }
    let mut bytes = Vec::new();
    let mut offsets = Vec::new();
    for (k, d) in &recs {
        offsets.push(bytes.len());
        bytes.extend(encode_record(k, d).unwrap());
    }
    // flip one payload byte of the middle record
    bytes[offsets[1] + 20] ^= 0x5a;
    let path = dir.path().join("dossiers.lfc");
    fs::write(&path, &bytes).unwrap();

    let cache = Cache::open(dir.path()).unwrap();
    assert_eq!(cache.stats().records, 2);
    assert_eq!(cache.stats().quarantined, 1);
    assert!(cache.get(&recs[0].0).is_some() && cache.get(&recs[2].0).is_some());
    assert!(cache.get(&recs[1].0).is_none());
    assert!(dir.path().join("dossiers.lfc.quarantine").exists());

    // the main file now holds only good records
    let clean = Cache::open(dir.path()).unwrap();
    assert_eq!((clean.stats().records, clean.stats().quarantined), (2, 0));

    // a truncated tail is quarantined too
    let mut tail = fs::read(&path).unwrap();
    tail.extend_from_slice(b"LFC1\x10\x00");
    fs::write(&path, &tail).unwrap();
    let c = Cache::open(dir.path()).unwrap();
    assert_eq!((c.stats().records, c.stats().quarantined), (2, 1));
}

#[test]
fn search_summary_carries_disclaimer_and_field() {
    let (r, _) = search::<F3>(&spec(1, vec![2], 3), Property::StablyFree, &ClassifyOptions::default(), None).unwrap();
    assert_eq!(r.summary.field, "F3");
    assert_eq!(r.summary.arrangements, 6);
    assert!(r.summary.disclaimer.contains("no characteristic-zero claim"));
}
