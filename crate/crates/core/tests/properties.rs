use std::collections::BTreeSet;

use proptest::prelude::*;

use revpat::engine::classify;
use revpat::matcher::{apply_morphism, find_instance};
use revpat::pattern::{canonical, equivalence_class, factors, iota, Iota, Pattern, Symbol};
use revpat::sequences::{sequence_prefix, GeneratorConfig, SequenceId};
use revpat::{AvoidabilityIndex, Word};

fn pattern(max_len: usize) -> impl Strategy<Value = Pattern> {
    prop::collection::vec(0..4usize, 0..=max_len)
        .prop_map(|ix| Pattern::new(ix.into_iter().map(|i| Symbol::ALL[i]).collect()))
}

fn nonempty_pattern(max_len: usize) -> impl Strategy<Value = Pattern> {
    prop::collection::vec(0..4usize, 1..=max_len)
        .prop_map(|ix| Pattern::new(ix.into_iter().map(|i| Symbol::ALL[i]).collect()))
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    (1..=3usize).prop_flat_map(move |k| {
        prop::collection::vec(0..k as u8, 0..=max_len).prop_map(move |l| Word::from_letters(l, k))
    })
}

fn iota_any() -> impl Strategy<Value = Iota> {
    prop::sample::select(Iota::ALL.to_vec())
}

/// Least `(start, |X|, |Y|)` over all instances, found by trying every factor
/// of `w` and its reversal as the images of `x` and `y`.
fn brute_force(w: &Word, p: &Pattern) -> Option<(usize, usize, usize)> {
    let mut candidates = BTreeSet::new();
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            let f = w.factor(i, j);
            candidates.insert(f.reversal());
            candidates.insert(f);
        }
    }
    let xs: Vec<Option<&Word>> = if p.uses_x() {
        candidates.iter().map(Some).collect()
    } else {
        vec![None]
    };
    let ys: Vec<Option<&Word>> = if p.uses_y() {
        candidates.iter().map(Some).collect()
    } else {
        vec![None]
    };
    let mut best = None;
    for x in &xs {
        for y in &ys {
            let image = apply_morphism(p, *x, *y).unwrap();
            if image.len() > w.len() {
                continue;
            }
            let first = w.occurrences(image.letters()).next();
            if let Some(start) = first {
                let key = (start, x.map_or(0, Word::len), y.map_or(0, Word::len));
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
    }
    best
}

fn contains(w: &Word, p: &Pattern) -> bool {
    find_instance(w, p).unwrap().is_some()
}

proptest! {
    #[test]
    fn iota_is_an_involution(p in pattern(10), j in iota_any()) {
        prop_assert_eq!(iota(j, &iota(j, &p)), p.clone());
        prop_assert_eq!(iota(j, &p).len(), p.len());
    }

    #[test]
    fn class_is_invariant(p in pattern(8), j in iota_any()) {
        let class = equivalence_class(&p);
        prop_assert!(class.contains(&p));
        prop_assert_eq!(&equivalence_class(&iota(j, &p)), &class);
        prop_assert!(class.iter().all(|q| class.contains(&iota(j, q))));
    }

    #[test]
    fn canonical_is_least_and_idempotent(p in pattern(8)) {
        let c = canonical(&p);
        let class = equivalence_class(&p);
        prop_assert!(class.contains(&c));
        prop_assert!(class.iter().all(|q| c <= *q));
        prop_assert_eq!(canonical(&c), c);
    }

    #[test]
    fn matcher_agrees_with_brute_force(w in word(12), p in nonempty_pattern(4)) {
        let found = find_instance(&w, &p).unwrap();
        let key = found.as_ref().map(|i| {
            (i.start, i.x.as_ref().map_or(0, Word::len), i.y.as_ref().map_or(0, Word::len))
        });
        prop_assert_eq!(key, brute_force(&w, &p));
    }

    #[test]
    fn witnesses_are_sound(w in word(16), p in nonempty_pattern(5)) {
        if let Some(i) = find_instance(&w, &p).unwrap() {
            let image = apply_morphism(&p, i.x.as_ref(), i.y.as_ref()).unwrap();
            prop_assert_eq!(w.factor(i.start, i.start + image.len()), image);
        }
    }

    #[test]
    fn reversal_duality(w in word(14), p in nonempty_pattern(5)) {
        let c = contains(&w, &p);
        prop_assert_eq!(contains(&w, &iota(Iota::SwapReversal, &p)), c);
        prop_assert_eq!(contains(&w, &iota(Iota::SwapVariables, &p)), c);
        prop_assert_eq!(contains(&w.reversal(), &iota(Iota::Reverse, &p)), c);
    }

    #[test]
    fn renaming_letters_preserves_containment(
        w in word(14),
        p in nonempty_pattern(5),
        perm in Just([0u8, 1, 2]).prop_shuffle(),
    ) {
        let renamed = Word::from_letters(w.letters().iter().map(|&l| perm[l as usize]).collect(), 3);
        prop_assert_eq!(contains(&renamed, &p), contains(&w, &p));
    }

    #[test]
    fn classify_is_constant_on_classes(p in pattern(9)) {
        let index = classify(&p);
        prop_assert!(equivalence_class(&p).iter().all(|q| classify(q) == index));
    }

    #[test]
    fn index_two_factors_force_index_two(p in pattern(9)) {
        if factors(&p).iter().any(|u| classify(u) == AvoidabilityIndex::Index2) {
            prop_assert_eq!(classify(&p), AvoidabilityIndex::Index2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sequence_prefixes_are_stable(
        id in prop::sample::select(SequenceId::ALL.to_vec()),
        m in 0..200usize,
        extra in 0..200usize,
    ) {
        let cfg = GeneratorConfig::default();
        let short = sequence_prefix(id, m, &cfg).unwrap();
        let long = sequence_prefix(id, m + extra, &cfg).unwrap();
        prop_assert_eq!(short.len(), m);
        prop_assert!(short.is_prefix_of(&long));
    }
}
