mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use varietylab::terms::{
    content, length, los, normalize_is, parse_term, parse_word, substitute, words_up_to, Length, Letter, Substitution,
    Symbol, TreeTerm, Word,
};
use varietylab::{Identity, Mode};

fn xyz() -> Vec<Letter> {
    "xyz".chars().map(|c| Letter::new(c).unwrap()).collect()
}

/// Last occurrences, computed by a right-to-left scan.
fn last_occurrences(w: &Word) -> Vec<Letter> {
    let mut seen = BTreeSet::new();
    let mut rev = Vec::new();
    for s in w.symbols().iter().rev() {
        if let Symbol::Letter(x) = s {
            if seen.insert(*x) {
                rev.push(*x);
            }
        }
    }
    rev.reverse();
    rev
}

#[test]
fn normalize_is_idempotent_up_to_length_six() {
    let words = words_up_to(&xyz(), true, 6);
    assert_eq!(words.len(), 4 + 16 + 64 + 256 + 1024 + 4096);
    for w in &words {
        let n = normalize_is(w);
        assert_eq!(normalize_is(&n), n, "{w}");
    }
}

#[test]
fn los_keeps_last_occurrences() {
    for w in words_up_to(&xyz(), true, 6) {
        let expected = last_occurrences(&w);
        match los(&w) {
            None => assert!(expected.is_empty(), "{w}"),
            Some(l) => {
                assert!(!l.has_omega());
                let letters: Vec<Letter> = l
                    .symbols()
                    .iter()
                    .map(|s| match s {
                        Symbol::Letter(x) => *x,
                        Symbol::Omega => unreachable!(),
                    })
                    .collect();
                assert_eq!(letters, expected, "{w}");
                assert_eq!(content(&l), content(&w));
            }
        }
    }
}

#[test]
fn length_is_infinite_exactly_with_omega() {
    for w in words_up_to(&xyz(), true, 4) {
        match length(&w) {
            Length::Infinite => assert!(w.has_omega()),
            Length::Finite(k) => {
                assert!(!w.has_omega());
                assert_eq!(k, w.len());
            }
        }
    }
}

#[test]
fn normal_forms_hold_in_every_small_model() {
    let algebras = common::small_is_algebras();
    for w in words_up_to(&xyz(), true, 5) {
        let id = Identity::is(w.clone(), normalize_is(&w));
        for a in algebras {
            assert!(a.satisfies(&id).holds(), "{id} fails in\n{}", a.to_file_format());
        }
    }
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec!['x', 'y', 'z', 'O']), 1..8)
        .prop_map(|cs| parse_word(&cs.into_iter().collect::<String>()).unwrap())
}

fn tree() -> impl Strategy<Value = TreeTerm> {
    let leaf = prop_oneof![
        Just(TreeTerm::Zero),
        prop::sample::select(vec!['x', 'y', 'z']).prop_map(|c| TreeTerm::Var(Letter::new(c).unwrap())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| TreeTerm::arrow(l, r))
    })
}

proptest! {
    #![proptest_config(common::config(512))]

    #[test]
    fn word_round_trip(w in word()) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn tree_round_trip(t in tree()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn substitution_distributes_over_concatenation(u in word(), v in word(), a in word(), b in word(), c in word()) {
        let s: Substitution<Word> = xyz().into_iter().zip([a, b, c]).collect();
        prop_assert_eq!(substitute(&u.concat(&v), &s), substitute(&u, &s).concat(&substitute(&v, &s)));
    }

    #[test]
    fn identity_round_trip(u in word(), v in word()) {
        let id = Identity::is(u, v);
        prop_assert_eq!(Identity::parse(&id.to_string(), Mode::IS).unwrap(), id);
    }
}
