mod common;

use proptest::prelude::*;
use slotgame::automaton::letter::{parse_word, token_count};
use slotgame::automaton::{compose, worst_case_cost, CostedAutomaton, Letter, TagPart, WorstCase};
use slotgame::frontend::{parse_and_typecheck, Type};
use slotgame::gamesem::{copycat, denote, denote_term, environment, CostModel};

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        Just("$"),
        Just("#"),
        Just("run"),
        Just("done"),
        Just("q@x"),
        Just("0@x"),
        Just("read@y"),
    ]
    .prop_map(|t| parse_word(t).unwrap().remove(0))
}

/// A finite language given by up to four words of length at most five.
fn finite_language() -> impl Strategy<Value = CostedAutomaton> {
    prop::collection::vec(prop::collection::vec(letter(), 0..5), 0..4)
        .prop_map(|words| CostedAutomaton::union_all(&words.into_iter().map(CostedAutomaton::word).collect::<Vec<_>>()))
}

/// A language with loops: a finite language followed by a starred one.
fn looping_language() -> impl Strategy<Value = CostedAutomaton> {
    (finite_language(), finite_language()).prop_map(|(a, b)| a.concat(&b.star()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn shuffle_is_commutative(a in looping_language(), b in finite_language()) {
        prop_assert!(a.shuffle(&b).language_equal(&b.shuffle(&a)));
    }

    #[test]
    fn shuffle_is_associative(a in finite_language(), b in finite_language(), c in looping_language()) {
        prop_assert!(a.shuffle(&b).shuffle(&c).language_equal(&a.shuffle(&b.shuffle(&c))));
    }

    /// Hiding moves keeps every word's tokens and delimiters in order.
    #[test]
    fn hiding_preserves_tokens(a in finite_language()) {
        let hidden = a.hide(|l| l.belongs_to("x"));
        let want: std::collections::BTreeSet<Vec<Letter>> = a
            .enumerate_words(20)
            .into_iter()
            .map(|w| w.into_iter().filter(|l| !l.belongs_to("x")).collect())
            .collect();
        prop_assert_eq!(hidden.enumerate_words(20), want);
    }

    #[test]
    fn minimization_and_trim_preserve_language(a in looping_language()) {
        prop_assert!(a.minimize().language_equal(&a));
        prop_assert!(a.trim().language_equal(&a));
        prop_assert!(a.minimize().state_count() <= a.determinize().trim().state_count().max(1));
    }

    #[test]
    fn worst_case_is_the_heaviest_word(a in finite_language()) {
        let heaviest = a.enumerate_words(a.state_count()).iter().map(|w| token_count(w) as u64).max();
        prop_assert_eq!(worst_case_cost(&a), WorstCase::Bounded(heaviest.unwrap_or(0)));
    }

    #[test]
    fn token_loops_are_unbounded(a in finite_language()) {
        let looped = CostedAutomaton::word(parse_word("run").unwrap())
            .concat(&CostedAutomaton::tokens(1).star())
            .concat(&a);
        if !a.is_empty() {
            prop_assert_eq!(worst_case_cost(&looped), WorstCase::Unbounded);
        }
    }
}

#[test]
fn worst_case_matches_enumeration_on_loop_free_corpus() {
    let cm = CostModel::default();
    let mut checked = 0;
    for t in common::corpus::corpus(4).iter().filter(|t| !format!("{:?}", t.term).contains("While")) {
        let m = denote(t, &cm).unwrap();
        let heaviest = m.enumerate_words(m.state_count()).iter().map(|w| token_count(w) as u64).max();
        assert_eq!(worst_case_cost(&m), WorstCase::Bounded(heaviest.unwrap()));
        checked += 1;
    }
    assert!(checked > 100);
}

/// Composing a denotation with the copy-cat of its own type gives it back.
#[test]
fn copycat_is_a_unit_for_composition() {
    let cm = CostModel::default();
    let mut sources: Vec<(slotgame::frontend::TypedTerm, Type)> =
        common::corpus::corpus(3).into_iter().map(|t| (t, Type::Com)).collect();
    for src in [
        "high h : varint2 |- !h + 1 : expint2",
        "high h : varint2; given x : expint2 |- !h > x : expbool",
        "given f : expint2 -> com; given e : expint2 |- f(e) : com",
        "high h : varint2 |- h : varint2",
    ] {
        let t = parse_and_typecheck(src).unwrap();
        let ty = t.result.clone();
        sources.push((t, ty));
    }
    for (t, ty) in sources {
        let r = denote_term(&t.term, environment(&t), &cm).unwrap().detag();
        let id = copycat(&ty, &[TagPart::id("__unit")]);
        let back = compose(&r, &id, &[TagPart::id("__unit")]).unwrap();
        assert!(back.language_equal(&r), "{}", slotgame::frontend::print_term(&t.term));
    }
}

/// De-tagging merges occurrence tags but leaves the token content of every
/// word alone.
#[test]
fn detagging_preserves_token_counts() {
    let cm = CostModel::default();
    for src in [
        "given c : com |- c; c : com",
        "given x : expint2 |- new y : varint2 := x in y := x + !y : com",
        "given f : expint2 -> com; given x : expint2 |- f(x); f(x + 1) : com",
        "high h : varint2; given c : com |- if !h > 0 then { c; c } else c : com",
    ] {
        let t = slotgame::frontend::normalize(&parse_and_typecheck(src).unwrap());
        let tagged = slotgame::gamesem::denote_tagged(&t, &cm).unwrap();
        let words = tagged.enumerate_words(24);
        let detagged = tagged.detag();
        assert!(!words.is_empty(), "{src}");
        for w in &words {
            let merged = CostedAutomaton::word(w.clone()).detag().shortest_word().unwrap();
            assert_eq!(token_count(&merged), token_count(w), "{src}");
            assert_eq!(merged.iter().filter(|l| !l.is_move()).count(), w.iter().filter(|l| !l.is_move()).count());
            assert!(detagged.accepts(&merged), "{src}");
        }
    }
}
