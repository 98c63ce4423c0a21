//! Costed finite automata over move/token/delimiter letters.
//!
//! A [`CostedAutomaton`] is a nondeterministic automaton, possibly with
//! ε-transitions, whose language is a set of plays-with-costs. Tokens and
//! delimiters are global letters: no construction here synchronizes, hides
//! or re-tags them.

mod balance;
mod cost;
pub mod letter;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub use balance::{balance_verdict, segment_tokens, BalanceReport, PhaseSpec, Witness};
pub use cost::{worst_case_cost, WorstCase};
pub use letter::{Letter, Move, MoveKind, Name, Tag, TagPart, Value};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("cannot hide cost letter {0}")]
    HiddenCost(Letter),
    #[error("shared alphabet {0} is not contained in both alphabets")]
    AlphabetMismatch(String),
    #[error("language contains the empty word")]
    EmptyWord,
    #[error("some word does not start with a move")]
    NotMoveInitial,
    #[error("accepted word {word} has {found} delimiters, expected {expected}")]
    DelimCount { word: String, found: usize, expected: usize },
    #[error("phase spec needs {expected} weights, got {found}")]
    PhaseSpecShape { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    /// `None` is ε.
    pub label: Option<Letter>,
    pub target: StateId,
}

#[derive(Clone, Debug)]
pub struct CostedAutomaton {
    initial: StateId,
    accepting: Vec<bool>,
    edges: Vec<Vec<Edge>>,
    alphabet: BTreeSet<Letter>,
}

impl CostedAutomaton {
    /// Automaton with a single, non-accepting state: the empty language.
    pub fn empty_language() -> Self {
        CostedAutomaton { initial: 0, accepting: vec![false], edges: vec![Vec::new()], alphabet: BTreeSet::new() }
    }

    /// Accepts exactly the empty word.
    pub fn epsilon() -> Self {
        CostedAutomaton { initial: 0, accepting: vec![true], edges: vec![Vec::new()], alphabet: BTreeSet::new() }
    }

    pub fn word<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut a = CostedAutomaton::empty_language();
        let mut cur = a.initial;
        for l in letters {
            let next = a.add_state();
            a.add_edge(cur, Some(l), next);
            cur = next;
        }
        a.set_accepting(cur, true);
        a
    }

    /// Union of single-letter words.
    pub fn any_of<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut a = CostedAutomaton::empty_language();
        let fin = a.add_state();
        a.set_accepting(fin, true);
        for l in letters {
            a.add_edge(0, Some(l), fin);
        }
        a
    }

    pub fn tokens(k: u64) -> Self {
        CostedAutomaton::word((0..k).map(|_| Letter::Token))
    }

    pub fn add_state(&mut self) -> StateId {
        self.accepting.push(false);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_edge(&mut self, from: StateId, label: Option<Letter>, to: StateId) {
        if let Some(l) = &label {
            if !self.alphabet.contains(l) {
                self.alphabet.insert(l.clone());
            }
        }
        self.edges[from].push(Edge { label, target: to });
    }

    pub fn set_accepting(&mut self, s: StateId, yes: bool) {
        self.accepting[s] = yes;
    }

    pub fn set_initial(&mut self, s: StateId) {
        self.initial = s;
    }

    /// Declares letters as part of the alphabet without adding transitions.
    pub fn extend_alphabet<I: IntoIterator<Item = Letter>>(&mut self, letters: I) {
        self.alphabet.extend(letters);
    }

    pub fn with_alphabet<I: IntoIterator<Item = Letter>>(mut self, letters: I) -> Self {
        self.extend_alphabet(letters);
        self
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn edges_from(&self, s: StateId) -> &[Edge] {
        &self.edges[s]
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges.iter().flatten().any(|e| e.label.is_none())
    }

    /// Copies `other` into `self`, returning the offset of its states.
    fn embed(&mut self, other: &CostedAutomaton) -> usize {
        let off = self.state_count();
        for s in 0..other.state_count() {
            self.add_state();
            self.accepting[off + s] = other.accepting[s];
        }
        for (s, es) in other.edges.iter().enumerate() {
            for e in es {
                self.edges[off + s].push(Edge { label: e.label.clone(), target: off + e.target });
            }
        }
        self.alphabet.extend(other.alphabet.iter().cloned());
        off
    }

    pub fn union(&self, other: &CostedAutomaton) -> CostedAutomaton {
        let mut a = CostedAutomaton::empty_language();
        let x = a.embed(self);
        let y = a.embed(other);
        a.add_edge(0, None, x + self.initial);
        a.add_edge(0, None, y + other.initial);
        a
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a CostedAutomaton>>(parts: I) -> CostedAutomaton {
        let mut a = CostedAutomaton::empty_language();
        for p in parts {
            let off = a.embed(p);
            a.add_edge(0, None, off + p.initial);
        }
        a
    }

    pub fn concat(&self, other: &CostedAutomaton) -> CostedAutomaton {
        let mut a = self.clone();
        let off = a.embed(other);
        for s in 0..self.state_count() {
            if self.accepting[s] {
                a.accepting[s] = false;
                a.add_edge(s, None, off + other.initial);
            }
        }
        a
    }

    pub fn concat_all<'a, I: IntoIterator<Item = &'a CostedAutomaton>>(parts: I) -> CostedAutomaton {
        parts.into_iter().fold(CostedAutomaton::epsilon(), |acc, p| acc.concat(p))
    }

    pub fn star(&self) -> CostedAutomaton {
        let mut a = CostedAutomaton::epsilon();
        let off = a.embed(self);
        a.add_edge(0, None, off + self.initial);
        for s in 0..self.state_count() {
            if self.accepting[s] {
                a.add_edge(off + s, None, 0);
            }
        }
        a
    }

    /// `ε + R`.
    pub fn optional(&self) -> CostedAutomaton {
        self.union(&CostedAutomaton::epsilon())
    }

    /// Relabels every move letter; `$` and `#` are passed through untouched.
    pub fn map_moves(&self, f: impl Fn(&Move) -> Move) -> CostedAutomaton {
        let relabel = |l: &Letter| match l {
            Letter::Move(m) => Letter::Move(f(m)),
            other => other.clone(),
        };
        CostedAutomaton {
            initial: self.initial,
            accepting: self.accepting.clone(),
            edges: self
                .edges
                .iter()
                .map(|es| es.iter().map(|e| Edge { label: e.label.as_ref().map(relabel), target: e.target }).collect())
                .collect(),
            alphabet: self.alphabet.iter().map(relabel).collect(),
        }
    }

    /// Prefixes every move tag with `prefix`.
    pub fn tag_all(&self, prefix: &[TagPart]) -> CostedAutomaton {
        self.map_moves(|m| Move { kind: m.kind, tag: m.tag.prefixed(prefix) })
    }

    /// Resets all occurrence numbers, merging contracted occurrences.
    pub fn detag(&self) -> CostedAutomaton {
        self.map_moves(|m| Move { kind: m.kind, tag: m.tag.detagged() })
    }

    /// Turns every letter satisfying `hidden` into ε. Cost letters are
    /// never hidden, whatever the predicate says.
    pub fn hide(&self, hidden: impl Fn(&Letter) -> bool) -> CostedAutomaton {
        let hidden = |l: &Letter| l.is_move() && hidden(l);
        CostedAutomaton {
            initial: self.initial,
            accepting: self.accepting.clone(),
            edges: self
                .edges
                .iter()
                .map(|es| {
                    es.iter()
                        .map(|e| Edge {
                            label: e.label.clone().filter(|l| !hidden(l)),
                            target: e.target,
                        })
                        .collect()
                })
                .collect(),
            alphabet: self.alphabet.iter().filter(|l| !hidden(l)).cloned().collect(),
        }
    }

    /// Removes from every word all letters of `hidden`.
    pub fn restrict(&self, hidden: &BTreeSet<Letter>) -> Result<CostedAutomaton, AutomatonError> {
        if let Some(l) = hidden.iter().find(|l| !l.is_move()) {
            return Err(AutomatonError::HiddenCost(l.clone()));
        }
        Ok(self.hide(|l| hidden.contains(l)).remove_epsilon())
    }

    /// Interleaves the two languages freely.
    pub fn shuffle(&self, other: &CostedAutomaton) -> CostedAutomaton {
        sync_product(self, other, |_| false)
    }

    /// `{ m · $^k · w | m·w ∈ R }`.
    pub fn insert_after_initial(&self, k: u64) -> Result<CostedAutomaton, AutomatonError> {
        let base = self.remove_epsilon();
        if base.accepting[base.initial] {
            return Err(AutomatonError::EmptyWord);
        }
        if k == 0 {
            return Ok(base);
        }
        let mut a = base.clone();
        let start = a.add_state();
        for e in &base.edges[base.initial] {
            let label = e.label.clone().expect("ε-free");
            if !label.is_move() {
                return Err(AutomatonError::NotMoveInitial);
            }
            let mut cur = a.add_state();
            a.add_edge(start, Some(label), cur);
            for _ in 1..k {
                let next = a.add_state();
                a.add_edge(cur, Some(Letter::Token), next);
                cur = next;
            }
            a.add_edge(cur, Some(Letter::Token), e.target);
        }
        a.initial = start;
        Ok(a.trim())
    }

    fn epsilon_closure(&self, s: StateId, seen: &mut [bool], out: &mut Vec<StateId>) {
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            out.push(u);
            for e in &self.edges[u] {
                if e.label.is_none() && !seen[e.target] {
                    seen[e.target] = true;
                    stack.push(e.target);
                }
            }
        }
    }

    /// Equivalent automaton without ε-transitions, trimmed.
    pub fn remove_epsilon(&self) -> CostedAutomaton {
        if !self.has_epsilon() {
            return self.trim();
        }
        let n = self.state_count();
        let mut edges = vec![Vec::new(); n];
        let mut accepting = vec![false; n];
        let mut seen = vec![false; n];
        let mut closure = Vec::new();
        for s in 0..n {
            closure.clear();
            self.epsilon_closure(s, &mut seen, &mut closure);
            let mut out: BTreeSet<Edge> = BTreeSet::new();
            for &t in &closure {
                seen[t] = false;
                accepting[s] |= self.accepting[t];
                for e in &self.edges[t] {
                    if e.label.is_some() {
                        out.insert(e.clone());
                    }
                }
            }
            edges[s] = out.into_iter().collect();
        }
        CostedAutomaton { initial: self.initial, accepting, edges, alphabet: self.alphabet.clone() }.trim()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(u) = stack.pop() {
            for e in &self.edges[u] {
                if !seen[e.target] {
                    seen[e.target] = true;
                    stack.push(e.target);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut rev = vec![Vec::new(); n];
        for (s, es) in self.edges.iter().enumerate() {
            for e in es {
                rev[e.target].push(s);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<StateId> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(u) = stack.pop() {
            for &p in &rev[u] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states that are reachable and co-reachable. The initial
    /// state always survives; states are renumbered breadth-first.
    pub fn trim(&self) -> CostedAutomaton {
        let fwd = self.reachable();
        let bwd = self.coreachable();
        let live = |s: StateId| fwd[s] && bwd[s];
        let mut index = vec![usize::MAX; self.state_count()];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            let mut es: Vec<&Edge> = self.edges[u].iter().filter(|e| live(e.target)).collect();
            es.sort();
            for e in es {
                if index[e.target] == usize::MAX {
                    index[e.target] = order.len();
                    order.push(e.target);
                }
            }
        }
        let mut edges = Vec::with_capacity(order.len());
        let mut accepting = Vec::with_capacity(order.len());
        for &u in &order {
            accepting.push(self.accepting[u]);
            let mut es: Vec<Edge> = if live(u) {
                self.edges[u]
                    .iter()
                    .filter(|e| live(e.target))
                    .map(|e| Edge { label: e.label.clone(), target: index[e.target] })
                    .collect()
            } else {
                Vec::new()
            };
            es.sort();
            es.dedup();
            edges.push(es);
        }
        CostedAutomaton { initial: 0, accepting, edges, alphabet: self.alphabet.clone() }
    }

    /// Subset construction; the result is deterministic and ε-free.
    pub fn determinize(&self) -> CostedAutomaton {
        let base = self.remove_epsilon();
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut sets: Vec<Vec<StateId>> = Vec::new();
        let mut out = CostedAutomaton::empty_language();
        out.alphabet = base.alphabet.clone();
        let start = vec![base.initial];
        ids.insert(start.clone(), 0);
        sets.push(start);
        out.accepting[0] = base.accepting[base.initial];
        let mut i = 0;
        while i < sets.len() {
            let mut succ: BTreeMap<&Letter, BTreeSet<StateId>> = BTreeMap::new();
            for &s in &sets[i] {
                for e in &base.edges[s] {
                    succ.entry(e.label.as_ref().expect("ε-free")).or_default().insert(e.target);
                }
            }
            for (letter, targets) in succ {
                let key: Vec<StateId> = targets.into_iter().collect();
                let id = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state();
                        out.accepting[id] = key.iter().any(|&t| base.accepting[t]);
                        ids.insert(key.clone(), id);
                        sets.push(key);
                        id
                    }
                };
                out.edges[i].push(Edge { label: Some(letter.clone()), target: id });
            }
            i += 1;
        }
        out
    }

    /// Minimal deterministic automaton for the same language, trimmed and
    /// canonically numbered.
    pub fn minimize(&self) -> CostedAutomaton {
        let dfa = self.determinize().trim();
        let n = dfa.state_count();
        let letters: Vec<&Letter> = dfa.alphabet.iter().collect();
        let letter_index: HashMap<&Letter, u32> = letters.iter().enumerate().map(|(i, l)| (*l, i as u32)).collect();
        let trans: Vec<Vec<(u32, StateId)>> = dfa
            .edges
            .iter()
            .map(|es| {
                let mut v: Vec<(u32, StateId)> = es
                    .iter()
                    .map(|e| (letter_index[e.label.as_ref().expect("ε-free")], e.target))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut class: Vec<usize> = dfa.accepting.iter().map(|&a| usize::from(a)).collect();
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_ids: HashMap<(usize, Vec<(u32, usize)>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for s in 0..n {
                let sig = (class[s], trans[s].iter().map(|&(l, t)| (l, class[t])).collect::<Vec<_>>());
                let len = sig_ids.len();
                next[s] = *sig_ids.entry(sig).or_insert(len);
            }
            let new_count = sig_ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut out = CostedAutomaton {
            initial: class[dfa.initial],
            accepting: vec![false; count],
            edges: vec![Vec::new(); count],
            alphabet: dfa.alphabet.clone(),
        };
        let mut done = vec![false; count];
        for s in 0..n {
            let c = class[s];
            if done[c] {
                continue;
            }
            done[c] = true;
            out.accepting[c] = dfa.accepting[s];
            for e in &dfa.edges[s] {
                out.edges[c].push(Edge { label: e.label.clone(), target: class[e.target] });
            }
        }
        out.trim()
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let base = self.remove_epsilon();
        let mut cur: BTreeSet<StateId> = BTreeSet::from([base.initial]);
        for l in word {
            cur = cur
                .iter()
                .flat_map(|&s| base.edges[s].iter().filter(|e| e.label.as_ref() == Some(l)).map(|e| e.target))
                .collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&s| base.accepting[s])
    }

    pub fn is_empty(&self) -> bool {
        !self.coreachable()[self.initial]
    }

    /// All accepted words of length at most `max_len`.
    pub fn enumerate_words(&self, max_len: usize) -> BTreeSet<Vec<Letter>> {
        let dfa = self.determinize().trim();
        let mut out = BTreeSet::new();
        let mut word = Vec::new();
        enumerate_from(&dfa, dfa.initial, max_len, &mut word, &mut out);
        out
    }

    /// Some word accepted by exactly one of the two automata.
    pub fn distinguishing_word(&self, other: &CostedAutomaton) -> Option<Vec<Letter>> {
        compare_languages(self, other, |a, b| a != b)
    }

    pub fn language_equal(&self, other: &CostedAutomaton) -> bool {
        self.distinguishing_word(other).is_none()
    }

    /// Some word of `self` that `other` rejects.
    pub fn inclusion_counterexample(&self, other: &CostedAutomaton) -> Option<Vec<Letter>> {
        compare_languages(self, other, |a, b| a && !b)
    }

    pub fn is_subset_of(&self, other: &CostedAutomaton) -> bool {
        self.inclusion_counterexample(other).is_none()
    }

    /// Plain language intersection (every letter, including `$`, must
    /// match). Used for language-level checks, not by the semantics.
    pub fn intersect(&self, other: &CostedAutomaton) -> CostedAutomaton {
        product(self, other, |_| true)
    }

    /// Shortest accepted word, ties broken lexicographically.
    pub fn shortest_word(&self) -> Option<Vec<Letter>> {
        let base = self.remove_epsilon();
        let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; base.state_count()];
        let mut seen = vec![false; base.state_count()];
        let mut queue = VecDeque::from([base.initial]);
        seen[base.initial] = true;
        while let Some(u) = queue.pop_front() {
            if base.accepting[u] {
                let mut word = Vec::new();
                let mut cur = u;
                while let Some((p, l)) = parent[cur].clone() {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            let mut es: Vec<&Edge> = base.edges[u].iter().collect();
            es.sort();
            for e in es {
                if !seen[e.target] {
                    seen[e.target] = true;
                    parent[e.target] = Some((u, e.label.clone().expect("ε-free")));
                    queue.push_back(e.target);
                }
            }
        }
        None
    }
}

fn enumerate_from(
    dfa: &CostedAutomaton,
    s: StateId,
    budget: usize,
    word: &mut Vec<Letter>,
    out: &mut BTreeSet<Vec<Letter>>,
) {
    if dfa.accepting[s] {
        out.insert(word.clone());
    }
    if budget == 0 {
        return;
    }
    for e in &dfa.edges[s] {
        word.push(e.label.clone().expect("ε-free"));
        enumerate_from(dfa, e.target, budget - 1, word, out);
        word.pop();
    }
}

/// Breadth-first walk over the product of the two determinized automata
/// (a missing transition is the implicit sink); returns the first word on
/// which `bad(accepted_by_a, accepted_by_b)` holds.
fn compare_languages(
    a: &CostedAutomaton,
    b: &CostedAutomaton,
    bad: impl Fn(bool, bool) -> bool,
) -> Option<Vec<Letter>> {
    let da = a.determinize();
    let db = b.determinize();
    type Pair = (Option<StateId>, Option<StateId>);
    let start: Pair = (Some(da.initial), Some(db.initial));
    let mut parent: HashMap<Pair, Option<(Pair, Letter)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let step = |d: &CostedAutomaton, s: Option<StateId>, l: &Letter| {
        s.and_then(|s| d.edges[s].iter().find(|e| e.label.as_ref() == Some(l)).map(|e| e.target))
    };
    while let Some(p @ (sa, sb)) = queue.pop_front() {
        let acc_a = sa.is_some_and(|s| da.accepting[s]);
        let acc_b = sb.is_some_and(|s| db.accepting[s]);
        if bad(acc_a, acc_b) {
            let mut word = Vec::new();
            let mut cur = p;
            while let Some(Some((prev, l))) = parent.get(&cur).cloned() {
                word.push(l);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        let mut letters: BTreeSet<&Letter> = BTreeSet::new();
        for (d, s) in [(&da, sa), (&db, sb)] {
            if let Some(s) = s {
                letters.extend(d.edges[s].iter().filter_map(|e| e.label.as_ref()));
            }
        }
        for l in letters {
            let next = (step(&da, sa, l), step(&db, sb, l));
            if let std::collections::hash_map::Entry::Vacant(v) = parent.entry(next) {
                v.insert(Some((p, l.clone())));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Product in which letters satisfying `shared` must be taken by both
/// automata at once and every other letter is taken by one side alone.
/// `$` and `#` are never shared.
pub fn sync_product(a: &CostedAutomaton, b: &CostedAutomaton, shared: impl Fn(&Letter) -> bool) -> CostedAutomaton {
    product(a, b, |l| l.is_move() && shared(l))
}

/// Product where `shared` letters advance both sides and the rest
/// interleave.
fn product(a: &CostedAutomaton, b: &CostedAutomaton, shared: impl Fn(&Letter) -> bool) -> CostedAutomaton {
    let a = a.remove_epsilon();
    let b = b.remove_epsilon();
    let mut out = CostedAutomaton::empty_language();
    out.alphabet = a.alphabet.union(&b.alphabet).cloned().collect();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::from([((a.initial, b.initial), 0)]);
    let mut pairs = vec![(a.initial, b.initial)];
    let mut i = 0;
    while i < pairs.len() {
        let (sa, sb) = pairs[i];
        out.accepting[i] = a.accepting[sa] && b.accepting[sb];
        let mut moves: Vec<(Letter, (StateId, StateId))> = Vec::new();
        for ea in &a.edges[sa] {
            let l = ea.label.as_ref().expect("ε-free");
            if shared(l) {
                for eb in &b.edges[sb] {
                    if eb.label.as_ref() == Some(l) {
                        moves.push((l.clone(), (ea.target, eb.target)));
                    }
                }
            } else {
                moves.push((l.clone(), (ea.target, sb)));
            }
        }
        for eb in &b.edges[sb] {
            let l = eb.label.as_ref().expect("ε-free");
            if !shared(l) {
                moves.push((l.clone(), (sa, eb.target)));
            }
        }
        for (l, pair) in moves {
            let id = *ids.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                out.accepting.push(false);
                out.edges.push(Vec::new());
                pairs.len() - 1
            });
            out.edges[i].push(Edge { label: Some(l), target: id });
        }
        i += 1;
    }
    out.trim()
}

/// True for moves that belong to the automaton's own type (no identifier
/// at the head of the tag).
fn is_own_move(l: &Letter) -> bool {
    match l {
        Letter::Move(m) => !matches!(m.tag.parts().first(), Some(TagPart::Id { .. })),
        _ => false,
    }
}

/// Composition `R ⟐_B S`: the own moves of `r` (its type's arena) are
/// identified with the moves of `s` tagged by `shared`, synchronized, and
/// hidden. `r` is replicated so that `s` may interrogate it any number of
/// times; tokens of both sides are kept.
pub fn compose(r: &CostedAutomaton, s: &CostedAutomaton, shared: &[TagPart]) -> Result<CostedAutomaton, AutomatonError> {
    let in_b = |l: &Letter| l.has_tag_prefix(shared);
    let r_b: BTreeSet<Letter> =
        r.alphabet.iter().filter(|l| is_own_move(l)).map(|l| l.with_tag_prefix(shared)).collect();
    let s_b: BTreeSet<&Letter> = s.alphabet.iter().filter(|l| in_b(l)).collect();
    if s_b.is_empty() || r_b.iter().any(|l| !s_b.contains(l)) {
        return Err(AutomatonError::AlphabetMismatch(Tag::new(shared.to_vec()).to_string()));
    }
    let retagged = r.map_moves(|m| {
        if matches!(m.tag.parts().first(), Some(TagPart::Id { .. })) {
            m.clone()
        } else {
            Move { kind: m.kind, tag: m.tag.prefixed(shared) }
        }
    });
    let product = sync_product(&retagged.star(), s, in_b);
    Ok(product.hide(in_b).remove_epsilon())
}
