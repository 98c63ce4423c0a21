//! Weighted-balance decision: does every accepted word pay the same number
//! of tokens in the positively and negatively weighted segments?

use std::collections::{HashMap, VecDeque};

use super::letter::render_word;
use super::{AutomatonError, CostedAutomaton, Letter, StateId};

/// Expected number of delimiters and the weight of each of the
/// `delims + 1` segments they cut a word into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSpec {
    weights: Vec<i64>,
}

impl PhaseSpec {
    /// Weights must be in {-1, 0, +1} with at least one +1 and one -1.
    pub fn new(weights: Vec<i64>) -> Option<PhaseSpec> {
        let valid = weights.iter().all(|w| (-1..=1).contains(w))
            && weights.contains(&1)
            && weights.contains(&-1);
        valid.then_some(PhaseSpec { weights })
    }

    /// `w1 # w2` with `|w1| = |w2|`.
    pub fn two_halves() -> PhaseSpec {
        PhaseSpec { weights: vec![1, -1] }
    }

    /// `w1 # w2 # w3 # w4` with `|w2| = |w3|`.
    pub fn middle_pair() -> PhaseSpec {
        PhaseSpec { weights: vec![0, 1, -1, 0] }
    }

    pub fn delims(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Σ weight(segment) · tokens(segment).
    pub fn weighted_sum(&self, word: &[Letter]) -> i64 {
        segment_tokens(word).iter().zip(&self.weights).map(|(&n, &w)| n as i64 * w).sum()
    }
}

/// Tokens in each delimiter-separated segment of `word`.
pub fn segment_tokens(word: &[Letter]) -> Vec<usize> {
    let mut out = vec![0];
    for l in word {
        match l {
            Letter::Delim => out.push(0),
            Letter::Token => *out.last_mut().expect("non-empty") += 1,
            Letter::Move(_) => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub word: Vec<Letter>,
    pub segment_tokens: Vec<usize>,
}

impl Witness {
    pub fn new(word: Vec<Letter>) -> Witness {
        let segment_tokens = segment_tokens(&word);
        Witness { word, segment_tokens }
    }

    pub fn render(&self) -> String {
        render_word(&self.word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub witness: Option<Witness>,
}

struct PhaseGraph {
    /// (automaton state, phase); phase `delims + 1` means "too many".
    nodes: Vec<(StateId, usize)>,
    edges: Vec<Vec<(Letter, usize, i64)>>,
    accepting: Vec<bool>,
    live: Vec<bool>,
}

fn phase_graph(base: &CostedAutomaton, spec: &PhaseSpec) -> PhaseGraph {
    let d = spec.delims();
    let mut ids: HashMap<(StateId, usize), usize> = HashMap::from([((base.initial(), 0), 0)]);
    let mut nodes = vec![(base.initial(), 0)];
    let mut edges: Vec<Vec<(Letter, usize, i64)>> = vec![Vec::new()];
    let mut i = 0;
    while i < nodes.len() {
        let (s, phase) = nodes[i];
        let mut out = Vec::new();
        for e in base.edges_from(s) {
            let l = e.label.clone().expect("ε-free");
            let (next_phase, weight) = match l {
                Letter::Delim => ((phase + 1).min(d + 1), 0),
                Letter::Token => (phase, spec.weights.get(phase).copied().unwrap_or(0)),
                Letter::Move(_) => (phase, 0),
            };
            let key = (e.target, next_phase);
            let id = *ids.entry(key).or_insert_with(|| {
                nodes.push(key);
                edges.push(Vec::new());
                nodes.len() - 1
            });
            out.push((l, id, weight));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        edges[i] = out;
        i += 1;
    }
    let accepting: Vec<bool> = nodes.iter().map(|&(s, _)| base.is_accepting(s)).collect();
    let mut rev = vec![Vec::new(); nodes.len()];
    for (u, es) in edges.iter().enumerate() {
        for &(_, v, _) in es {
            rev[v].push(u);
        }
    }
    let mut live = accepting.clone();
    let mut stack: Vec<usize> = (0..nodes.len()).filter(|&u| live[u]).collect();
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !live[u] {
                live[u] = true;
                stack.push(u);
            }
        }
    }
    PhaseGraph { nodes, edges, accepting, live }
}

/// Shortest path (lexicographically least among equals) from the start
/// node to a node satisfying `goal`, over live nodes, where the search
/// state also carries the weight accumulated so far.
fn shortest_path(
    g: &PhaseGraph,
    max_len: usize,
    goal: impl Fn(usize, i64) -> bool,
) -> Option<Vec<Letter>> {
    type Node = (usize, i64);
    let start: Node = (0, 0);
    let mut parent: HashMap<Node, Option<(Node, Letter)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur @ (u, w), len)) = queue.pop_front() {
        if goal(u, w) {
            let mut word = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, l))) = parent.get(&at).cloned() {
                word.push(l);
                at = prev;
            }
            word.reverse();
            return Some(word);
        }
        if len == max_len {
            continue;
        }
        for (l, v, dw) in &g.edges[u] {
            if !g.live[*v] {
                continue;
            }
            let next = (*v, w + dw);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((cur, l.clone())));
                queue.push_back((next, len + 1));
            }
        }
    }
    None
}

/// Decides whether every accepted word of `r` has weighted token sum 0
/// under `spec`, by assigning integer potentials to the states of the
/// product with a delimiter counter. A potential conflict or a non-zero
/// accepting potential means unbalanced; the reported witness is then the
/// shortest unbalanced accepted word, ties broken lexicographically.
pub fn balance_verdict(r: &CostedAutomaton, spec: &PhaseSpec) -> Result<BalanceReport, AutomatonError> {
    let base = r.remove_epsilon();
    let g = phase_graph(&base, spec);
    let d = spec.delims();
    let bound = 2 * g.nodes.len() + 1;

    if (0..g.nodes.len()).any(|u| g.live[u] && g.accepting[u] && g.nodes[u].1 != d) {
        let word = shortest_path(&g, bound, |u, _| g.accepting[u] && g.nodes[u].1 != d)
            .expect("a live bad node is reachable");
        let found = word.iter().filter(|l| **l == Letter::Delim).count();
        return Err(AutomatonError::DelimCount { word: render_word(&word), found, expected: d });
    }
    if !g.live[0] {
        return Ok(BalanceReport { balanced: true, witness: None });
    }

    let mut potential: Vec<Option<i64>> = vec![None; g.nodes.len()];
    potential[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    let mut balanced = true;
    'search: while let Some(u) = queue.pop_front() {
        let pu = potential[u].expect("assigned before enqueue");
        if g.accepting[u] && pu != 0 {
            balanced = false;
            break;
        }
        for &(_, v, w) in &g.edges[u] {
            if !g.live[v] {
                continue;
            }
            match potential[v] {
                None => {
                    potential[v] = Some(pu + w);
                    queue.push_back(v);
                }
                Some(pv) if pv != pu + w => {
                    balanced = false;
                    break 'search;
                }
                Some(_) => {}
            }
        }
    }
    if balanced {
        return Ok(BalanceReport { balanced: true, witness: None });
    }
    let word = shortest_path(&g, bound, |u, w| g.accepting[u] && w != 0)
        .expect("an unbalanced word exists within twice the product size");
    Ok(BalanceReport { balanced: false, witness: Some(Witness::new(word)) })
}
