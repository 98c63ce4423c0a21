use super::{CostedAutomaton, Letter};
use std::fmt;

/// Maximum number of tokens in an accepted word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorstCase {
    Bounded(u64),
    Unbounded,
}

impl fmt::Display for WorstCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorstCase::Bounded(n) => write!(f, "{n}"),
            WorstCase::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Strongly connected components, numbered in reverse topological order.
fn tarjan(a: &CostedAutomaton) -> Vec<usize> {
    let n = a.state_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // explicit call stack of (state, next edge position)
        let mut calls = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut pos)) = calls.last_mut() {
            let edges = a.edges_from(u);
            if *pos < edges.len() {
                let v = edges[*pos].target;
                *pos += 1;
                if index[v] == usize::MAX {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    calls.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                calls.pop();
                if let Some(&(p, _)) = calls.last() {
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Worst-case cost: the largest token count of an accepted word, or
/// `Unbounded` when a cycle of the trimmed automaton pays a token. The
/// empty language has cost 0.
pub fn worst_case_cost(r: &CostedAutomaton) -> WorstCase {
    let a = r.remove_epsilon();
    if a.is_empty() {
        return WorstCase::Bounded(0);
    }
    let comp = tarjan(&a);
    let ncomp = comp.iter().max().map_or(0, |m| m + 1);
    let mut dag: Vec<Vec<(usize, u64)>> = vec![Vec::new(); ncomp];
    for s in 0..a.state_count() {
        for e in a.edges_from(s) {
            let cost = u64::from(e.label == Some(Letter::Token));
            if comp[s] == comp[e.target] {
                if cost > 0 {
                    return WorstCase::Unbounded;
                }
            } else {
                dag[comp[s]].push((comp[e.target], cost));
            }
        }
    }
    // reverse topological numbering: edges go from higher to lower ids
    let mut best: Vec<Option<u64>> = vec![None; ncomp];
    best[comp[a.initial()]] = Some(0);
    for c in (0..ncomp).rev() {
        if let Some(b) = best[c] {
            for &(d, cost) in &dag[c] {
                let cand = b + cost;
                if best[d].is_none_or(|x| x < cand) {
                    best[d] = Some(cand);
                }
            }
        }
    }
    let max = (0..a.state_count()).filter(|&s| a.is_accepting(s)).filter_map(|s| best[comp[s]]).max();
    WorstCase::Bounded(max.unwrap_or(0))
}
