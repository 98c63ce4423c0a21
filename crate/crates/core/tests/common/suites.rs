//! The corpus-wide and randomized suites, shared by the acceptance target
//! and the dedicated property tests.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slotgame::automaton::letter::parse_word;
use slotgame::automaton::{balance_verdict, AutomatonError, CostedAutomaton, Letter, MoveKind, PhaseSpec, Value};
use slotgame::frontend::print_term;
use slotgame::gamesem::{denote_at_state, CostModel, GammaState};
use slotgame::opsem::{evaluate, oracle_timing_check, Configuration, OracleVerdict, Outcome};
use slotgame::security::{build_timing_model_closed, Verdict};

use super::corpus::{corpus, INT2};

pub const CORPUS_DEPTH: usize = 4;
pub const STEP_LIMIT: u64 = 10_000;

#[derive(Debug, Default)]
pub struct Report {
    pub compared: usize,
    pub failures: Vec<String>,
    /// Free-form breakdown of the compared cases.
    pub detail: String,
}

impl Report {
    pub fn summary(&self) -> String {
        let sample: Vec<&String> = self.failures.iter().take(3).collect();
        format!("{} compared, {} failures {}{:?}", self.compared, self.failures.len(), self.detail, sample)
    }
}

pub fn adequacy_cost_models() -> Vec<CostModel> {
    vec![
        CostModel::default(),
        CostModel::zero()
            .with("seq", 1)
            .with("if", 2)
            .with("asg", 3)
            .with("der", 1)
            .with("var", 2)
            .with("op.+", 1)
            .with("op.>", 4)
            .with("op.not", 1),
    ]
}

fn costed_run(n: u64) -> CostedAutomaton {
    let mut word = parse_word("run").unwrap();
    word.extend(std::iter::repeat_n(Letter::Token, n as usize));
    word.extend(parse_word("done").unwrap());
    CostedAutomaton::word(word)
}

/// Every corpus term at every state: a run of cost n must match exactly the
/// language {run $^n done}, and divergence the empty language.
pub fn adequacy() -> Report {
    let terms = corpus(CORPUS_DEPTH);
    let mut report = Report::default();
    let (mut terminating, mut diverging) = (0, 0);
    for cm in adequacy_cost_models() {
        for t in &terms {
            for v in 0..2 {
                let s = GammaState::new().with("h", INT2, Value::Int(v));
                let run = evaluate(&Configuration::new(t.term.clone(), s.clone()), &cm, STEP_LIMIT).unwrap();
                let model = denote_at_state(t, &s, &cm).unwrap();
                let ok = match run.outcome {
                    Outcome::Terminated(_) => {
                        terminating += 1;
                        model.language_equal(&costed_run(run.total_cost))
                    }
                    Outcome::Diverged => {
                        diverging += 1;
                        model.is_empty()
                    }
                    Outcome::StepLimit => false,
                };
                report.compared += 1;
                if !ok {
                    report.failures.push(format!("h={v}: {}", print_term(&t.term)));
                }
            }
        }
    }
    report.detail = format!("({terminating} terminating, {diverging} diverging) ");
    report
}

pub fn agreement_cost_models() -> Vec<CostModel> {
    vec![CostModel::default(), CostModel::zero().with("if", 1).with("op.+", 2), CostModel::zero().with("asg", 1)]
}

/// Closed self-composition check against the evaluating oracle. Leaks must
/// also agree on the two costs, up to the fixed per-half overhead of the
/// model (`new h` and the sequencing around `skip#`).
pub fn oracle_agreement() -> Report {
    let terms = corpus(CORPUS_DEPTH);
    let mut report = Report::default();
    let (mut secure, mut leak) = (0, 0);
    for cm in agreement_cost_models() {
        for t in &terms {
            let oracle = oracle_timing_check(t, &cm, STEP_LIMIT).unwrap();
            let verdict = build_timing_model_closed(t, &cm).unwrap().check().unwrap();
            let ok = match (&oracle, &verdict) {
                (OracleVerdict::Secure, Verdict::Secure { .. }) => {
                    secure += 1;
                    true
                }
                (OracleVerdict::Leak { costs: (a, b), .. }, Verdict::Leak(c)) => {
                    leak += 1;
                    let overhead = cm.var + cm.seq;
                    let mut want = [*a + overhead, *b + overhead];
                    let mut got = [c.cost_before, c.cost_after];
                    want.sort();
                    got.sort();
                    want == got
                }
                _ => false,
            };
            report.compared += 1;
            if !ok {
                report.failures.push(format!("{}: oracle {oracle:?}, model {}", print_term(&t.term), verdict.label()));
            }
        }
    }
    report.detail = format!("({secure} secure, {leak} leak) ");
    report
}

#[derive(Debug, PartialEq, Eq)]
enum Brute {
    DelimCount,
    Unbalanced(usize),
    Balanced,
}

fn closure(a: &CostedAutomaton, set: &mut BTreeSet<usize>) {
    let mut stack: Vec<usize> = set.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for e in a.edges_from(s) {
            if e.label.is_none() && set.insert(e.target) {
                stack.push(e.target);
            }
        }
    }
}

/// Explores every word up to `max_len` by subset simulation, merging
/// prefixes that agree on reached states, delimiters seen and weighted
/// token sum, and classifies the automaton by its shortest offending word.
fn brute_force(a: &CostedAutomaton, spec: &PhaseSpec, letters: &[Letter], max_len: usize) -> Brute {
    let d = spec.delims();
    let mut start = BTreeSet::from([a.initial()]);
    closure(a, &mut start);
    let mut layer: BTreeSet<(BTreeSet<usize>, usize, i64)> = BTreeSet::from([(start, 0, 0)]);
    let mut unbalanced: Option<usize> = None;
    for len in 0..=max_len {
        for (states, delims, weight) in &layer {
            if states.iter().any(|&s| a.is_accepting(s)) {
                if *delims != d {
                    return Brute::DelimCount;
                }
                if unbalanced.is_none() && *weight != 0 {
                    unbalanced = Some(len);
                }
            }
        }
        if len == max_len {
            break;
        }
        let mut next = BTreeSet::new();
        for (states, delims, weight) in &layer {
            for l in letters {
                let mut to: BTreeSet<usize> = states
                    .iter()
                    .flat_map(|&s| a.edges_from(s).iter().filter(|e| e.label.as_ref() == Some(l)).map(|e| e.target))
                    .collect();
                if to.is_empty() {
                    continue;
                }
                closure(a, &mut to);
                let (delims, weight) = match l {
                    Letter::Delim => ((delims + 1).min(d + 1), *weight),
                    Letter::Token => (*delims, weight + spec.weights().get(*delims).copied().unwrap_or(0)),
                    Letter::Move(_) => (*delims, *weight),
                };
                next.insert((to, delims, weight));
            }
        }
        layer = next;
    }
    unbalanced.map_or(Brute::Balanced, Brute::Unbalanced)
}

/// A random automaton with at most six states. Phased automata only let
/// delimiters advance through `spec.delims() + 1` groups of states, which
/// keeps the delimiter count right and exercises the balance question.
fn random_automaton(rng: &mut StdRng, spec: &PhaseSpec, letters: &[Letter], phased: bool) -> CostedAutomaton {
    let phases = spec.delims() + 1;
    let n = rng.gen_range(if phased { phases } else { 1 }..=6);
    let phase: Vec<usize> = (0..n).map(|i| if phased { (i * phases / n).min(phases - 1) } else { 0 }).collect();
    let mut a = CostedAutomaton::empty_language();
    let mut ids = vec![a.initial()];
    for _ in 1..n {
        ids.push(a.add_state());
    }
    for i in 0..n {
        let last = phase[i] == phases - 1;
        a.set_accepting(ids[i], rng.gen_bool(0.5) && (!phased || last));
        for _ in 0..rng.gen_range(1..=4) {
            let label = if rng.gen_bool(0.1) { None } else { Some(letters[rng.gen_range(0..letters.len())].clone()) };
            let want = if label == Some(Letter::Delim) { phase[i] + 1 } else { phase[i] };
            let targets: Vec<usize> = (0..n).filter(|&j| !phased || phase[j] == want).collect();
            if let Some(&j) = targets.get(rng.gen_range(0..targets.len().max(1))) {
                a.add_edge(ids[i], label, ids[j]);
            }
        }
    }
    if phased {
        let members = |p: usize| -> Vec<usize> { (0..n).filter(|&j| phase[j] == p).collect() };
        for p in 0..phases - 1 {
            let (from, to) = (members(p), members(p + 1));
            a.add_edge(ids[from[rng.gen_range(0..from.len())]], Some(Letter::Delim), ids[to[rng.gen_range(0..to.len())]]);
        }
        let last = members(phases - 1);
        a.set_accepting(ids[last[rng.gen_range(0..last.len())]], true);
    }
    a.with_alphabet(letters.iter().cloned())
}

/// Random automata against brute-force enumeration to length `max_len`.
pub fn balance_agreement(count: usize, max_len: usize, seed: u64) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let letters = vec![Letter::Token, Letter::Delim, Letter::mv(MoveKind::Run), Letter::mv(MoveKind::Done)];
    let mut report = Report::default();
    let (mut errors, mut balanced, mut unbalanced, mut empty) = (0, 0, 0, 0);
    for i in 0..count {
        let spec = if i % 5 == 4 { PhaseSpec::middle_pair() } else { PhaseSpec::two_halves() };
        let a = random_automaton(&mut rng, &spec, &letters, i % 3 != 0);
        if a.is_empty() {
            empty += 1;
        }
        let brute = brute_force(&a, &spec, &letters, max_len);
        let got = balance_verdict(&a, &spec);
        let ok = match (&brute, &got) {
            (Brute::DelimCount, Err(AutomatonError::DelimCount { .. })) => {
                errors += 1;
                true
            }
            (Brute::Balanced, Ok(r)) if r.balanced => {
                balanced += 1;
                true
            }
            (Brute::Unbalanced(len), Ok(r)) if !r.balanced => {
                unbalanced += 1;
                let w = r.witness.as_ref().expect("unbalanced verdicts carry a witness");
                a.accepts(&w.word) && spec.weighted_sum(&w.word) != 0 && w.word.len() == *len
            }
            _ => false,
        };
        report.compared += 1;
        if !ok {
            report.failures.push(format!("automaton #{i}: brute force {brute:?}, procedure {got:?}"));
        }
    }
    report.detail = format!("({errors} delimiter errors, {balanced} balanced of which {empty} empty, {unbalanced} unbalanced) ");
    report
}
