//! Game-semantic and operational invariants over the corpus and random
//! configurations.

mod common;

use proptest::prelude::*;
use slotgame::automaton::{Letter, MoveKind, Value};
use slotgame::frontend::{DataType, Term, TypedTerm};
use slotgame::gamesem::{denote, state_strategy, CostModel, GammaState};
use slotgame::opsem::{evaluate, step, Configuration, Outcome, Step};

const LIMIT: u64 = 10_000;

fn corpus() -> Vec<TypedTerm> {
    common::corpus::corpus(4)
}

fn cost_model() -> impl Strategy<Value = CostModel> {
    (0u64..3, 0u64..3, 0u64..3, 0u64..3, 0u64..3, 0u64..3).prop_map(|(seq, if_, asg, der, var, op)| {
        CostModel::zero()
            .with("seq", seq)
            .with("if", if_)
            .with("asg", asg)
            .with("der", der)
            .with("var", var)
            .with("op.+", op)
            .with("op.>", op)
            .with("op.not", op)
    })
}

/// A corpus term, an initial value for `h`, and a bystander variable `g`
/// the term never mentions.
fn configuration() -> impl Strategy<Value = Configuration> {
    let terms = corpus();
    (0..terms.len(), 0u32..2, 0u32..3).prop_map(move |(i, h, g)| {
        let state = GammaState::new().with("h", common::corpus::INT2, Value::Int(h)).with("g", DataType::Int(3), Value::Int(g));
        Configuration::new(terms[i].term.clone(), state)
    })
}

/// Steps until termination, recording every intermediate configuration and
/// step cost.
fn trace(c: &Configuration, cm: &CostModel, limit: usize) -> Vec<(Configuration, u64)> {
    let mut out = Vec::new();
    let mut cur = c.clone();
    while out.len() < limit {
        match step(&cur, cm).unwrap() {
            Step::Next(next, k) => {
                out.push((next.clone(), k));
                cur = next;
            }
            Step::Terminal => break,
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stepping_is_deterministic(c in configuration(), cm in cost_model()) {
        prop_assert_eq!(trace(&c, &cm, 200), trace(&c, &cm, 200));
    }

    #[test]
    fn evaluation_cost_is_the_sum_of_step_costs(c in configuration(), cm in cost_model()) {
        let run = evaluate(&c, &cm, LIMIT).unwrap();
        if let Outcome::Terminated(final_state) = &run.outcome {
            let steps = trace(&c, &cm, LIMIT as usize);
            prop_assert_eq!(steps.iter().map(|(_, k)| k).sum::<u64>(), run.total_cost);
            prop_assert_eq!(&steps.last().map_or(c.state.clone(), |(s, _)| s.state.clone()), final_state);
        }
    }

    #[test]
    fn steps_leave_unmentioned_variables_alone(c in configuration(), cm in cost_model()) {
        for (next, _) in trace(&c, &cm, 200) {
            prop_assert_eq!(next.state.get("g"), c.state.get("g"));
        }
    }

    #[test]
    fn state_strategies_carry_no_tokens(h in 0u32..2, b in any::<bool>(), n in 0u32..4) {
        let s = GammaState::new()
            .with("h", DataType::Int(2), Value::Int(h))
            .with("b", DataType::Bool, Value::Bool(b))
            .with("n", DataType::Int(4), Value::Int(n));
        let m = state_strategy(&s).trim();
        prop_assert!(!m.is_empty());
        prop_assert!((0..m.state_count()).all(|q| m.edges_from(q).iter().all(|e| e.label != Some(Letter::Token))));
    }
}

/// Variables the term does not mention are unchanged after evaluation too.
#[test]
fn assignment_only_touches_its_target() {
    let cm = CostModel::default();
    for t in corpus() {
        let writes_h = format!("{:?}", t.term).contains("Assign(Var(Ident { name: \"h\"");
        for v in 0..2 {
            let s = GammaState::new().with("h", common::corpus::INT2, Value::Int(v));
            if let Outcome::Terminated(end) = evaluate(&Configuration::new(t.term.clone(), s), &cm, LIMIT).unwrap().outcome {
                assert!(writes_h || end.get("h") == Some(Value::Int(v)), "{}", slotgame::frontend::print_term(&t.term));
            }
        }
    }
}

/// Every complete play of a command opens with `run` and closes with `done`.
#[test]
fn command_plays_are_run_to_done() {
    let cm = CostModel::default();
    for t in corpus() {
        let m = denote(&t, &cm).unwrap();
        for w in m.enumerate_words(16) {
            let own: Vec<MoveKind> = w
                .iter()
                .filter_map(|l| l.as_move().filter(|mv| mv.tag.is_empty()).map(|mv| mv.kind))
                .collect();
            assert_eq!(own, [MoveKind::Run, MoveKind::Done], "{}", slotgame::frontend::print_term(&t.term));
            assert_eq!(w.first().and_then(Letter::as_move).map(|m| m.kind), Some(MoveKind::Run));
            assert_eq!(w.last().and_then(Letter::as_move).map(|m| m.kind), Some(MoveKind::Done));
        }
    }
}

/// Divergence: the operational semantics finds a repeated configuration and
/// the model at that state is empty.
#[test]
fn diverging_runs_have_empty_models() {
    let cm = CostModel::default();
    let t = common::corpus::with_high(Term::while_(Term::boolean(true), Term::Skip));
    let s = GammaState::new().with("h", common::corpus::INT2, Value::Int(0));
    assert_eq!(evaluate(&Configuration::new(t.term.clone(), s.clone()), &cm, LIMIT).unwrap().outcome, Outcome::Diverged);
    assert!(slotgame::gamesem::denote_at_state(&t, &s, &cm).unwrap().is_empty());
}
