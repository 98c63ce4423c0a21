//! Costed small-step operational semantics, used as a reference oracle.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::automaton::{Name, Value};
use crate::frontend::{fresh_name, print_term, substitute, FrontendError, Term, TypedTerm};
use crate::gamesem::{CostModel, GammaState};

pub const DEFAULT_STEP_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpsemError {
    #[error("no reduction applies to {0}")]
    Stuck(String),
    #[error("the oracle needs an empty function context")]
    ContextNotEmpty,
    #[error(transparent)]
    Frontend(#[from] FrontendError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub term: Term,
    pub state: GammaState,
}

impl Configuration {
    pub fn new(term: Term, state: GammaState) -> Configuration {
        Configuration { term, state }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next(Configuration, u64),
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Terminated(GammaState),
    /// A configuration repeated: the run can never terminate.
    Diverged,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub total_cost: u64,
    pub steps: u64,
    pub final_term: Term,
}

impl RunResult {
    pub fn terminated(&self) -> bool {
        matches!(self.outcome, Outcome::Terminated(_))
    }
}

fn stuck<T>(t: &Term) -> Result<T, OpsemError> {
    Err(OpsemError::Stuck(print_term(t)))
}

type Reduced = Option<(Term, u64)>;

/// Reduces `sub`, which sits in an evaluation position of `t`, and rebuilds
/// `t` around the result.
fn inside(t: &Term, sub: &Term, s: &mut GammaState, cm: &CostModel, rebuild: impl FnOnce(Term) -> Term) -> Result<Reduced, OpsemError> {
    match reduce(sub, s, cm)? {
        Some((sub2, k)) => Ok(Some((rebuild(sub2), k))),
        None => stuck(t),
    }
}

fn reduce(t: &Term, s: &mut GammaState, cm: &CostModel) -> Result<Reduced, OpsemError> {
    let b = |t: Term| Box::new(t);
    match t {
        Term::Skip | Term::Const(..) => Ok(None),
        Term::SkipHash => Ok(Some((Term::Skip, 0))),
        Term::Diverge => Ok(Some((Term::Diverge, 0))),
        Term::Tick { apps, body } => Ok(Some(((**body).clone(), u64::from(*apps) * cm.app))),
        Term::BinOp(op, x, y) => match (&**x, &**y) {
            (Term::Const(m, dm), Term::Const(n, dn)) => {
                let Some(d) = op.result_type(*dm, *dn) else { return stuck(t) };
                let modulus = match d {
                    crate::frontend::DataType::Int(n) => n,
                    crate::frontend::DataType::Bool => 2,
                };
                match op.apply(*m, *n, modulus) {
                    Some(r) => Ok(Some((Term::Const(r, d), cm.binop(*op)))),
                    None => stuck(t),
                }
            }
            (Term::Const(..), _) => inside(t, y, s, cm, |y2| Term::BinOp(*op, x.clone(), b(y2))),
            _ => inside(t, x, s, cm, |x2| Term::BinOp(*op, b(x2), y.clone())),
        },
        Term::UnOp(op, x) => match &**x {
            Term::Const(v, d) => match op.apply(*v) {
                Some(r) => Ok(Some((Term::Const(r, *d), cm.unop(*op)))),
                None => stuck(t),
            },
            _ => inside(t, x, s, cm, |x2| Term::UnOp(*op, b(x2))),
        },
        Term::Seq(x, y) => match (&**x, &**y) {
            (Term::Skip, Term::Skip) => Ok(Some((Term::Skip, cm.seq))),
            (Term::Skip, _) => inside(t, y, s, cm, |y2| Term::Seq(x.clone(), b(y2))),
            _ => inside(t, x, s, cm, |x2| Term::Seq(b(x2), y.clone())),
        },
        Term::If(c, x, y) => match &**c {
            Term::Const(Value::Bool(true), _) => Ok(Some(((**x).clone(), cm.if_))),
            Term::Const(Value::Bool(false), _) => Ok(Some(((**y).clone(), cm.if_))),
            Term::Const(..) => stuck(t),
            _ => inside(t, c, s, cm, |c2| Term::If(b(c2), x.clone(), y.clone())),
        },
        Term::While(c, body) => {
            let unfolded = Term::if_((**c).clone(), Term::seq((**body).clone(), t.clone()), Term::Skip);
            Ok(Some((unfolded, 0)))
        }
        Term::Assign(l, r) => match (&**l, &**r) {
            (_, Term::Const(..)) if !matches!(**l, Term::Var(_) | Term::Mkvar(..)) => {
                inside(t, l, s, cm, |l2| Term::Assign(b(l2), r.clone()))
            }
            (Term::Var(x), Term::Const(v, _)) => {
                if s.set(&x.name, *v) {
                    Ok(Some((Term::Skip, cm.asg)))
                } else {
                    stuck(t)
                }
            }
            (Term::Mkvar(m1, _), Term::Const(..)) => Ok(Some((Term::App(m1.clone(), r.clone()), 0))),
            _ => inside(t, r, s, cm, |r2| Term::Assign(l.clone(), b(r2))),
        },
        Term::Deref(l) => match &**l {
            Term::Var(x) => match (s.get(&x.name), s.data_type(&x.name)) {
                (Some(v), Some(d)) => Ok(Some((Term::Const(v, d), cm.der))),
                _ => stuck(t),
            },
            Term::Mkvar(_, m2) => Ok(Some(((**m2).clone(), 0))),
            _ => inside(t, l, s, cm, |l2| Term::Deref(b(l2))),
        },
        Term::App(f, a) => match &**f {
            Term::Lam { param, body, .. } => Ok(Some((substitute(body, param, a), cm.app))),
            _ => inside(t, f, s, cm, |f2| Term::App(b(f2), a.clone())),
        },
        Term::Index { elems, index } => match &**index {
            Term::Const(j, _) => match j.as_int().and_then(|j| elems.get(j as usize)) {
                Some(e) => Ok(Some((Term::var(&e.name), 0))),
                None => Ok(Some((Term::Diverge, 0))),
            },
            _ => inside(t, index, s, cm, |i2| Term::Index { elems: elems.clone(), index: b(i2) }),
        },
        Term::New { var, ty, init, body } => {
            let v = match &**init {
                Term::Const(v, _) => *v,
                _ => {
                    return inside(t, init, s, cm, |i2| Term::New { var: var.clone(), ty: *ty, init: b(i2), body: body.clone() });
                }
            };
            if **body == Term::Skip {
                return Ok(Some((Term::Skip, cm.var)));
            }
            let mut avoid: BTreeSet<Name> = body.all_names();
            avoid.extend(s.iter().map(|(n, _, _)| n.clone()));
            avoid.insert(var.clone());
            let y = fresh_name(var, &avoid);
            s.insert(y.clone(), *ty, v);
            let stepped = reduce(&substitute(body, var, &Term::var(&y)), s, cm);
            let v2 = s.remove(&y).expect("local stays in the state");
            match stepped? {
                Some((body2, k)) => {
                    let body2 = substitute(&body2, &y, &Term::var(var));
                    Ok(Some((Term::New { var: var.clone(), ty: *ty, init: b(Term::Const(v2, *ty)), body: b(body2) }, k)))
                }
                None => stuck(t),
            }
        }
        Term::Var(_) | Term::Mkvar(..) | Term::Lam { .. } => stuck(t),
    }
}

/// One reduction step; `Terminal` once the term is `skip` or a constant.
pub fn step(c: &Configuration, cm: &CostModel) -> Result<Step, OpsemError> {
    let mut state = c.state.clone();
    Ok(match reduce(&c.term, &mut state, cm)? {
        Some((term, k)) => Step::Next(Configuration { term, state }, k),
        None => Step::Terminal,
    })
}

/// Runs to termination. Pending `skip ; [-]` frames around the redex are
/// kept as a counter so that loops do not deepen the term, and a repeated
/// configuration is reported as divergence.
pub fn evaluate(c: &Configuration, cm: &CostModel, step_limit: u64) -> Result<RunResult, OpsemError> {
    let mut frames = 0u64;
    let mut term = c.term.clone();
    let mut state = c.state.clone();
    let mut seen: HashSet<(Term, GammaState)> = HashSet::new();
    let mut total_cost = 0;
    let mut steps = 0;
    let outcome = loop {
        loop {
            match term {
                Term::Seq(x, y) if *x == Term::Skip && *y != Term::Skip => {
                    frames += 1;
                    term = *y;
                }
                other => {
                    term = other;
                    break;
                }
            }
        }
        if steps >= step_limit {
            break Outcome::StepLimit;
        }
        if term == Term::Skip && frames > 0 {
            frames -= 1;
            total_cost += cm.seq;
            steps += 1;
            continue;
        }
        if !seen.insert((term.clone(), state.clone())) {
            break Outcome::Diverged;
        }
        match reduce(&term, &mut state, cm)? {
            Some((next, k)) => {
                term = next;
                total_cost += k;
                steps += 1;
            }
            None if frames == 0 => break Outcome::Terminated(state.clone()),
            None => return stuck(&term),
        }
    };
    let final_term = (0..frames).fold(term, |t, _| Term::seq(Term::Skip, t));
    Ok(RunResult { outcome, total_cost, steps, final_term })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Secure,
    /// Two initial values of the high variable (other variables equal)
    /// whose terminating runs differ in cost.
    Leak { context: GammaState, high: (Value, Value), costs: (u64, u64) },
    /// Some run exceeded the step limit.
    Inconclusive { state: GammaState },
}

/// Evaluates `t` from every initial state and compares the costs of
/// terminating runs that differ only in the high variable.
pub fn oracle_timing_check(t: &TypedTerm, cm: &CostModel, step_limit: u64) -> Result<OracleVerdict, OpsemError> {
    if !t.delta.is_empty() {
        return Err(OpsemError::ContextNotEmpty);
    }
    let (h, hd) = t.single_high()?;
    let others: Vec<(Name, crate::frontend::DataType)> = t.var_context().into_iter().filter(|(n, _)| *n != h).collect();
    for context in GammaState::all(&others) {
        let mut seen: Option<(Value, u64)> = None;
        for v in hd.values() {
            let state = context.clone().with(h.clone(), hd, v);
            let run = evaluate(&Configuration::new(t.term.clone(), state.clone()), cm, step_limit)?;
            match run.outcome {
                Outcome::StepLimit => return Ok(OracleVerdict::Inconclusive { state }),
                Outcome::Diverged => {}
                Outcome::Terminated(_) => match seen {
                    Some((v0, c0)) if c0 != run.total_cost => {
                        return Ok(OracleVerdict::Leak { context, high: (v0, v), costs: (c0, run.total_cost) });
                    }
                    Some(_) => {}
                    None => seen = Some((v, run.total_cost)),
                },
            }
        }
    }
    Ok(OracleVerdict::Secure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_and_typecheck, DataType};

    fn run(src: &str, state: GammaState, cm: &CostModel) -> RunResult {
        let t = parse_and_typecheck(src).unwrap();
        evaluate(&Configuration::new(t.term, state), cm, DEFAULT_STEP_LIMIT).unwrap()
    }

    fn h(v: u32) -> GammaState {
        GammaState::new().with("h", DataType::Int(2), Value::Int(v))
    }

    const EXAMPLE1: &str = "high h:varint2 |- if !h > 0 then h := !h + 1 : com";

    #[test]
    fn addition_wraps_at_the_modulus() {
        let c = Configuration::new(Term::binop(crate::frontend::BinOp::Add, Term::int(1), Term::int(1)), GammaState::new());
        let c = Configuration { term: relabel_int2(c.term), ..c };
        match step(&c, &CostModel::default()).unwrap() {
            Step::Next(next, k) => {
                assert_eq!(next.term, Term::Const(Value::Int(0), DataType::Int(2)));
                assert_eq!(k, 1);
            }
            Step::Terminal => panic!("1+1 is a redex"),
        }
    }

    fn relabel_int2(t: Term) -> Term {
        match t {
            Term::BinOp(op, a, b) => Term::BinOp(op, Box::new(relabel_int2(*a)), Box::new(relabel_int2(*b))),
            Term::Const(v, _) => Term::Const(v, DataType::Int(2)),
            other => other,
        }
    }

    #[test]
    fn sequencing_and_while_unfolding() {
        let cm = CostModel::zero().with("seq", 3);
        let c = Configuration::new(Term::seq(Term::Skip, Term::Skip), GammaState::new());
        assert_eq!(step(&c, &cm).unwrap(), Step::Next(Configuration::new(Term::Skip, GammaState::new()), 3));
        let w = Term::while_(Term::boolean(true), Term::Skip);
        let Step::Next(next, 0) = step(&Configuration::new(w.clone(), GammaState::new()), &cm).unwrap() else {
            panic!("while unfolds for free")
        };
        assert_eq!(next.term, Term::if_(Term::boolean(true), Term::seq(Term::Skip, w), Term::Skip));
    }

    #[test]
    fn example_one_costs_by_hand() {
        let cm = CostModel::default();
        let low = run(EXAMPLE1, h(0), &cm);
        assert_eq!(low.total_cost, cm.if_ + cm.der + cm.binop(crate::frontend::BinOp::Gt));
        let high = run(EXAMPLE1, h(1), &cm);
        assert_eq!(high.total_cost, cm.if_ + 2 * cm.der + 2 + cm.asg);
        assert_eq!(high.outcome, Outcome::Terminated(h(0)));
    }

    #[test]
    fn skip_is_terminal() {
        let r = run("skip : com", GammaState::new(), &CostModel::default());
        assert_eq!((r.total_cost, r.steps, r.terminated()), (0, 0, true));
    }

    #[test]
    fn locals_are_scoped_and_shadow() {
        let cm = CostModel::default();
        let r = run("high h:varint2 |- new h : varint2 := 1 in h := 0 : com", h(1), &cm);
        assert_eq!(r.outcome, Outcome::Terminated(h(1)));
        assert_eq!(r.total_cost, cm.asg + cm.var);
        let r = run("high h:varint2 |- new y : varint2 := !h in h := !y + 1 : com", h(0), &cm);
        assert_eq!(r.outcome, Outcome::Terminated(h(1)));
    }

    #[test]
    fn divergence_is_detected() {
        let r = run("diverge : com", GammaState::new(), &CostModel::default());
        assert_eq!(r.outcome, Outcome::Diverged);
        let r = evaluate(
            &Configuration::new(Term::while_(Term::boolean(true), Term::Skip), GammaState::new()),
            &CostModel::default(),
            50,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Diverged);
        let r = run("skip; skip; skip : com", GammaState::new(), &CostModel::default());
        assert_eq!(r.steps, 2);
        let c = Configuration::new(parse_and_typecheck("skip; skip; skip : com").unwrap().term, GammaState::new());
        assert_eq!(evaluate(&c, &CostModel::default(), 1).unwrap().outcome, Outcome::StepLimit);
    }

    #[test]
    fn mkvar_and_beta() {
        let cm = CostModel::zero().with("app", 5);
        let r = run("high h:varint2 |- (mkvar (\\v : expint2. h := v) (!h)) := 1 : com", h(0), &cm);
        assert_eq!(r.outcome, Outcome::Terminated(h(1)));
        assert_eq!(r.total_cost, 5);
    }

    #[test]
    fn array_index_out_of_range_diverges() {
        let cm = CostModel::default();
        let r = run("high h:varint2 |- new a[1] : varint2 := 0 in h := !a[!h] : com", h(1), &cm);
        assert_eq!(r.outcome, Outcome::Diverged);
        let r = run("high h:varint2 |- new a[2] : varint2 := 1 in h := !a[!h] : com", h(0), &cm);
        assert_eq!(r.outcome, Outcome::Terminated(h(1)));
    }

    #[test]
    fn oracle_examples() {
        let t = parse_and_typecheck(EXAMPLE1).unwrap();
        let cm = CostModel::default();
        assert!(matches!(oracle_timing_check(&t, &cm, 1000).unwrap(), OracleVerdict::Leak { costs: (c0, c1), .. } if c0 < c1));
        let t = parse_and_typecheck("high h:varint2 |- h := 1 : com").unwrap();
        assert_eq!(oracle_timing_check(&t, &cm, 1000).unwrap(), OracleVerdict::Secure);
        let t = parse_and_typecheck("high h:varint2 |- if !h > 0 then { skip; skip } else skip : com").unwrap();
        assert_eq!(oracle_timing_check(&t, &CostModel::default().with("seq", 0), 1000).unwrap(), OracleVerdict::Secure);
        assert!(matches!(oracle_timing_check(&t, &cm, 1000).unwrap(), OracleVerdict::Leak { .. }));
        let t = parse_and_typecheck("high h:varint2 |- while !h > 0 do skip : com").unwrap();
        assert_eq!(oracle_timing_check(&t, &cm, 100).unwrap(), OracleVerdict::Secure);
        let t = parse_and_typecheck(EXAMPLE1).unwrap();
        assert!(matches!(oracle_timing_check(&t, &cm, 1).unwrap(), OracleVerdict::Inconclusive { .. }));
    }
}
