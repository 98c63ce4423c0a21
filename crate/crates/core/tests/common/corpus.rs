//! Exhaustive corpus of small semi-closed commands over one high variable.

use std::collections::{BTreeMap, BTreeSet};

use slotgame::automaton::Name;
use slotgame::frontend::{BinOp, DataType, Term, Type, TypedTerm, UnOp};

pub const INT2: DataType = DataType::Int(2);

/// Literal as the parser elaborates it.
pub fn lit(v: u32) -> Term {
    Term::int(v)
}

/// `h : varint2 ⊢ t : com`.
pub fn with_high(term: Term) -> TypedTerm {
    TypedTerm {
        term,
        high: vec![(Name::from("h"), INT2)],
        low: None,
        delta: vec![],
        result: Type::Com,
        occurrences: BTreeMap::new(),
    }
}

/// Terms of each sort with depth at most `d`, given the variables in scope.
struct Layer {
    ints: Vec<Term>,
    bools: Vec<Term>,
    coms: Vec<Term>,
}

fn is_const(t: &Term) -> bool {
    matches!(t, Term::Const(..))
}

fn exprs(d: usize, vars: &[&str]) -> (Vec<Term>, Vec<Term>) {
    if d == 0 {
        return (vec![], vec![]);
    }
    let mut ints = vec![lit(0), lit(1)];
    let mut bools = vec![];
    if d >= 2 {
        ints.extend(vars.iter().map(|v| Term::deref(Term::var(v))));
    }
    let (si, sb) = exprs(d - 1, vars);
    for a in &si {
        for b in &si {
            if is_const(a) && is_const(b) {
                continue;
            }
            ints.push(Term::binop(BinOp::Add, a.clone(), b.clone()));
            bools.push(Term::binop(BinOp::Gt, a.clone(), b.clone()));
        }
    }
    for b in &sb {
        bools.push(Term::UnOp(UnOp::Not, Box::new(b.clone())));
    }
    (ints, bools)
}

fn coms(d: usize, vars: &[&str]) -> Vec<Term> {
    if d == 0 {
        return vec![];
    }
    let mut out = vec![Term::Skip];
    let (ints, bools) = exprs(d - 1, vars);
    if d >= 2 {
        for v in vars {
            for e in &ints {
                out.push(Term::assign(Term::var(v), e.clone()));
            }
        }
    }
    let sub = coms(d - 1, vars);
    for a in sub.iter().filter(|a| **a != Term::Skip) {
        for b in &sub {
            out.push(Term::seq(a.clone(), b.clone()));
        }
    }
    for b in &bools {
        for t in &sub {
            for e in &sub {
                out.push(Term::if_(b.clone(), t.clone(), e.clone()));
            }
        }
        for body in sub.iter().filter(|c| **c != Term::Skip) {
            out.push(Term::while_(b.clone(), body.clone()));
        }
    }
    if !vars.contains(&"x") && d >= 2 {
        let inner: Vec<&str> = vars.iter().copied().chain(["x"]).collect();
        let body = coms(d - 1, &inner);
        for e in &ints {
            for c in body.iter().filter(|c| c.free_names().contains("x")) {
                out.push(Term::new_var("x", INT2, e.clone(), c.clone()));
            }
        }
    }
    out
}

/// Every command over `h : varint2` of AST depth at most `d`, up to two
/// syntactic redundancies: operators never combine two constants and a
/// sequence never starts with `skip`. Only terms mentioning `h` are kept.
pub fn corpus(d: usize) -> Vec<TypedTerm> {
    let mut seen = BTreeSet::new();
    coms(d, &["h"])
        .into_iter()
        .filter(|t| t.free_names().contains("h"))
        .filter(|t| seen.insert(slotgame::frontend::print_term(t)))
        .map(with_high)
        .collect()
}

