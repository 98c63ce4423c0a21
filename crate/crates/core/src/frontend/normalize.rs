//! β-normalization with explicit application charges.

use std::collections::BTreeSet;

use super::ast::{Term, TypedTerm};
use super::typing::renumber;
use crate::automaton::Name;

/// A name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    (1..)
        .map(|i| Name::from(format!("{base}_{i}")))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Renames the bound variable `from` to `to` in `body` (free occurrences only).
fn rename(body: &Term, from: &Name, to: &Name) -> Term {
    substitute(body, from, &Term::var(to))
}

/// Capture-avoiding substitution `t[n/x]`.
pub fn substitute(t: &Term, x: &Name, n: &Term) -> Term {
    let fv = n.free_names();
    subst_in(t, x, n, &fv)
}

fn subst_in(t: &Term, x: &Name, n: &Term, fv: &BTreeSet<Name>) -> Term {
    let go = |s: &Term| Box::new(subst_in(s, x, n, fv));
    match t {
        Term::Var(id) if &id.name == x => n.clone(),
        Term::Var(_) | Term::Const(..) | Term::Skip | Term::SkipHash | Term::Diverge => t.clone(),
        Term::Index { elems, index } => {
            // elements are variables; only a variable can replace them
            let elems = elems
                .iter()
                .map(|id| match n {
                    Term::Var(v) if &id.name == x => v.clone(),
                    _ => id.clone(),
                })
                .collect();
            Term::Index { elems, index: go(index) }
        }
        Term::BinOp(op, a, b) => Term::BinOp(*op, go(a), go(b)),
        Term::UnOp(op, a) => Term::UnOp(*op, go(a)),
        Term::Seq(a, b) => Term::Seq(go(a), go(b)),
        Term::If(a, b, c) => Term::If(go(a), go(b), go(c)),
        Term::While(a, b) => Term::While(go(a), go(b)),
        Term::Assign(a, b) => Term::Assign(go(a), go(b)),
        Term::Deref(a) => Term::Deref(go(a)),
        Term::Mkvar(a, b) => Term::Mkvar(go(a), go(b)),
        Term::App(a, b) => Term::App(go(a), go(b)),
        Term::Tick { apps, body } => Term::Tick { apps: *apps, body: go(body) },
        Term::New { var, ty, init, body } => {
            let init = go(init);
            if var == x {
                return Term::New { var: var.clone(), ty: *ty, init, body: body.clone() };
            }
            let (var, body) = avoid_capture(var, body, n, fv);
            Term::New { var, ty: *ty, init, body: Box::new(subst_in(&body, x, n, fv)) }
        }
        Term::Lam { param, ty, body } => {
            if param == x {
                return t.clone();
            }
            let (param, body) = avoid_capture(param, body, n, fv);
            Term::Lam { param, ty: ty.clone(), body: Box::new(subst_in(&body, x, n, fv)) }
        }
    }
}

fn avoid_capture(var: &Name, body: &Term, n: &Term, fv: &BTreeSet<Name>) -> (Name, Term) {
    if !fv.contains(var) {
        return (var.clone(), body.clone());
    }
    let mut avoid = body.all_names();
    avoid.extend(n.all_names());
    let fresh = fresh_name(var, &avoid);
    let body = rename(body, var, &fresh);
    (fresh, body)
}

fn split_ticks(t: Term) -> (u32, Term) {
    match t {
        Term::Tick { apps, body } => {
            let (more, inner) = split_ticks(*body);
            (apps + more, inner)
        }
        other => (0, other),
    }
}

fn tick(apps: u32, body: Term) -> Term {
    if apps == 0 {
        return body;
    }
    match body {
        Term::Tick { apps: more, body } => Term::Tick { apps: apps + more, body },
        other => Term::Tick { apps, body: Box::new(other) },
    }
}

/// β-normal form of a bare term, keeping existing occurrence numbers.
pub fn beta_normal(t: &Term) -> Term {
    let go = |s: &Term| Box::new(beta_normal(s));
    match t {
        Term::App(f, a) => {
            let (apps, head) = split_ticks(beta_normal(f));
            let a = beta_normal(a);
            match head {
                Term::Lam { param, body, .. } => tick(apps + 1, beta_normal(&substitute(&body, &param, &a))),
                head => Term::App(Box::new(tick(apps, head)), Box::new(a)),
            }
        }
        Term::Tick { apps, body } => tick(*apps, beta_normal(body)),
        Term::Var(_) | Term::Const(..) | Term::Skip | Term::SkipHash | Term::Diverge => t.clone(),
        Term::Index { elems, index } => Term::Index { elems: elems.clone(), index: go(index) },
        Term::BinOp(op, a, b) => Term::BinOp(*op, go(a), go(b)),
        Term::UnOp(op, a) => Term::UnOp(*op, go(a)),
        Term::Seq(a, b) => Term::Seq(go(a), go(b)),
        Term::If(a, b, c) => Term::If(go(a), go(b), go(c)),
        Term::While(a, b) => Term::While(go(a), go(b)),
        Term::Assign(a, b) => Term::Assign(go(a), go(b)),
        Term::Deref(a) => Term::Deref(go(a)),
        Term::Mkvar(a, b) => Term::Mkvar(go(a), go(b)),
        Term::New { var, ty, init, body } => Term::New { var: var.clone(), ty: *ty, init: go(init), body: go(body) },
        Term::Lam { param, ty, body } => Term::Lam { param: param.clone(), ty: ty.clone(), body: go(body) },
    }
}

/// Reduces every β-redex, wrapping each contracted redex in a `Tick` that
/// charges the application, then renumbers context occurrences.
pub fn normalize(t: &TypedTerm) -> TypedTerm {
    let term = beta_normal(&t.term);
    let delta: BTreeSet<Name> = t.delta.iter().map(|(n, _)| n.clone()).collect();
    let (term, occurrences) = renumber(&term, &delta);
    TypedTerm { term, occurrences, ..t.clone() }
}

/// True when the only λ-abstractions left are first arguments of `mkvar`
/// and every application has an identifier at its head.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Lam { .. } => false,
        Term::App(f, a) => app_head_is_ident(f) && is_normal(f) && is_normal(a),
        Term::Mkvar(a, b) => {
            let a_ok = match &**a {
                Term::Lam { body, .. } => is_normal(strip_lams(body)),
                other => is_normal(other),
            };
            a_ok && is_normal(b)
        }
        other => other.children().into_iter().all(is_normal),
    }
}

fn strip_lams(t: &Term) -> &Term {
    match t {
        Term::Lam { body, .. } => strip_lams(body),
        other => other,
    }
}

fn app_head_is_ident(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, _) => app_head_is_ident(f),
        _ => false,
    }
}
