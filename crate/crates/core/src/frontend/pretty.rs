//! Concrete-syntax printer; its output parses back to the same term.

use std::fmt::Write;

use super::ast::{BinOp, DataType, Term, Type, TypedTerm};
use crate::automaton::Name;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Seq,
    Stmt,
    Assign,
    Or,
    And,
    Cmp,
    Add,
    Mul,
    Unary,
    App,
    Atom,
}

fn op_level(op: BinOp) -> Level {
    match op {
        BinOp::Or => Level::Or,
        BinOp::And => Level::And,
        BinOp::Eq | BinOp::Lt | BinOp::Gt => Level::Cmp,
        BinOp::Add | BinOp::Sub => Level::Add,
        BinOp::Mul => Level::Mul,
    }
}

fn level(t: &Term) -> Level {
    match t {
        Term::Seq(..) | Term::New { .. } | Term::Lam { .. } => Level::Seq,
        Term::If(..) | Term::While(..) => Level::Stmt,
        Term::Assign(..) => Level::Assign,
        Term::BinOp(op, ..) => op_level(*op),
        Term::UnOp(..) | Term::Deref(..) => Level::Unary,
        Term::App(..) => Level::App,
        _ => Level::Atom,
    }
}

fn next(l: Level) -> Level {
    match l {
        Level::Seq => Level::Stmt,
        Level::Stmt => Level::Assign,
        Level::Assign => Level::Or,
        Level::Or => Level::And,
        Level::And => Level::Cmp,
        Level::Cmp => Level::Add,
        Level::Add => Level::Mul,
        Level::Mul => Level::Unary,
        Level::Unary => Level::App,
        Level::App | Level::Atom => Level::Atom,
    }
}

fn var_type(d: DataType) -> String {
    Type::Var(d).to_string()
}

/// `a[0], a[1], ...` names: the array and index, if `name` has that shape.
fn split_element(name: &str) -> Option<(&str, u32)> {
    let (base, rest) = name.split_once('[')?;
    Some((base, rest.strip_suffix(']')?.parse().ok()?))
}

/// Length of the chain `new a[0] in new a[1] in ...` starting at `t`.
fn array_chain(t: &Term) -> Option<(&str, u32, &Term)> {
    let Term::New { var, ty, init, .. } = t else { return None };
    let (base, 0) = split_element(var)? else { return None };
    let mut len = 0;
    let mut cur = t;
    while let Term::New { var: v, ty: ty2, init: init2, body } = cur {
        if split_element(v) != Some((base, len)) || ty2 != ty || init2 != init {
            break;
        }
        len += 1;
        cur = body;
    }
    Some((base, len, cur))
}

fn write_term(out: &mut String, t: &Term, ctx: Level) {
    let paren = level(t) < ctx;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(id) => out.push_str(&id.name),
        Term::Const(v, _) => write!(out, "{v}").unwrap(),
        Term::Skip => out.push_str("skip"),
        Term::SkipHash => out.push_str("skip#"),
        Term::Diverge => out.push_str("diverge"),
        Term::BinOp(op, a, b) => {
            let l = op_level(*op);
            let (la, lb) = if l == Level::Cmp { (Level::Add, Level::Add) } else { (l, next(l)) };
            write_term(out, a, la);
            write!(out, " {} ", op.symbol()).unwrap();
            write_term(out, b, lb);
        }
        Term::UnOp(_, a) => {
            out.push_str("not ");
            write_term(out, a, Level::Unary);
        }
        Term::Deref(a) => {
            out.push('!');
            write_term(out, a, Level::Unary);
        }
        Term::Seq(a, b) => write_seq(out, a, b, false),
        Term::If(c, a, b) => {
            out.push_str("if ");
            write_term(out, c, Level::Or);
            out.push_str(" then ");
            write_term(out, a, Level::Stmt);
            out.push_str(" else ");
            write_term(out, b, Level::Stmt);
        }
        Term::While(c, b) => {
            out.push_str("while ");
            write_term(out, c, Level::Or);
            out.push_str(" do ");
            write_term(out, b, Level::Stmt);
        }
        Term::Assign(a, b) => {
            write_term(out, a, Level::Or);
            out.push_str(" := ");
            write_term(out, b, Level::Or);
        }
        Term::New { var, ty, init, body } => {
            let (name, body) = match array_chain(t) {
                Some((base, len, rest)) if len > 1 => (format!("{base}[{len}]"), rest),
                _ => (var.to_string(), &**body),
            };
            write!(out, "new {name} : {} := ", var_type(*ty)).unwrap();
            write_term(out, init, Level::Or);
            out.push_str(" in ");
            write_term(out, body, Level::Seq);
        }
        Term::Mkvar(a, b) => {
            out.push_str("mkvar ");
            write_term(out, a, Level::Atom);
            out.push(' ');
            write_term(out, b, Level::Atom);
        }
        Term::Lam { param, ty, body } => {
            write!(out, "\\{param} : {ty}. ").unwrap();
            write_term(out, body, Level::Seq);
        }
        Term::App(f, a) => {
            write_term(out, f, Level::App);
            out.push(' ');
            write_term(out, a, Level::Atom);
        }
        Term::Tick { apps, body } => {
            write!(out, "tick<{apps}> ").unwrap();
            write_term(out, body, Level::Atom);
        }
        Term::Index { elems, index } => {
            let base = elems.first().and_then(|e| split_element(&e.name)).map_or("?", |(b, _)| b);
            write!(out, "{base}[").unwrap();
            write_term(out, index, Level::Or);
            out.push(']');
        }
    }
    if paren {
        out.push(')');
    }
}

/// Renders a term in the input syntax.
/// `;` associates to the left; `new` and λ bodies extend rightwards, so
/// they are bracketed when more of the sequence follows.
fn write_seq(out: &mut String, a: &Term, b: &Term, followed: bool) {
    match a {
        Term::Seq(x, y) => write_seq(out, x, y, true),
        _ => write_term(out, a, Level::Stmt),
    }
    out.push_str("; ");
    let lb = if followed || matches!(b, Term::Seq(..)) { Level::Stmt } else { Level::Seq };
    write_term(out, b, lb);
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, Level::Seq);
    out
}

/// Groups consecutive `x[0] .. x[k-1]` entries back into `x[k]`.
fn group_arrays<T: PartialEq + Clone>(entries: &[(Name, T)]) -> Vec<(String, T)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let (name, ty) = &entries[i];
        if let Some((base, 0)) = split_element(name) {
            let mut len = 1;
            while i + (len as usize) < entries.len() {
                let (n, t) = &entries[i + len as usize];
                if split_element(n) != Some((base, len)) || t != ty {
                    break;
                }
                len += 1;
            }
            out.push((format!("{base}[{len}]"), ty.clone()));
            i += len as usize;
        } else {
            out.push((name.to_string(), ty.clone()));
            i += 1;
        }
    }
    out
}

/// Renders a whole input file: declarations, term and type.
pub fn print_typed(t: &TypedTerm) -> String {
    let mut out = String::new();
    for (name, d) in group_arrays(&t.high) {
        writeln!(out, "high {name} : {};", var_type(d)).unwrap();
    }
    if let Some((name, d)) = &t.low {
        writeln!(out, "low {name} : {};", var_type(*d)).unwrap();
    }
    for (name, ty) in group_arrays(&t.delta) {
        writeln!(out, "given {name} : {ty};").unwrap();
    }
    write!(out, "|- {} : {}", print_term(&t.term), t.result).unwrap();
    out
}
