//! Elaboration of the surface tree: name resolution, array desugaring and
//! type checking with subsumption on `expint`, plus occurrence numbering of
//! context identifiers.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{DataType, Ident, Term, Type, TypedTerm, UnOp};
use super::parser::{Class, Kind, Node, Pos, Program};
use super::FrontendError;
use crate::automaton::{Name, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Context,
    Delta,
    Local,
}

#[derive(Clone, Debug)]
enum Entry {
    Plain(Type, Origin),
    Array(u32, Type),
}

/// Name of the `j`-th variable an array declaration stands for.
pub fn element_name(array: &str, j: u32) -> Name {
    format!("{array}[{j}]").into()
}

fn type_error<T>(pos: Pos, expected: impl ToString, actual: impl ToString) -> Result<T, FrontendError> {
    Err(FrontendError::Type { pos, expected: expected.to_string(), actual: actual.to_string() })
}

struct Elaborator {
    env: Vec<(Name, Entry)>,
}

impl Elaborator {
    fn lookup(&self, name: &str) -> Option<&Entry> {
        self.env.iter().rev().find(|(n, _)| &**n == name).map(|(_, e)| e)
    }

    fn ident(&self, pos: Pos, name: &Name) -> Result<(Term, Type), FrontendError> {
        match self.lookup(name) {
            Some(Entry::Plain(ty, origin)) => {
                let occ = u32::from(*origin == Origin::Delta);
                Ok((Term::Var(Ident { name: name.clone(), occ }), ty.clone()))
            }
            Some(Entry::Array(..)) => type_error(pos, "indexed array element", format!("array {name}")),
            None => type_error(pos, "declared identifier", name),
        }
    }

    fn with_binding<T>(&mut self, bindings: Vec<(Name, Entry)>, f: impl FnOnce(&mut Self) -> T) -> T {
        let depth = self.env.len();
        self.env.extend(bindings);
        let out = f(self);
        self.env.truncate(depth);
        out
    }

    fn expect(&mut self, node: &Node, want: &Type) -> Result<Term, FrontendError> {
        let (t, ty) = self.elab(node)?;
        if !ty.fits_in(want) {
            return type_error(node.pos, want, ty);
        }
        Ok(t)
    }

    fn exp(&mut self, node: &Node) -> Result<(Term, DataType), FrontendError> {
        match self.elab(node)? {
            (t, Type::Exp(d)) => Ok((t, d)),
            (_, other) => type_error(node.pos, "expression", other),
        }
    }

    fn var(&mut self, node: &Node) -> Result<(Term, DataType), FrontendError> {
        match self.elab(node)? {
            (t, Type::Var(d)) => Ok((t, d)),
            (_, other) => type_error(node.pos, "variable", other),
        }
    }

    fn elab(&mut self, node: &Node) -> Result<(Term, Type), FrontendError> {
        let pos = node.pos;
        Ok(match &node.kind {
            Kind::Ident(name) => self.ident(pos, name)?,
            Kind::Int(n) => (Term::int(*n), Type::Exp(DataType::of_literal(Value::Int(*n)))),
            Kind::Bool(b) => (Term::boolean(*b), Type::Exp(DataType::Bool)),
            Kind::Skip => (Term::Skip, Type::Com),
            Kind::Diverge => (Term::Diverge, Type::Com),
            Kind::Index(name, index) => self.index(pos, name, index)?,
            Kind::Bin(op, a, b) => {
                let (ta, da) = self.exp(a)?;
                let (tb, db) = self.exp(b)?;
                let Some(d) = op.result_type(da, db) else {
                    return type_error(pos, format!("operands for `{}`", op.symbol()), format!("{da} and {db}"));
                };
                (Term::binop(*op, ta, tb), Type::Exp(d))
            }
            Kind::Not(a) => (Term::UnOp(UnOp::Not, Box::new(self.expect(a, &Type::Exp(DataType::Bool))?)), Type::Exp(DataType::Bool)),
            Kind::Deref(a) => {
                let (t, d) = self.var(a)?;
                (Term::deref(t), Type::Exp(d))
            }
            Kind::Seq(a, b) => (Term::seq(self.expect(a, &Type::Com)?, self.expect(b, &Type::Com)?), Type::Com),
            Kind::If(c, t, e) => {
                let c = self.expect(c, &Type::Exp(DataType::Bool))?;
                let t = self.expect(t, &Type::Com)?;
                let e = match e {
                    Some(e) => self.expect(e, &Type::Com)?,
                    None => Term::Skip,
                };
                (Term::if_(c, t, e), Type::Com)
            }
            Kind::While(c, b) => {
                let c = self.expect(c, &Type::Exp(DataType::Bool))?;
                (Term::while_(c, self.expect(b, &Type::Com)?), Type::Com)
            }
            Kind::Assign(l, r) => {
                let (tl, d) = self.var(l)?;
                (Term::assign(tl, self.expect(r, &Type::Exp(d))?), Type::Com)
            }
            Kind::New { name, size, ty, init, body } => self.new_block(name, *size, *ty, init.as_deref(), body)?,
            Kind::Mkvar(a, b) => {
                let (ta, tya) = self.elab(a)?;
                let d = match &tya {
                    Type::Fun(args, res) if args.len() == 1 && **res == Type::Com => match args[0] {
                        Type::Exp(d) => d,
                        _ => return type_error(a.pos, "exp -> com", tya),
                    },
                    _ => return type_error(a.pos, "exp -> com", tya),
                };
                let tb = self.expect(b, &Type::Exp(d))?;
                (Term::Mkvar(Box::new(ta), Box::new(tb)), Type::Var(d))
            }
            Kind::Lam { name, ty, body } => {
                if !ty.is_base() {
                    return type_error(pos, "base parameter type", ty);
                }
                let (tb, tyb) =
                    self.with_binding(vec![(name.clone(), Entry::Plain(ty.clone(), Origin::Local))], |e| e.elab(body))?;
                let (args, res) = tyb.arguments();
                let mut all = vec![ty.clone()];
                all.extend(args.iter().cloned());
                let fun = Type::Fun(all, Box::new(res.clone()));
                (Term::Lam { param: name.clone(), ty: ty.clone(), body: Box::new(tb) }, fun)
            }
            Kind::App(f, a) => {
                let (tf, tyf) = self.elab(f)?;
                let Type::Fun(args, res) = &tyf else { return type_error(f.pos, "function", tyf) };
                let ta = self.expect(a, &args[0])?;
                let rest = if args.len() == 1 { (**res).clone() } else { Type::Fun(args[1..].to_vec(), res.clone()) };
                (Term::app(tf, ta), rest)
            }
        })
    }

    fn index(&mut self, pos: Pos, name: &Name, index: &Node) -> Result<(Term, Type), FrontendError> {
        let Some(Entry::Array(len, ty)) = self.lookup(name).cloned() else {
            return type_error(pos, "array", name);
        };
        if let Kind::Int(j) = index.kind {
            if j >= len {
                return type_error(index.pos, format!("index below {len}"), j);
            }
            return self.ident(pos, &element_name(name, j));
        }
        if !matches!(ty, Type::Var(_)) {
            return type_error(pos, "variable array for a computed index", ty);
        }
        let (ti, di) = self.exp(index)?;
        if !matches!(di, DataType::Int(_)) {
            return type_error(index.pos, "integer index", di);
        }
        let mut elems = Vec::new();
        for j in 0..len {
            let (Term::Var(id), _) = self.ident(pos, &element_name(name, j))? else { unreachable!("identifier") };
            elems.push(id);
        }
        Ok((Term::Index { elems, index: Box::new(ti) }, ty))
    }

    fn new_block(
        &mut self,
        name: &Name,
        size: Option<u32>,
        ty: DataType,
        init: Option<&Node>,
        body: &Node,
    ) -> Result<(Term, Type), FrontendError> {
        let init = match init {
            Some(n) => self.expect(n, &Type::Exp(ty))?,
            None => Term::Const(ty.values()[0], DataType::of_literal(ty.values()[0])),
        };
        let names: Vec<Name> = match size {
            None => vec![name.clone()],
            Some(k) => (0..k).map(|j| element_name(name, j)).collect(),
        };
        let mut bindings: Vec<(Name, Entry)> =
            names.iter().map(|n| (n.clone(), Entry::Plain(Type::Var(ty), Origin::Local))).collect();
        if let Some(k) = size {
            bindings.push((name.clone(), Entry::Array(k, Type::Var(ty))));
        }
        let body = self.with_binding(bindings, |e| e.expect(body, &Type::Com))?;
        let term = names.iter().rev().fold(body, |acc, n| Term::New {
            var: n.clone(),
            ty,
            init: Box::new(init.clone()),
            body: Box::new(acc),
        });
        Ok((term, Type::Com))
    }
}

/// Numbers the free occurrences of each identifier in `delta` 1, 2, ... in
/// left-to-right order and returns the occurrence map.
pub fn renumber(term: &Term, delta: &BTreeSet<Name>) -> (Term, BTreeMap<Name, Vec<u32>>) {
    let mut counters: BTreeMap<Name, u32> = delta.iter().map(|n| (n.clone(), 0)).collect();
    let out = renumber_in(term, &mut Vec::new(), &mut counters);
    let map = counters.into_iter().map(|(n, c)| (n, (1..=c).collect())).collect();
    (out, map)
}

fn number(id: &Ident, bound: &[Name], counters: &mut BTreeMap<Name, u32>) -> Ident {
    match counters.get_mut(&id.name) {
        Some(c) if !bound.contains(&id.name) => {
            *c += 1;
            Ident { name: id.name.clone(), occ: *c }
        }
        _ => Ident { name: id.name.clone(), occ: 0 },
    }
}

fn renumber_in(t: &Term, bound: &mut Vec<Name>, counters: &mut BTreeMap<Name, u32>) -> Term {
    macro_rules! go {
        ($e:expr) => {
            Box::new(renumber_in($e, bound, counters))
        };
    }
    match t {
        Term::Var(id) => Term::Var(number(id, bound, counters)),
        Term::Index { elems, index } => {
            let index = go!(index);
            Term::Index { elems: elems.iter().map(|id| number(id, bound, counters)).collect(), index }
        }
        Term::Const(..) | Term::Skip | Term::SkipHash | Term::Diverge => t.clone(),
        Term::BinOp(op, a, b) => Term::BinOp(*op, go!(a), go!(b)),
        Term::UnOp(op, a) => Term::UnOp(*op, go!(a)),
        Term::Seq(a, b) => Term::Seq(go!(a), go!(b)),
        Term::If(a, b, c) => Term::If(go!(a), go!(b), go!(c)),
        Term::While(a, b) => Term::While(go!(a), go!(b)),
        Term::Assign(a, b) => Term::Assign(go!(a), go!(b)),
        Term::Deref(a) => Term::Deref(go!(a)),
        Term::Mkvar(a, b) => Term::Mkvar(go!(a), go!(b)),
        Term::App(a, b) => Term::App(go!(a), go!(b)),
        Term::Tick { apps, body } => Term::Tick { apps: *apps, body: go!(body) },
        Term::New { var, ty, init, body } => {
            let init = go!(init);
            bound.push(var.clone());
            let body = go!(body);
            bound.pop();
            Term::New { var: var.clone(), ty: *ty, init, body }
        }
        Term::Lam { param, ty, body } => {
            bound.push(param.clone());
            let body = go!(body);
            bound.pop();
            Term::Lam { param: param.clone(), ty: ty.clone(), body }
        }
    }
}

/// Resolves names, desugars arrays and checks types.
pub fn elaborate(p: &Program) -> Result<TypedTerm, FrontendError> {
    let mut high = Vec::new();
    let mut low = None;
    let mut delta = Vec::new();
    let mut env = Vec::new();
    let mut seen = BTreeSet::new();
    for d in &p.decls {
        if !seen.insert(d.name.clone()) {
            return type_error(d.pos, "distinct declarations", format!("duplicate {}", d.name));
        }
        let names: Vec<Name> = match d.size {
            None => vec![d.name.clone()],
            Some(0) => return type_error(d.pos, "positive array size", 0),
            Some(k) => (0..k).map(|j| element_name(&d.name, j)).collect(),
        };
        let origin = match d.class {
            Class::High | Class::Low => {
                let Type::Var(dt) = d.ty else { return type_error(d.pos, "variable type", &d.ty) };
                for n in &names {
                    if d.class == Class::High {
                        high.push((n.clone(), dt));
                    } else if low.replace((n.clone(), dt)).is_some() {
                        return type_error(d.pos, "a single low variable", n);
                    }
                }
                Origin::Context
            }
            Class::Given => {
                delta.extend(names.iter().map(|n| (n.clone(), d.ty.clone())));
                Origin::Delta
            }
        };
        env.extend(names.iter().map(|n| (n.clone(), Entry::Plain(d.ty.clone(), origin))));
        if let Some(k) = d.size {
            env.push((d.name.clone(), Entry::Array(k, d.ty.clone())));
        }
    }
    let mut el = Elaborator { env };
    let (term, ty) = el.elab(&p.term)?;
    if !ty.fits_in(&p.ty) {
        return type_error(p.ty_pos, &p.ty, ty);
    }
    let delta_names: BTreeSet<Name> = delta.iter().map(|(n, _)| n.clone()).collect();
    let (term, occurrences) = renumber(&term, &delta_names);
    Ok(TypedTerm { term, high, low, delta, result: p.ty.clone(), occurrences })
}
