//! Typed abstract syntax of second-order Idealized Algol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::automaton::{Name, Value};

/// Finite data set: `int_n = {0..n-1}` or the booleans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataType {
    Int(u32),
    Bool,
}

impl DataType {
    pub fn values(self) -> Vec<Value> {
        match self {
            DataType::Int(n) => (0..n).map(Value::Int).collect(),
            DataType::Bool => vec![Value::Bool(false), Value::Bool(true)],
        }
    }

    pub fn contains(self, v: Value) -> bool {
        match (self, v) {
            (DataType::Int(n), Value::Int(x)) => x < n,
            (DataType::Bool, Value::Bool(_)) => true,
            _ => false,
        }
    }

    /// `int_m` is included in `int_n` for `m <= n`.
    pub fn fits_in(self, other: DataType) -> bool {
        match (self, other) {
            (DataType::Int(m), DataType::Int(n)) => m <= n,
            (a, b) => a == b,
        }
    }

    /// Smallest type containing literal `v`.
    pub fn of_literal(v: Value) -> DataType {
        match v {
            Value::Int(n) => DataType::Int(n + 1),
            Value::Bool(_) => DataType::Bool,
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataType::Int(n) => write!(f, "int{n}"),
            DataType::Bool => f.write_str("bool"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Exp(DataType),
    Com,
    Var(DataType),
    /// First-order function type: base arguments, base result.
    Fun(Vec<Type>, Box<Type>),
}

impl Type {
    pub fn is_base(&self) -> bool {
        !matches!(self, Type::Fun(..))
    }

    /// Subsumption: `expint_m <= expint_n` when `m <= n`, identity otherwise.
    pub fn fits_in(&self, other: &Type) -> bool {
        match (self, other) {
            (Type::Exp(a), Type::Exp(b)) => a.fits_in(*b),
            (a, b) => a == b,
        }
    }

    /// Splits `B1 -> ... -> Bk -> B` into arguments and result.
    pub fn arguments(&self) -> (&[Type], &Type) {
        match self {
            Type::Fun(args, res) => (args, res),
            base => (&[], base),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Exp(DataType::Int(n)) => write!(f, "expint{n}"),
            Type::Exp(DataType::Bool) => f.write_str("expbool"),
            Type::Var(DataType::Int(n)) => write!(f, "varint{n}"),
            Type::Var(DataType::Bool) => f.write_str("varbool"),
            Type::Com => f.write_str("com"),
            Type::Fun(args, res) => {
                for a in args {
                    write!(f, "{a} -> ")?;
                }
                write!(f, "{res}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
    Gt,
    And,
    Or,
}

impl BinOp {
    pub const ALL: [BinOp; 8] =
        [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Eq, BinOp::Lt, BinOp::Gt, BinOp::And, BinOp::Or];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Applies the operator; arithmetic is modulo `modulus`, the larger of
    /// the two operand sizes.
    pub fn apply(self, a: Value, b: Value, modulus: u32) -> Option<Value> {
        use Value::{Bool, Int};
        Some(match (self, a, b) {
            (BinOp::Add, Int(x), Int(y)) => Int(((x as u64 + y as u64) % modulus as u64) as u32),
            (BinOp::Sub, Int(x), Int(y)) => Int((x as i64 - y as i64).rem_euclid(modulus as i64) as u32),
            (BinOp::Mul, Int(x), Int(y)) => Int(((x as u64 * y as u64) % modulus as u64) as u32),
            (BinOp::Eq, x, y) if std::mem::discriminant(&x) == std::mem::discriminant(&y) => Bool(x == y),
            (BinOp::Lt, Int(x), Int(y)) => Bool(x < y),
            (BinOp::Gt, Int(x), Int(y)) => Bool(x > y),
            (BinOp::And, Bool(x), Bool(y)) => Bool(x && y),
            (BinOp::Or, Bool(x), Bool(y)) => Bool(x || y),
            _ => return None,
        })
    }

    /// Result type for operand types, if the operator applies to them.
    pub fn result_type(self, a: DataType, b: DataType) -> Option<DataType> {
        use DataType::{Bool, Int};
        match (self, a, b) {
            (BinOp::Add | BinOp::Sub | BinOp::Mul, Int(m), Int(n)) => Some(Int(m.max(n))),
            (BinOp::Lt | BinOp::Gt, Int(_), Int(_)) => Some(Bool),
            (BinOp::Eq, Int(_), Int(_)) | (BinOp::Eq, Bool, Bool) => Some(Bool),
            (BinOp::And | BinOp::Or, Bool, Bool) => Some(Bool),
            _ => None,
        }
    }
}

/// The only unary operator; `!` is dereferencing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnOp {
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        "not"
    }

    pub fn apply(self, v: Value) -> Option<Value> {
        v.as_bool().map(|b| Value::Bool(!b))
    }
}

/// An identifier occurrence. `occ` numbers the distinct occurrences of a
/// context identifier introduced by contraction; 0 for everything else.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident {
    pub name: Name,
    pub occ: u32,
}

impl Ident {
    pub fn new(name: impl Into<Name>) -> Ident {
        Ident { name: name.into(), occ: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Ident),
    Const(Value, DataType),
    Skip,
    /// `skip#`: does nothing, emits the delimiter. Never produced by the parser.
    SkipHash,
    Diverge,
    BinOp(BinOp, Box<Term>, Box<Term>),
    UnOp(UnOp, Box<Term>),
    Seq(Box<Term>, Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    While(Box<Term>, Box<Term>),
    Assign(Box<Term>, Box<Term>),
    Deref(Box<Term>),
    New { var: Name, ty: DataType, init: Box<Term>, body: Box<Term> },
    Mkvar(Box<Term>, Box<Term>),
    Lam { param: Name, ty: Type, body: Box<Term> },
    App(Box<Term>, Box<Term>),
    /// Charges `apps` function-application costs, then behaves as the body.
    Tick { apps: u32, body: Box<Term> },
    /// Array element selected by a computed index; `elems[j]` is `a[j]`.
    Index { elems: Vec<Ident>, index: Box<Term> },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::new(name))
    }

    pub fn int(n: u32) -> Term {
        Term::Const(Value::Int(n), DataType::of_literal(Value::Int(n)))
    }

    pub fn boolean(b: bool) -> Term {
        Term::Const(Value::Bool(b), DataType::Bool)
    }

    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn deref(a: Term) -> Term {
        Term::Deref(Box::new(a))
    }

    pub fn assign(a: Term, b: Term) -> Term {
        Term::Assign(Box::new(a), Box::new(b))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn while_(c: Term, b: Term) -> Term {
        Term::While(Box::new(c), Box::new(b))
    }

    pub fn binop(op: BinOp, a: Term, b: Term) -> Term {
        Term::BinOp(op, Box::new(a), Box::new(b))
    }

    pub fn new_var(var: &str, ty: DataType, init: Term, body: Term) -> Term {
        Term::New { var: var.into(), ty, init: Box::new(init), body: Box::new(body) }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Const(..) | Term::Skip)
    }

    /// Immediate subterms.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(..) | Term::Skip | Term::SkipHash | Term::Diverge => vec![],
            Term::UnOp(_, a) | Term::Deref(a) => vec![a],
            Term::Tick { body, .. } | Term::Lam { body, .. } => vec![body],
            Term::Index { index, .. } => vec![index],
            Term::BinOp(_, a, b)
            | Term::Seq(a, b)
            | Term::While(a, b)
            | Term::Assign(a, b)
            | Term::Mkvar(a, b)
            | Term::App(a, b) => vec![a, b],
            Term::New { init, body, .. } => vec![init, body],
            Term::If(a, b, c) => vec![a, b, c],
        }
    }

    /// AST depth; leaves have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Term::depth).max().unwrap_or(0)
    }

    /// Free identifier names.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every name used anywhere in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_all(self, &mut out);
        out
    }

    /// Occurrences of identifiers, in left-to-right order.
    pub fn occurrences(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        collect_idents(self, &mut out);
        out
    }

    /// True when some `while` subterm mentions `name` freely.
    pub fn occurs_in_while(&self, name: &str) -> bool {
        match self {
            Term::While(..) => self.free_names().iter().any(|n| &**n == name),
            other => other.children().into_iter().any(|c| c.occurs_in_while(name)),
        }
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(id) => {
            if !bound.contains(&id.name) {
                out.insert(id.name.clone());
            }
        }
        Term::Index { elems, index } => {
            for id in elems {
                if !bound.contains(&id.name) {
                    out.insert(id.name.clone());
                }
            }
            collect_free(index, bound, out);
        }
        Term::New { var, init, body, .. } => {
            collect_free(init, bound, out);
            bound.push(var.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::Lam { param, body, .. } => {
            bound.push(param.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        other => {
            for c in other.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn collect_all(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(id) => {
            out.insert(id.name.clone());
        }
        Term::Index { elems, .. } => out.extend(elems.iter().map(|e| e.name.clone())),
        Term::New { var, .. } => {
            out.insert(var.clone());
        }
        Term::Lam { param, .. } => {
            out.insert(param.clone());
        }
        _ => {}
    }
    for c in t.children() {
        collect_all(c, out);
    }
}

fn collect_idents<'a>(t: &'a Term, out: &mut Vec<&'a Ident>) {
    match t {
        Term::Var(id) => out.push(id),
        Term::Index { elems, index } => {
            collect_idents(index, out);
            out.extend(elems.iter());
        }
        other => {
            for c in other.children() {
                collect_idents(c, out);
            }
        }
    }
}

/// A well-typed term with its split context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedTerm {
    pub term: Term,
    /// High-security global variables.
    pub high: Vec<(Name, DataType)>,
    /// Low-security global variable, used by the non-interference check.
    pub low: Option<(Name, DataType)>,
    /// The context Δ.
    pub delta: Vec<(Name, Type)>,
    pub result: Type,
    /// Occurrence numbers of each Δ identifier, in term order.
    pub occurrences: BTreeMap<Name, Vec<u32>>,
}

impl TypedTerm {
    /// Closed term with empty contexts.
    pub fn closed(term: Term, result: Type) -> TypedTerm {
        TypedTerm { term, high: vec![], low: None, delta: vec![], result, occurrences: BTreeMap::new() }
    }

    /// The var-context Γ: high then low variables.
    pub fn var_context(&self) -> Vec<(Name, DataType)> {
        let mut out = self.high.clone();
        out.extend(self.low.clone());
        out
    }

    /// Type of a context identifier.
    pub fn context_type(&self, name: &str) -> Option<Type> {
        self.var_context()
            .into_iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, d)| Type::Var(d))
            .or_else(|| self.delta.iter().find(|(n, _)| &**n == name).map(|(_, t)| t.clone()))
    }

    pub fn is_semi_closed(&self) -> bool {
        self.delta.is_empty()
    }
}
