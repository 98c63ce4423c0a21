//! The structural translation from β-normal terms to costed automata.
//!
//! Every construct is a small "operator" automaton whose argument slots are
//! tagged `1, 2, ...`; sub-denotations are plugged into the slots by
//! composition. Denotations keep their own moves untagged and the moves of
//! free identifiers tagged by the identifier and occurrence.

use super::arena::{arena, cell, copycat, mv};
use super::{CostModel, GamesemError};
use crate::automaton::{compose, sync_product, CostedAutomaton, Letter, MoveKind, Name, TagPart, Value};
use crate::frontend::{beta_normal, print_term, DataType, Ident, Term, Type, UnOp};

fn own(kind: MoveKind) -> Letter {
    Letter::mv(kind)
}

fn slot(kind: MoveKind, i: u32) -> Letter {
    mv(kind, &[TagPart::Arg(i)])
}

fn word<I: IntoIterator<Item = Letter>>(letters: I) -> CostedAutomaton {
    CostedAutomaton::word(letters)
}

fn tokens(k: u64) -> CostedAutomaton {
    CostedAutomaton::tokens(k)
}

fn sum(parts: Vec<CostedAutomaton>) -> CostedAutomaton {
    CostedAutomaton::union_all(&parts)
}

fn cat(parts: &[CostedAutomaton]) -> CostedAutomaton {
    CostedAutomaton::concat_all(parts)
}

fn ident_tag(id: &Ident) -> Vec<TagPart> {
    vec![TagPart::occurrence(id.name.clone(), id.occ)]
}

/// True for moves of identifier `name` with occurrence `occ`.
fn owned_by(name: &Name, occ: u32) -> impl Fn(&Letter) -> bool + '_ {
    move |l: &Letter| {
        matches!(l.tag().and_then(|t| t.parts().first()), Some(TagPart::Id { name: n, occ: o }) if n == name && *o == occ)
    }
}

/// Binds the var-moves of `x` (occurrence 0) in `m` to a cell holding `v`
/// and hides them.
pub fn bind_cell(m: &CostedAutomaton, x: &Name, d: DataType, v: Value) -> CostedAutomaton {
    let c = cell(d, v).tag_all(&[TagPart::id(x.clone())]);
    let mine = owned_by(x, 0);
    sync_product(m, &c, &mine).hide(&mine).minimize()
}

pub struct Denoter<'a> {
    cm: &'a CostModel,
    env: Vec<(Name, Type)>,
}

impl<'a> Denoter<'a> {
    pub fn new(cm: &'a CostModel, env: Vec<(Name, Type)>) -> Self {
        Denoter { cm, env }
    }

    fn lookup(&self, name: &Name) -> Result<Type, GamesemError> {
        self.env
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| GamesemError::Unbound(name.clone()))
    }

    fn non_normal<T>(t: &Term) -> Result<T, GamesemError> {
        Err(GamesemError::NonNormalTerm(print_term(t)))
    }

    /// Head identifier and arguments of an application spine.
    fn spine(t: &Term) -> (&Term, Vec<&Term>) {
        match t {
            Term::App(f, a) => {
                let (h, mut args) = Self::spine(f);
                args.push(a);
                (h, args)
            }
            other => (other, Vec::new()),
        }
    }

    fn result_type(&self, t: &Term) -> Result<Type, GamesemError> {
        let (head, args) = Self::spine(t);
        let Term::Var(f) = head else { return Self::non_normal(t) };
        let ty = self.lookup(&f.name)?;
        let (params, res) = ty.arguments();
        if params.len() != args.len() {
            return Self::non_normal(t);
        }
        Ok(res.clone())
    }

    pub fn exp_type(&self, t: &Term) -> Result<DataType, GamesemError> {
        match t {
            Term::Const(_, d) => Ok(*d),
            Term::Deref(v) => self.var_type(v),
            Term::BinOp(op, a, b) => {
                let (da, db) = (self.exp_type(a)?, self.exp_type(b)?);
                op.result_type(da, db).ok_or_else(|| GamesemError::NonNormalTerm(print_term(t)))
            }
            Term::UnOp(..) => Ok(DataType::Bool),
            Term::Tick { body, .. } => self.exp_type(body),
            Term::Var(id) => match self.lookup(&id.name)? {
                Type::Exp(d) => Ok(d),
                _ => Self::non_normal(t),
            },
            Term::App(..) => match self.result_type(t)? {
                Type::Exp(d) => Ok(d),
                _ => Self::non_normal(t),
            },
            _ => Self::non_normal(t),
        }
    }

    pub fn var_type(&self, t: &Term) -> Result<DataType, GamesemError> {
        let of = |ty: Type| match ty {
            Type::Var(d) => Ok(d),
            _ => Self::non_normal(t),
        };
        match t {
            Term::Var(id) => of(self.lookup(&id.name)?),
            Term::Index { elems, .. } => of(self.lookup(&elems[0].name)?),
            Term::Tick { body, .. } => self.var_type(body),
            Term::App(..) => of(self.result_type(t)?),
            Term::Mkvar(a, _) => match &**a {
                Term::Lam { ty: Type::Exp(d), .. } => Ok(*d),
                other => match self.lookup_fun(other)? {
                    Type::Fun(args, _) => match args.first() {
                        Some(Type::Exp(d)) => Ok(*d),
                        _ => Self::non_normal(t),
                    },
                    _ => Self::non_normal(t),
                },
            },
            _ => Self::non_normal(t),
        }
    }

    fn lookup_fun(&self, t: &Term) -> Result<Type, GamesemError> {
        match t {
            Term::Var(id) => self.lookup(&id.name),
            Term::Tick { body, .. } => self.lookup_fun(body),
            other => Self::non_normal(other),
        }
    }

    /// Composes each sub-denotation into its slot of `op`. Slots are listed
    /// with their types so that `op`'s alphabet covers their whole arenas.
    fn plug(&self, op: CostedAutomaton, slots: Vec<(u32, Type, CostedAutomaton)>) -> Result<CostedAutomaton, GamesemError> {
        let mut alphabet = Vec::new();
        for (i, ty, _) in &slots {
            alphabet.extend(arena(ty, &[TagPart::Arg(*i)]));
        }
        let mut acc = op.with_alphabet(alphabet);
        for (i, _, sub) in slots {
            acc = compose(&sub, &acc, &[TagPart::Arg(i)])?.minimize();
        }
        Ok(acc)
    }

    pub fn denote(&mut self, t: &Term) -> Result<CostedAutomaton, GamesemError> {
        use MoveKind::*;
        let cm = self.cm;
        let com_slots = |a: CostedAutomaton, i| (i, Type::Com, a);
        let out = match t {
            Term::Const(v, _) => word([own(Q), own(Answer(*v))]),
            Term::Skip => word([own(Run), own(Done)]),
            Term::SkipHash => word([own(Run), Letter::Delim, own(Done)]),
            Term::Diverge => CostedAutomaton::empty_language().with_alphabet([own(Run), own(Done)]),
            Term::Var(id) => {
                let ty = self.lookup(&id.name)?;
                if !ty.is_base() {
                    return Self::non_normal(t);
                }
                copycat(&ty, &ident_tag(id))
            }
            Term::App(..) => self.application(t)?,
            Term::Tick { apps, body } => self.denote(body)?.insert_after_initial(u64::from(*apps) * cm.app)?,
            Term::BinOp(op, a, b) => {
                let (da, db) = (self.exp_type(a)?, self.exp_type(b)?);
                let modulus = match op.result_type(da, db) {
                    Some(DataType::Int(n)) => n,
                    Some(DataType::Bool) => 2,
                    None => return Self::non_normal(t),
                };
                let branches = da
                    .values()
                    .into_iter()
                    .map(|m| {
                        let inner = db
                            .values()
                            .into_iter()
                            .filter_map(|n| op.apply(m, n, modulus).map(|r| word([slot(Answer(n), 2), own(Answer(r))])))
                            .collect();
                        word([slot(Answer(m), 1), slot(Q, 2)]).concat(&sum(inner))
                    })
                    .collect();
                let s = cat(&[word([own(Q)]), tokens(cm.binop(*op)), word([slot(Q, 1)]), sum(branches)]);
                let (sa, sb) = (self.denote(a)?, self.denote(b)?);
                self.plug(s, vec![(1, Type::Exp(da), sa), (2, Type::Exp(db), sb)])?
            }
            Term::UnOp(op @ UnOp::Not, a) => {
                let branches = [true, false]
                    .into_iter()
                    .map(|b| word([slot(Answer(Value::Bool(b)), 1), own(Answer(Value::Bool(!b)))]))
                    .collect();
                let s = cat(&[word([own(Q)]), tokens(cm.unop(*op)), word([slot(Q, 1)]), sum(branches)]);
                let sa = self.denote(a)?;
                self.plug(s, vec![(1, Type::Exp(DataType::Bool), sa)])?
            }
            Term::Seq(a, b) => {
                let s = cat(&[
                    word([own(Run), slot(Run, 1), slot(Done, 1)]),
                    tokens(cm.seq),
                    word([slot(Run, 2), slot(Done, 2), own(Done)]),
                ]);
                let (sa, sb) = (self.denote(a)?, self.denote(b)?);
                self.plug(s, vec![com_slots(sa, 1), com_slots(sb, 2)])?
            }
            Term::If(c, a, b) => {
                let tt = Answer(Value::Bool(true));
                let ff = Answer(Value::Bool(false));
                let s = cat(&[
                    word([own(Run)]),
                    tokens(cm.if_),
                    word([slot(Q, 1)]),
                    word([slot(tt, 1), slot(Run, 2), slot(Done, 2)]).union(&word([slot(ff, 1), slot(Run, 3), slot(Done, 3)])),
                    word([own(Done)]),
                ]);
                let (sc, sa, sb) = (self.denote(c)?, self.denote(a)?, self.denote(b)?);
                self.plug(s, vec![(1, Type::Exp(DataType::Bool), sc), com_slots(sa, 2), com_slots(sb, 3)])?
            }
            Term::While(c, b) => {
                // each iteration also pays the sequencing of the unfolded body
                let iteration = cat(&[
                    tokens(cm.if_),
                    word([slot(Q, 1), slot(Answer(Value::Bool(true)), 1), slot(Run, 2), slot(Done, 2)]),
                    tokens(cm.seq),
                ]);
                let s = cat(&[
                    word([own(Run)]),
                    iteration.star(),
                    tokens(cm.if_),
                    word([slot(Q, 1), slot(Answer(Value::Bool(false)), 1), own(Done)]),
                ]);
                let (sc, sb) = (self.denote(c)?, self.denote(b)?);
                self.plug(s, vec![(1, Type::Exp(DataType::Bool), sc), com_slots(sb, 2)])?
            }
            Term::Assign(l, r) => {
                let d = self.var_type(l)?;
                let branches = d
                    .values()
                    .into_iter()
                    .map(|n| word([slot(Q, 2), slot(Answer(n), 2), slot(Write(n), 1), slot(Ok, 1)]))
                    .collect();
                let s = cat(&[word([own(Run)]), tokens(cm.asg), sum(branches), word([own(Done)])]);
                let (sl, sr) = (self.denote(l)?, self.denote(r)?);
                self.plug(s, vec![(1, Type::Var(d), sl), (2, Type::Exp(d), sr)])?
            }
            Term::Deref(v) => {
                let d = self.var_type(v)?;
                let branches =
                    d.values().into_iter().map(|n| word([slot(Answer(n), 1), own(Answer(n))])).collect();
                let s = cat(&[word([own(Q)]), tokens(cm.der), word([slot(Read, 1)]), sum(branches)]);
                let sv = self.denote(v)?;
                self.plug(s, vec![(1, Type::Var(d), sv)])?
            }
            Term::New { var, ty, init, body } => self.new_block(var, *ty, init, body)?,
            Term::Mkvar(a, b) => self.mkvar(t, a, b)?,
            Term::Index { elems, index } => self.index(elems, index)?,
            Term::Lam { .. } => return Self::non_normal(t),
        };
        Result::Ok(out.minimize())
    }

    fn application(&mut self, t: &Term) -> Result<CostedAutomaton, GamesemError> {
        let (head, args) = Self::spine(t);
        let Term::Var(f) = head else { return Self::non_normal(t) };
        let ty = self.lookup(&f.name)?;
        let (params, _) = ty.arguments();
        if params.len() != args.len() {
            return Self::non_normal(t);
        }
        let mut s = copycat(&ty, &ident_tag(f));
        for (i, a) in args.iter().enumerate() {
            let sub = self.denote(a)?;
            s = compose(&sub, &s, &[TagPart::Arg(i as u32 + 1)])?.minimize();
        }
        Result::Ok(s.insert_after_initial(self.cm.app * args.len() as u64)?)
    }

    fn new_block(&mut self, x: &Name, d: DataType, init: &Term, body: &Term) -> Result<CostedAutomaton, GamesemError> {
        self.env.push((x.clone(), Type::Var(d)));
        let m = self.denote(body);
        self.env.pop();
        let m = m?;
        let bound = if let Term::Const(v, _) = init {
            bind_cell(&m, x, d, *v)
        } else {
            // evaluate the initializer, then run the body from the value read
            let values = d.values();
            let branches = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let k = i as u32 + 2;
                    word([slot(MoveKind::Answer(*v), 1), slot(MoveKind::Run, k), slot(MoveKind::Done, k)])
                })
                .collect();
            let s = cat(&[word([own(MoveKind::Run), slot(MoveKind::Q, 1)]), sum(branches), word([own(MoveKind::Done)])]);
            let mut slots = vec![(1, Type::Exp(self.exp_type(init)?), self.denote(init)?)];
            for (i, v) in values.iter().enumerate() {
                slots.push((i as u32 + 2, Type::Com, bind_cell(&m, x, d, *v)));
            }
            self.plug(s, slots)?
        };
        Ok(bound.insert_after_initial(self.cm.var)?)
    }

    fn mkvar(&mut self, t: &Term, a: &Term, b: &Term) -> Result<CostedAutomaton, GamesemError> {
        use MoveKind::*;
        let d = self.var_type(t)?;
        let values = d.values();
        let mut branches = vec![word([own(Read), slot(Q, 2)]).concat(&sum(
            values.iter().map(|n| word([slot(Answer(*n), 2), own(Answer(*n))])).collect(),
        ))];
        let mut slots = vec![(2, Type::Exp(d), self.denote(b)?)];
        for (i, v) in values.iter().enumerate() {
            let k = i as u32 + 3;
            branches.push(word([own(Write(*v)), slot(Run, k), slot(Done, k), own(Ok)]));
            let applied = beta_normal(&Term::app(a.clone(), Term::Const(*v, d)));
            slots.push((k, Type::Com, self.denote(&applied)?));
        }
        self.plug(sum(branches), slots)
    }

    fn index(&mut self, elems: &[Ident], index: &Term) -> Result<CostedAutomaton, GamesemError> {
        use MoveKind::*;
        let d = match self.lookup(&elems[0].name)? {
            Type::Var(d) => d,
            _ => return Err(GamesemError::NonNormalTerm("index over a non-variable array".into())),
        };
        let di = self.exp_type(index)?;
        let positions = di.values();
        let select = |then: &dyn Fn(&[TagPart]) -> CostedAutomaton| {
            sum(positions
                .iter()
                .filter_map(|j| {
                    let e = elems.get(j.as_int()? as usize)?;
                    Some(word([slot(Answer(*j), 1)]).concat(&then(&ident_tag(e))))
                })
                .collect())
        };
        let read = cat(&[
            word([own(Read), slot(Q, 1)]),
            select(&|tag| {
                word([mv(Read, tag)]).concat(&sum(d.values().into_iter().map(|n| word([mv(Answer(n), tag), own(Answer(n))])).collect()))
            }),
        ]);
        let mut branches = vec![read];
        for v in d.values() {
            branches.push(cat(&[
                word([own(Write(v)), slot(Q, 1)]),
                select(&|tag| word([mv(Write(v), tag), mv(Ok, tag), own(Ok)])),
            ]));
        }
        let mut alphabet = arena(&Type::Var(d), &[]);
        for e in elems {
            alphabet.extend(arena(&Type::Var(d), &ident_tag(e)));
        }
        let s = sum(branches).with_alphabet(alphabet);
        let si = self.denote(index)?;
        self.plug(s, vec![(1, Type::Exp(di), si)])
    }
}
