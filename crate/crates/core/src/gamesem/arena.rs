//! Arenas of the base types, copy-cat strategies and storage cells.

use crate::automaton::{CostedAutomaton, Letter, MoveKind, Tag, TagPart, Value};
use crate::frontend::{DataType, Type};

/// Each question of a base type with its possible answers.
pub fn questions(t: &Type) -> Vec<(MoveKind, Vec<MoveKind>)> {
    let answers = |d: DataType| d.values().into_iter().map(MoveKind::Answer).collect::<Vec<_>>();
    match t {
        Type::Com => vec![(MoveKind::Run, vec![MoveKind::Done])],
        Type::Exp(d) => vec![(MoveKind::Q, answers(*d))],
        Type::Var(d) => {
            let mut out = vec![(MoveKind::Read, answers(*d))];
            out.extend(d.values().into_iter().map(|v| (MoveKind::Write(v), vec![MoveKind::Ok])));
            out
        }
        Type::Fun(_, res) => questions(res),
    }
}

/// All moves of a type's arena, arguments tagged by position.
pub fn arena(t: &Type, tag: &[TagPart]) -> Vec<Letter> {
    let mut out = Vec::new();
    let (args, res) = t.arguments();
    for (q, ans) in questions(res) {
        out.push(mv(q, tag));
        out.extend(ans.into_iter().map(|a| mv(a, tag)));
    }
    for (i, a) in args.iter().enumerate() {
        out.extend(arena(a, &extend(tag, TagPart::Arg(i as u32 + 1))));
    }
    out
}

pub fn mv(kind: MoveKind, tag: &[TagPart]) -> Letter {
    Letter::tagged(kind, Tag::new(tag.to_vec()))
}

pub fn extend(tag: &[TagPart], part: TagPart) -> Vec<TagPart> {
    let mut out = tag.to_vec();
    out.push(part);
    out
}

fn word(letters: &[Letter]) -> CostedAutomaton {
    CostedAutomaton::word(letters.iter().cloned())
}

/// `Σ_q q^{to} · q^{from} · Σ_a a^{from} · a^{to}` over a base type.
fn relay(t: &Type, to: &[TagPart], from: &[TagPart]) -> CostedAutomaton {
    let parts: Vec<CostedAutomaton> = questions(t)
        .into_iter()
        .map(|(q, ans)| {
            let answers: Vec<CostedAutomaton> =
                ans.into_iter().map(|a| word(&[mv(a, from), mv(a, to)])).collect();
            word(&[mv(q, to), mv(q, from)]).concat(&CostedAutomaton::union_all(&answers))
        })
        .collect();
    CostedAutomaton::union_all(&parts)
}

/// Copy-cat strategy for an identifier of first-order type `t` whose moves
/// carry `tag`: the question is forwarded, arguments may be interrogated
/// any number of times, and the answer is copied back.
pub fn copycat(t: &Type, tag: &[TagPart]) -> CostedAutomaton {
    let (args, res) = t.arguments();
    let calls: Vec<CostedAutomaton> = args
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let slot = [TagPart::Arg(i as u32 + 1)];
            relay(a, &extend(tag, slot[0].clone()), &slot)
        })
        .collect();
    let interrogations = CostedAutomaton::union_all(&calls).star();
    let parts: Vec<CostedAutomaton> = questions(res)
        .into_iter()
        .map(|(q, ans)| {
            let answers: Vec<CostedAutomaton> = ans.into_iter().map(|a| word(&[mv(a, tag), mv(a, &[])])).collect();
            word(&[mv(q, &[]), mv(q, tag)]).concat(&interrogations).concat(&CostedAutomaton::union_all(&answers))
        })
        .collect();
    let mut alphabet = arena(t, &[]);
    alphabet.extend(arena(t, tag));
    CostedAutomaton::union_all(&parts).with_alphabet(alphabet).minimize()
}

/// Good-variable behaviour over untagged var moves:
/// `(read·v)* · (Σ_n write(n)·ok·(read·n)*)*`.
pub fn cell(d: DataType, v: Value) -> CostedAutomaton {
    // states: one per current value; reads loop, writes move through an ok state
    let values = d.values();
    let mut a = CostedAutomaton::empty_language();
    let idle: Vec<usize> = values.iter().map(|_| a.add_state()).collect();
    let read_pending: Vec<usize> = values.iter().map(|_| a.add_state()).collect();
    let write_pending: Vec<usize> = values.iter().map(|_| a.add_state()).collect();
    let start = values.iter().position(|x| *x == v).expect("initial value in range");
    for (i, val) in values.iter().enumerate() {
        a.set_accepting(idle[i], true);
        a.add_edge(idle[i], Some(Letter::mv(MoveKind::Read)), read_pending[i]);
        a.add_edge(read_pending[i], Some(Letter::mv(MoveKind::Answer(*val))), idle[i]);
        for (j, w) in values.iter().enumerate() {
            a.add_edge(idle[i], Some(Letter::mv(MoveKind::Write(*w))), write_pending[j]);
        }
        a.add_edge(write_pending[i], Some(Letter::mv(MoveKind::Ok)), idle[i]);
    }
    a.set_initial(idle[start]);
    a.with_alphabet(arena(&Type::Var(d), &[])).trim()
}
