//! Parsing, type checking and normalization of IA₂ terms.

mod ast;
mod normalize;
mod parser;
mod pretty;
mod typing;

use thiserror::Error;

pub use ast::{BinOp, DataType, Ident, Term, Type, TypedTerm, UnOp};
pub use normalize::{beta_normal, fresh_name, is_normal, normalize, substitute};
pub use parser::{parse_program, parse_type, Pos};
pub use pretty::{print_term, print_typed};
pub use typing::{element_name, renumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("parse error at {pos}: {message}")]
    Parse { pos: Pos, message: String },
    #[error("type error at {pos}: expected {expected}, found {actual}")]
    Type { pos: Pos, expected: String, actual: String },
    #[error("security annotation error: {0}")]
    SecurityAnnotation(String),
}

/// Parses and type checks an input file.
pub fn parse_and_typecheck(text: &str) -> Result<TypedTerm, FrontendError> {
    typing::elaborate(&parse_program(text)?)
}

impl TypedTerm {
    /// The single high variable a timing check is about.
    pub fn single_high(&self) -> Result<(crate::automaton::Name, DataType), FrontendError> {
        match self.high.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(FrontendError::SecurityAnnotation("no high variable declared".into())),
            _ => Err(FrontendError::SecurityAnnotation(format!("{} high variables declared, expected one", self.high.len()))),
        }
    }
}

/// α-equivalence of terms: equal up to the names of bound variables.
pub fn alpha_equivalent(a: &Term, b: &Term) -> bool {
    alpha(a, b, &mut Vec::new())
}

fn alpha(a: &Term, b: &Term, env: &mut Vec<(crate::automaton::Name, crate::automaton::Name)>) -> bool {
    let same_var = |x: &Ident, y: &Ident, env: &Vec<(crate::automaton::Name, crate::automaton::Name)>| {
        match env.iter().rev().find(|(l, r)| *l == x.name || *r == y.name) {
            Some((l, r)) => *l == x.name && *r == y.name,
            None => x == y,
        }
    };
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => same_var(x, y, env),
        (Term::Index { elems: ea, index: ia }, Term::Index { elems: eb, index: ib }) => {
            ea.len() == eb.len() && ea.iter().zip(eb).all(|(x, y)| same_var(x, y, env)) && alpha(ia, ib, env)
        }
        (Term::New { var: va, ty: ta, init: ia, body: ba }, Term::New { var: vb, ty: tb, init: ib, body: bb }) => {
            if ta != tb || !alpha(ia, ib, env) {
                return false;
            }
            env.push((va.clone(), vb.clone()));
            let ok = alpha(ba, bb, env);
            env.pop();
            ok
        }
        (Term::Lam { param: pa, ty: ta, body: ba }, Term::Lam { param: pb, ty: tb, body: bb }) => {
            if ta != tb {
                return false;
            }
            env.push((pa.clone(), pb.clone()));
            let ok = alpha(ba, bb, env);
            env.pop();
            ok
        }
        (Term::Const(..) | Term::Skip | Term::SkipHash | Term::Diverge, _) => a == b,
        (Term::BinOp(o1, ..), Term::BinOp(o2, ..)) if o1 != o2 => false,
        (Term::Tick { apps: x, .. }, Term::Tick { apps: y, .. }) if x != y => false,
        _ => {
            std::mem::discriminant(a) == std::mem::discriminant(b) && {
                let (ca, cb) = (a.children(), b.children());
                ca.len() == cb.len() && ca.into_iter().zip(cb).all(|(x, y)| alpha(x, y, env))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_context_split() {
        let t = parse_and_typecheck("high h:varint2 |- if !h>0 then h:=!h+1 else skip : com").unwrap();
        assert_eq!(t.high, vec![("h".into(), DataType::Int(2))]);
        assert!(t.delta.is_empty());
        assert_eq!(t.result, Type::Com);
    }

    #[test]
    fn closed_skip() {
        let t = parse_and_typecheck("skip : com").unwrap();
        assert!(t.high.is_empty() && t.delta.is_empty() && t.low.is_none());
        assert_eq!(t.term, Term::Skip);
    }

    #[test]
    fn function_in_delta() {
        let t = parse_and_typecheck("high h:varint2 | f:expint2->com |- f(!h) : com").unwrap();
        assert_eq!(t.delta, vec![("f".into(), Type::Fun(vec![Type::Exp(DataType::Int(2))], Box::new(Type::Com)))]);
        assert_eq!(t.occurrences["f"], vec![1]);
    }

    #[test]
    fn contraction_numbers_occurrences() {
        let t = parse_and_typecheck("given c : com |- c; c; c : com").unwrap();
        assert_eq!(t.occurrences["c"], vec![1, 2, 3]);
        let occs: Vec<u32> = t.term.occurrences().iter().map(|i| i.occ).collect();
        assert_eq!(occs, vec![1, 2, 3]);
    }

    #[test]
    fn type_errors() {
        let err = parse_and_typecheck("high h:varint2 |- h := tt : com").unwrap_err();
        assert!(matches!(err, FrontendError::Type { .. }), "{err}");
        assert!(matches!(parse_and_typecheck("|- y := 1 : com"), Err(FrontendError::Type { .. })));
        // literal 3 needs int4
        assert!(parse_and_typecheck("high h:varint2 |- h := 3 : com").is_err());
        assert!(parse_and_typecheck("high h:varint4 |- h := 3 : com").is_ok());
    }

    #[test]
    fn arrays_desugar_to_distinct_variables() {
        let t = parse_and_typecheck("high h:varint2; given x[2] : varint2 |- h := !x[1] : com").unwrap();
        assert_eq!(t.delta.len(), 2);
        assert_eq!(&*t.delta[1].0, "x[1]");
        let t = parse_and_typecheck(
            "high h:varint2 |- new a[2] : varint2 := 0 in new i : varint3 := 0 in a[!i] := !h : com",
        )
        .unwrap();
        assert!(t.term.occurrences().iter().any(|i| &*i.name == "a[1]"));
        assert!(parse_and_typecheck("high h:varint2 |- new a[2] : varint2 := 0 in a[2] := 1 : com").is_err());
    }

    #[test]
    fn missing_high_for_timing() {
        let t = parse_and_typecheck("skip : com").unwrap();
        assert!(matches!(t.single_high(), Err(FrontendError::SecurityAnnotation(_))));
    }

    #[test]
    fn round_trip_examples() {
        for src in [
            "high h:varint2 |- if !h>0 then h:=!h+1 else skip : com",
            "high h:varint2 | f:expint2->com |- f(!h) : com",
            "high h:varint2; given x[2] : varint2 |- new a[2] : varint2 := 0 in new i : varint3 := 0 in \
             while !i < 2 && not (!a[!i] = !h) do { a[!i] := !x[!i]; i := !i + 1 } : com",
            "|- (\\x:com. x; x) skip; new y : varbool := tt || ff in y := not !y : com",
            "given c : com; given e : expint3 |- (mkvar (\\v : expint3. c) e) := 2 * (e - 1) : com",
        ] {
            let t = parse_and_typecheck(src).unwrap();
            let printed = print_typed(&t);
            let back = parse_and_typecheck(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert!(alpha_equivalent(&t.term, &back.term), "{printed}");
            assert_eq!(t.delta, back.delta);
            assert_eq!(t.high, back.high);
        }
    }
}
