//! Self-composition models for timing leaks and timing-aware
//! non-interference, and the checks run on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automaton::letter::render_word;
use crate::automaton::{
    balance_verdict, sync_product, AutomatonError, CostedAutomaton, Letter, MoveKind, Name, PhaseSpec, TagPart, Value,
};
use crate::frontend::{normalize, substitute, BinOp, DataType, FrontendError, Ident, Term, Type, TypedTerm, UnOp};
use crate::gamesem::{arena, denote, denote_tagged, questions, CostModel, GamesemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SecurityError {
    #[error("the closed model needs an empty function context")]
    ContextNotEmpty,
    #[error("unsupported context type {0}")]
    UnsupportedType(String),
    #[error("no low variable declared")]
    MissingLow,
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Gamesem(#[from] GamesemError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// How the context Δ is treated in an open model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Δ behaves independently in both copies.
    Over,
    /// Δ repeats its behaviour, with at most `m` argument evaluations per call.
    Under(u32),
}

/// Which construction a model came from; decides how an unbalanced word is
/// reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Closed,
    Over,
    /// Under-approximation that is exact for this term.
    UnderExact,
    UnderPartial { m: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub witness: Vec<Letter>,
    pub segments: Vec<u64>,
    pub cost_before: u64,
    pub cost_after: u64,
    /// Initial high values read in the two copies.
    pub high_values: Option<(Value, Value)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `bound` is set when security only holds up to the context bound m.
    Secure { bound: Option<u32> },
    Leak(Counterexample),
    PossibleLeak(Counterexample),
    Unsafe(Counterexample),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Secure { .. } => "SECURE",
            Verdict::Leak(_) => "LEAK",
            Verdict::PossibleLeak(_) => "POSSIBLE_LEAK",
            Verdict::Unsafe(_) => "UNSAFE",
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Secure { .. } => None,
            Verdict::Leak(c) | Verdict::PossibleLeak(c) | Verdict::Unsafe(c) => Some(c),
        }
    }
}

/// The single-line machine-readable record.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (before, after, witness) = match self.counterexample() {
            Some(c) => (c.cost_before, c.cost_after, render_word(&c.witness)),
            None => (0, 0, String::new()),
        };
        write!(f, "verdict={} cost_before={before} cost_after={after} witness={witness}", self.label())
    }
}

/// A self-composed model together with what is needed to interpret it.
#[derive(Clone, Debug)]
pub struct TimingModel {
    pub automaton: CostedAutomaton,
    pub origin: Origin,
    /// The identifier supplying the initial high values.
    pub key: Name,
    /// The self-composed term the automaton denotes.
    pub term: TypedTerm,
}

impl TimingModel {
    pub fn check(&self) -> Result<Verdict, SecurityError> {
        check_timing(&self.automaton, self.origin, Some(&self.key))
    }
}

#[derive(Clone, Debug)]
pub struct TaniModel {
    pub automaton: CostedAutomaton,
    pub abort: Name,
    pub high_key: Name,
    pub term: TypedTerm,
}

impl TaniModel {
    pub fn check(&self) -> Result<Verdict, SecurityError> {
        check_tani_with(&self.automaton, &self.abort, Some(&self.high_key))
    }
}

/// `x'`, or `a'[j]` for array elements, not clashing with `taken`.
fn primed(name: &str, taken: &BTreeSet<Name>) -> Name {
    let (base, suffix) = match name.find('[') {
        Some(i) => name.split_at(i),
        None => (name, ""),
    };
    let mut primes = String::from("'");
    loop {
        let candidate = Name::from(format!("{base}{primes}{suffix}"));
        if !taken.contains(&candidate) {
            return candidate;
        }
        primes.push('\'');
    }
}

fn boxed(t: Term) -> Box<Term> {
    Box::new(t)
}

/// Refreshes every bound name with a primed one.
fn prime_bound(t: &Term, taken: &mut BTreeSet<Name>) -> Term {
    let mut go = |s: &Term| boxed(prime_bound(s, taken));
    match t {
        Term::New { var, ty, init, body } => {
            let init = go(init);
            let fresh = primed(var, taken);
            taken.insert(fresh.clone());
            let body = substitute(body, var, &Term::var(&fresh));
            Term::New { var: fresh, ty: *ty, init, body: boxed(prime_bound(&body, taken)) }
        }
        Term::Lam { param, ty, body } => {
            let fresh = primed(param, taken);
            taken.insert(fresh.clone());
            let body = substitute(body, param, &Term::var(&fresh));
            Term::Lam { param: fresh, ty: ty.clone(), body: boxed(prime_bound(&body, taken)) }
        }
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
        Term::App(a, b) => Term::App(go(a), go(b)),
        Term::Tick { apps, body } => Term::Tick { apps: *apps, body: go(body) },
    }
}

/// Substitutes variables by variables, keeping occurrence numbers of the
/// remaining identifiers intact.
fn rename_free(t: &Term, renames: &[(Name, Name)]) -> Term {
    renames.iter().fold(t.clone(), |acc, (from, to)| substitute(&acc, from, &Term::var(to)))
}

/// The α-copy `M'`: globals renamed by `renames`, bound names primed.
pub fn alpha_copy(t: &Term, renames: &[(Name, Name)], taken: &mut BTreeSet<Name>) -> Term {
    prime_bound(&rename_free(t, renames), taken)
}

fn fresh_global(base: &str, taken: &mut BTreeSet<Name>) -> Name {
    let name = if taken.contains(base) { crate::frontend::fresh_name(base, taken) } else { Name::from(base) };
    taken.insert(name.clone());
    name
}

fn occurrence(name: &Name, occ: u32) -> Term {
    Term::Var(Ident { name: name.clone(), occ })
}

fn new_from(var: &Name, d: DataType, init: Term, body: Term) -> Term {
    Term::New { var: var.clone(), ty: d, init: boxed(init), body: boxed(body) }
}

/// `k ⊢ new h := k in M ; skip# ; new h' := k in M'` over a normalized `t`.
/// Occurrence numbers of Δ identifiers are shared between `M` and `M'`.
pub fn self_composition(t: &TypedTerm) -> Result<(TypedTerm, Name), SecurityError> {
    let t = normalize(t);
    let (h, d) = t.single_high()?;
    let mut taken = t.term.all_names();
    taken.extend(t.var_context().into_iter().map(|(n, _)| n));
    taken.extend(t.delta.iter().map(|(n, _)| n.clone()));
    let key = fresh_global("k", &mut taken);
    let h2 = primed(&h, &taken);
    taken.insert(h2.clone());
    let copy = alpha_copy(&t.term, &[(h.clone(), h2.clone())], &mut taken);
    let term = Term::seq(
        new_from(&h, d, occurrence(&key, 1), t.term.clone()),
        Term::seq(Term::SkipHash, new_from(&h2, d, occurrence(&key, 2), copy)),
    );
    let mut delta = vec![(key.clone(), Type::Exp(d))];
    delta.extend(t.delta.iter().cloned());
    let mut occurrences = t.occurrences.clone();
    occurrences.insert(key.clone(), vec![1, 2]);
    let composed = TypedTerm { term, high: vec![], low: t.low.clone(), delta, result: Type::Com, occurrences };
    Ok((composed, key))
}

/// The self-composed model of a semi-closed term.
pub fn build_timing_model_closed(t: &TypedTerm, cm: &CostModel) -> Result<TimingModel, SecurityError> {
    if !t.delta.is_empty() {
        return Err(SecurityError::ContextNotEmpty);
    }
    let (term, key) = self_composition(t)?;
    let automaton = denote(&term, cm)?;
    Ok(TimingModel { automaton, origin: Origin::Closed, key, term })
}

fn require_first_order(t: &TypedTerm) -> Result<(), SecurityError> {
    for (name, ty) in &t.delta {
        let (args, res) = ty.arguments();
        if !res.is_base() || args.iter().any(|a| !a.is_base()) {
            return Err(SecurityError::UnsupportedType(format!("{name} : {ty}")));
        }
    }
    Ok(())
}

/// Open-term model; for `Under(m)` each occurrence of a Δ identifier is
/// forced to repeat its first behaviour in the second copy.
pub fn build_timing_model_open(t: &TypedTerm, cm: &CostModel, mode: Mode) -> Result<TimingModel, SecurityError> {
    require_first_order(t)?;
    let (term, key) = self_composition(t)?;
    match mode {
        Mode::Over => {
            let automaton = denote(&term, cm)?;
            Ok(TimingModel { automaton, origin: Origin::Over, key, term })
        }
        Mode::Under(m) => {
            let mut model = denote_tagged(&term, cm)?;
            for (x, ty) in &t.delta {
                let d = delta(ty, m)?;
                for &occ in term.occurrences.get(x).map(Vec::as_slice).unwrap_or(&[]) {
                    let head = TagPart::occurrence(x.clone(), occ);
                    let constraint = d.tag_all(std::slice::from_ref(&head));
                    let mine = |l: &Letter| l.tag().and_then(|t| t.parts().first()) == Some(&head);
                    model = sync_product(&model, &constraint, mine).minimize();
                }
            }
            let exact = m == 0 && t.delta.iter().all(|(x, ty)| ty.is_base() && !t.term.occurs_in_while(x));
            let origin = if exact { Origin::UnderExact } else { Origin::UnderPartial { m } };
            Ok(TimingModel { automaton: model.detag().minimize(), origin, key, term })
        }
    }
}

/// Closed model when Δ is empty, otherwise the open model in `mode`.
pub fn build_timing_model(t: &TypedTerm, cm: &CostModel, mode: Mode) -> Result<TimingModel, SecurityError> {
    if t.delta.is_empty() {
        build_timing_model_closed(t, cm)
    } else {
        build_timing_model_open(t, cm, mode)
    }
}

fn word(letters: impl IntoIterator<Item = Letter>) -> CostedAutomaton {
    CostedAutomaton::word(letters)
}

/// All sequences of at most `m` items.
fn sequences<T: Clone>(items: &[T], m: u32) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..m {
        layer = layer
            .iter()
            .flat_map(|s: &Vec<T>| {
                items.iter().map(move |i| {
                    let mut s = s.clone();
                    s.push(i.clone());
                    s
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// No call, or one behaviour of an identifier of type `ty` optionally
/// repeated with the same question, the same order of argument questions
/// and the same answer. Argument answers are unconstrained; base types
/// allow no argument questions whatever `m` is.
pub fn delta(ty: &Type, m: u32) -> Result<CostedAutomaton, SecurityError> {
    let (args, res) = ty.arguments();
    if !res.is_base() || args.iter().any(|a| !a.is_base()) {
        return Err(SecurityError::UnsupportedType(ty.to_string()));
    }
    let mut interrogations = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let tag = [TagPart::Arg(i as u32 + 1)];
        for (q, answers) in questions(a) {
            let answered = CostedAutomaton::union_all(&answers.iter().map(|&ans| word([arena_move(ans, &tag)])).collect::<Vec<_>>());
            interrogations.push(word([arena_move(q, &tag)]).concat(&answered));
        }
    }
    let shapes = sequences(&(0..interrogations.len()).collect::<Vec<_>>(), if args.is_empty() { 0 } else { m });
    let mut parts = Vec::new();
    for (q, answers) in questions(res) {
        for shape in &shapes {
            let middle = CostedAutomaton::concat_all(&shape.iter().map(|&i| interrogations[i].clone()).collect::<Vec<_>>());
            for &a in &answers {
                let call = word([Letter::mv(q)]).concat(&middle).concat(&word([Letter::mv(a)]));
                parts.push(call.concat(&call.optional()));
            }
        }
    }
    parts.push(CostedAutomaton::epsilon());
    Ok(CostedAutomaton::union_all(&parts).with_alphabet(arena(ty, &[])).minimize())
}

fn arena_move(kind: MoveKind, tag: &[TagPart]) -> Letter {
    Letter::tagged(kind, crate::automaton::Tag::new(tag.to_vec()))
}

/// Accepts the words in which the first two answers of `key` differ.
fn distinct_answers(alphabet: &BTreeSet<Letter>, key: &str) -> CostedAutomaton {
    let mut a = CostedAutomaton::empty_language();
    let answers: Vec<Letter> = alphabet
        .iter()
        .filter(|l| l.belongs_to(key) && matches!(l.as_move().map(|m| m.kind), Some(MoveKind::Answer(_))))
        .cloned()
        .collect();
    let start = a.add_state();
    let done = a.add_state();
    let after: Vec<usize> = answers.iter().map(|_| a.add_state()).collect();
    a.set_initial(start);
    a.set_accepting(done, true);
    for l in alphabet.iter().filter(|l| !answers.contains(l)) {
        a.add_edge(start, Some(l.clone()), start);
        for &s in &after {
            a.add_edge(s, Some(l.clone()), s);
        }
    }
    for l in alphabet {
        a.add_edge(done, Some(l.clone()), done);
    }
    for (i, first) in answers.iter().enumerate() {
        a.add_edge(start, Some(first.clone()), after[i]);
        for second in answers.iter().filter(|s| *s != first) {
            a.add_edge(after[i], Some(second.clone()), done);
        }
    }
    a.with_alphabet(alphabet.iter().cloned())
}

fn key_values(word: &[Letter], key: &str) -> Option<(Value, Value)> {
    let mut values = word.iter().filter(|l| l.belongs_to(key)).filter_map(|l| match l.as_move()?.kind {
        MoveKind::Answer(v) => Some(v),
        _ => None,
    });
    Some((values.next()?, values.next()?))
}

fn counterexample(word: Vec<Letter>, segments: Vec<usize>, pair: (usize, usize), key: Option<&str>) -> Counterexample {
    let segments: Vec<u64> = segments.into_iter().map(|n| n as u64).collect();
    Counterexample {
        high_values: key.and_then(|k| key_values(&word, k)),
        cost_before: segments.get(pair.0).copied().unwrap_or(0),
        cost_after: segments.get(pair.1).copied().unwrap_or(0),
        segments,
        witness: word,
    }
}

/// Unbalanced witness of `model`, preferring one where the two copies
/// start from different values of `key`.
fn unbalanced_witness(model: &CostedAutomaton, spec: &PhaseSpec, key: Option<&str>) -> Result<Option<crate::automaton::Witness>, SecurityError> {
    let report = balance_verdict(model, spec)?;
    if report.balanced {
        return Ok(None);
    }
    if let Some(k) = key {
        let restricted = model.intersect(&distinct_answers(model.alphabet(), k));
        if let Some(w) = balance_verdict(&restricted, spec)?.witness {
            return Ok(Some(w));
        }
    }
    Ok(report.witness)
}

/// Balance check of a two-copy model; `key` names the identifier whose
/// answers are reported as the initial high values.
pub fn check_timing(model: &CostedAutomaton, origin: Origin, key: Option<&str>) -> Result<Verdict, SecurityError> {
    match unbalanced_witness(model, &PhaseSpec::two_halves(), key)? {
        None => Ok(Verdict::Secure { bound: if let Origin::UnderPartial { m } = origin { Some(m) } else { None } }),
        Some(w) => {
            let c = counterexample(w.word, w.segment_tokens, (0, 1), key);
            Ok(match origin {
                Origin::Over => Verdict::PossibleLeak(c),
                Origin::Closed | Origin::UnderExact | Origin::UnderPartial { .. } => Verdict::Leak(c),
            })
        }
    }
}

/// Non-interference model: both copies share the low input, the high
/// inputs are independent, and `abort` runs if the low outputs differ.
pub fn build_tani_model(t: &TypedTerm, cm: &CostModel) -> Result<TaniModel, SecurityError> {
    if !t.delta.is_empty() {
        return Err(SecurityError::ContextNotEmpty);
    }
    let t = normalize(t);
    let (h, dh) = t.single_high()?;
    let (l, dl) = t.low.clone().ok_or(SecurityError::MissingLow)?;
    let mut taken = t.term.all_names();
    taken.insert(h.clone());
    taken.insert(l.clone());
    let low_key = fresh_global("k", &mut taken);
    let high_key = fresh_global("k'", &mut taken);
    let abort = fresh_global("abort", &mut taken);
    let l2 = primed(&l, &taken);
    taken.insert(l2.clone());
    let h2 = primed(&h, &taken);
    taken.insert(h2.clone());
    let copy = alpha_copy(&t.term, &[(l.clone(), l2.clone()), (h.clone(), h2.clone())], &mut taken);
    let differ = Term::UnOp(UnOp::Not, boxed(Term::binop(BinOp::Eq, Term::deref(Term::var(&l)), Term::deref(Term::var(&l2)))));
    let tail = Term::if_(differ, Term::var(&abort), Term::Skip);
    let body = [Term::SkipHash, t.term.clone(), Term::SkipHash, copy, Term::SkipHash]
        .into_iter()
        .rev()
        .fold(tail, |acc, part| Term::seq(part, acc));
    let term = new_from(
        &l,
        dl,
        Term::var(&low_key),
        new_from(
            &h,
            dh,
            occurrence(&high_key, 1),
            new_from(&l2, dl, Term::deref(Term::var(&l)), new_from(&h2, dh, occurrence(&high_key, 2), body)),
        ),
    );
    let delta = vec![(low_key, Type::Exp(dl)), (high_key.clone(), Type::Exp(dh)), (abort.clone(), Type::Com)];
    let composed = TypedTerm { term, high: vec![], low: None, delta, result: Type::Com, occurrences: BTreeMap::new() };
    let automaton = denote(&composed, cm)?;
    Ok(TaniModel { automaton, abort, high_key, term: composed })
}

/// Non-interference check over a model with abort identifier `abort`.
pub fn check_tani(model: &CostedAutomaton) -> Result<Verdict, SecurityError> {
    check_tani_with(model, "abort", None)
}

pub fn check_tani_with(model: &CostedAutomaton, abort: &str, key: Option<&str>) -> Result<Verdict, SecurityError> {
    let unsafe_letters: Vec<Letter> = model.alphabet().iter().filter(|l| l.belongs_to(abort)).cloned().collect();
    if !unsafe_letters.is_empty() {
        let marker = unsafe_letters.iter().fold(CostedAutomaton::empty_language(), |acc, l| acc.union(&word([l.clone()])));
        let anything = CostedAutomaton::any_of(model.alphabet().iter().cloned()).star();
        let containing = anything.concat(&marker).concat(&anything);
        if let Some(w) = model.intersect(&containing).shortest_word() {
            let segments = crate::automaton::segment_tokens(&w);
            return Ok(Verdict::Unsafe(counterexample(w, segments, (1, 2), key)));
        }
    }
    match unbalanced_witness(model, &PhaseSpec::middle_pair(), key)? {
        None => Ok(Verdict::Secure { bound: None }),
        Some(w) => Ok(Verdict::Leak(counterexample(w.word, w.segment_tokens, (1, 2), key))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::letter::parse_word;
    use crate::frontend::parse_and_typecheck;

    fn w(text: &str) -> Vec<Letter> {
        parse_word(text).unwrap()
    }

    fn lit(text: &str) -> CostedAutomaton {
        CostedAutomaton::word(w(text))
    }

    fn typed(src: &str) -> TypedTerm {
        parse_and_typecheck(src).unwrap()
    }

    #[test]
    fn delta_base_types() {
        let com = delta(&Type::Com, 0).unwrap();
        assert!(com.language_equal(&lit("run done").concat(&lit("run done").optional()).optional()));
        let exp = delta(&Type::Exp(DataType::Int(2)), 0).unwrap();
        assert!(exp.accepts(&w("q 1 q 1")) && exp.accepts(&w("q 1")));
        assert!(!exp.accepts(&w("q 1 q 0")));
        let var = delta(&Type::Var(DataType::Int(2)), 3).unwrap();
        assert!(var.accepts(&w("write(1) ok write(1) ok")) && var.accepts(&w("read 0 read 0")));
        assert!(!var.accepts(&w("read 0 write(0) ok")));
    }

    #[test]
    fn delta_command_function() {
        let t = Type::Fun(vec![Type::Com], Box::new(Type::Com));
        let got = delta(&t, 1).unwrap();
        let call = |r: bool| if r { lit("run run@1 done@1 done") } else { lit("run done") };
        let want = call(false).concat(&call(false).optional()).union(&call(true).concat(&call(true).optional())).optional();
        assert!(got.language_equal(&want));
    }

    #[test]
    fn self_composition_of_skip() {
        let cm = CostModel::default();
        let m = build_timing_model_closed(&typed("high h:varint2 |- skip : com"), &cm).unwrap();
        let half = |v: &str| format!("$ q@k {v}@k");
        let mut want = CostedAutomaton::empty_language();
        for a in ["0", "1"] {
            for b in ["0", "1"] {
                want = want.union(&lit(&format!("run {} $ # $ {} done", half(a), half(b))));
            }
        }
        assert!(m.automaton.language_equal(&want));
        assert_eq!(m.check().unwrap(), Verdict::Secure { bound: None });
    }

    #[test]
    fn diverging_term_has_empty_model() {
        let m = build_timing_model_closed(&typed("high h:varint2 |- diverge : com"), &CostModel::default()).unwrap();
        assert!(m.automaton.is_empty());
    }

    #[test]
    fn closed_builder_rejects_open_terms() {
        let t = typed("high h:varint2; given c : com |- c : com");
        assert_eq!(build_timing_model_closed(&t, &CostModel::default()).unwrap_err(), SecurityError::ContextNotEmpty);
    }

    #[test]
    fn alpha_copy_primes_bound_names() {
        let t = typed("high h:varint2 |- new x : varint2 := 0 in h := !x : com");
        let mut taken = t.term.all_names();
        let copy = alpha_copy(&t.term, &[("h".into(), "h'".into())], &mut taken);
        let Term::New { var, body, .. } = &copy else { panic!("new expected") };
        assert_eq!(&**var, "x'");
        assert!(body.free_names().contains("h'"));
        assert!(crate::frontend::alpha_equivalent(&copy, &rename_free(&t.term, &[("h".into(), "h'".into())])));
    }

    #[test]
    fn tani_explicit_flow_is_unsafe() {
        let t = typed("high h:varint2; low l:varint2 |- l := !h : com");
        let v = build_tani_model(&t, &CostModel::default()).unwrap().check().unwrap();
        let Verdict::Unsafe(c) = v else { panic!("expected unsafe, got {v}") };
        assert!(c.witness.iter().any(|l| l.belongs_to("abort")));
    }

    #[test]
    fn tani_constant_write_is_secure() {
        let t = typed("high h:varint2; low l:varint2 |- l := 0 : com");
        assert_eq!(build_tani_model(&t, &CostModel::default()).unwrap().check().unwrap(), Verdict::Secure { bound: None });
    }

    #[test]
    fn verdict_line_format() {
        let c = Counterexample { witness: w("run $ # done"), segments: vec![1, 0], cost_before: 1, cost_after: 0, high_values: None };
        assert_eq!(Verdict::Leak(c).to_string(), "verdict=LEAK cost_before=1 cost_after=0 witness=run.$.#.done");
        assert_eq!(Verdict::Secure { bound: None }.to_string(), "verdict=SECURE cost_before=0 cost_after=0 witness=");
    }
}
