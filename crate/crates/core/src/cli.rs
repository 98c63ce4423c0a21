//! Command-line driver and the DOT / CSP exporters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::automaton::{worst_case_cost, CostedAutomaton, Letter, WorstCase};
use crate::frontend::{normalize, parse_and_typecheck, FrontendError};
use crate::gamesem::{denote, CostModel};
use crate::security::{build_tani_model, build_timing_model, Mode, SecurityError, Verdict};

pub const EXIT_SECURE: i32 = 0;
pub const EXIT_LEAK: i32 = 10;
pub const EXIT_POSSIBLE_LEAK: i32 = 11;
pub const EXIT_UNSAFE: i32 = 12;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TYPE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckTiming,
    CheckTani,
    WorstCost,
    EmitDot,
    EmitCsp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Over,
    Under,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "slotgame", version, about = "Timing-leak analysis with slot-game semantics")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    pub input: PathBuf,
    #[arg(long = "cost-model")]
    pub cost_model: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "under")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub csp: Option<PathBuf>,
}

pub fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Secure { .. } => EXIT_SECURE,
        Verdict::Leak(_) => EXIT_LEAK,
        Verdict::PossibleLeak(_) => EXIT_POSSIBLE_LEAK,
        Verdict::Unsafe(_) => EXIT_UNSAFE,
    }
}

struct Failure(i32, String);

impl From<FrontendError> for Failure {
    fn from(e: FrontendError) -> Self {
        let code = match e {
            FrontendError::Parse { .. } => EXIT_USAGE,
            FrontendError::Type { .. } | FrontendError::SecurityAnnotation(_) => EXIT_TYPE,
        };
        Failure(code, e.to_string())
    }
}

impl From<SecurityError> for Failure {
    fn from(e: SecurityError) -> Self {
        match e {
            SecurityError::Frontend(f) => f.into(),
            other => Failure(EXIT_USAGE, other.to_string()),
        }
    }
}

impl From<crate::gamesem::GamesemError> for Failure {
    fn from(e: crate::gamesem::GamesemError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn cost_model(cfg: &RunConfig) -> Result<CostModel, Failure> {
    match &cfg.cost_model {
        None => Ok(CostModel::default()),
        Some(p) => read(p)?.parse().map_err(|e: crate::gamesem::CostModelError| Failure(EXIT_USAGE, e.to_string())),
    }
}

fn describe(v: &Verdict, report: &mut String) {
    match v {
        Verdict::Secure { bound: Some(m) } => writeln!(report, "secure up to context bound m={m}").unwrap(),
        Verdict::Secure { bound: None } => writeln!(report, "secure").unwrap(),
        Verdict::Leak(c) | Verdict::PossibleLeak(c) | Verdict::Unsafe(c) => {
            let kind = match v {
                Verdict::Leak(_) => "timing leak",
                Verdict::PossibleLeak(_) => "possible timing leak (may be spurious)",
                _ => "unsafe: abort is reachable",
            };
            writeln!(report, "{kind}").unwrap();
            let segments: Vec<String> = c.segments.iter().map(u64::to_string).collect();
            writeln!(report, "segment costs: {}", segments.join(" | ")).unwrap();
            if let Some((a, b)) = c.high_values {
                writeln!(report, "initial high values: {a} and {b}").unwrap();
            }
        }
    }
}

/// Writes the optional DOT and CSP renderings of `model`.
fn exports(cfg: &RunConfig, model: &CostedAutomaton) -> Result<(), Failure> {
    if let Some(p) = &cfg.dot {
        write(p, &emit_dot(model))?;
    }
    if let Some(p) = &cfg.csp {
        match worst_case_cost(model) {
            WorstCase::Bounded(n) => write(p, &emit_csp(model, n))?,
            WorstCase::Unbounded => return Err(Failure(EXIT_INCONCLUSIVE, "cost is unbounded; no CSP property".into())),
        }
    }
    Ok(())
}

fn run(cfg: &RunConfig) -> Result<(i32, String), Failure> {
    let source = read(&cfg.input)?;
    let cm = cost_model(cfg)?;
    let t = parse_and_typecheck(&source)?;
    let mut report = String::new();
    let (code, output) = match cfg.command {
        Command::CheckTiming => {
            let mode = match cfg.mode {
                ModeArg::Over => Mode::Over,
                ModeArg::Under => Mode::Under(cfg.m),
            };
            let model = build_timing_model(&t, &cm, mode)?;
            let verdict = model.check()?;
            writeln!(report, "model: {} states, {:?}", model.automaton.state_count(), model.origin).unwrap();
            describe(&verdict, &mut report);
            writeln!(report, "{verdict}").unwrap();
            exports(cfg, &model.automaton)?;
            (exit_code(&verdict), report)
        }
        Command::CheckTani => {
            let model = build_tani_model(&t, &cm)?;
            let verdict = model.check()?;
            describe(&verdict, &mut report);
            writeln!(report, "{verdict}").unwrap();
            exports(cfg, &model.automaton)?;
            (exit_code(&verdict), report)
        }
        Command::WorstCost => {
            let model = denote(&normalize(&t), &cm)?;
            exports(cfg, &model)?;
            match worst_case_cost(&model) {
                WorstCase::Bounded(n) => (EXIT_SECURE, format!("{n}\n")),
                WorstCase::Unbounded => (EXIT_INCONCLUSIVE, "unbounded\n".to_string()),
            }
        }
        Command::EmitDot => (EXIT_SECURE, emit_dot(&denote(&normalize(&t), &cm)?)),
        Command::EmitCsp => {
            let model = denote(&normalize(&t), &cm)?;
            match worst_case_cost(&model) {
                WorstCase::Bounded(n) => (EXIT_SECURE, emit_csp(&model, n)),
                WorstCase::Unbounded => return Err(Failure(EXIT_INCONCLUSIVE, "cost is unbounded; no CSP property".into())),
            }
        }
    };
    match &cfg.out {
        Some(p) => {
            write(p, &output)?;
            Ok((code, format!("wrote {}\n", p.display())))
        }
        None => Ok((code, output)),
    }
}

/// Runs the tool on an argument vector (program name first) and returns the
/// exit code with everything that should be printed.
pub fn run_cli<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SECURE };
            return (code, e.to_string());
        }
    };
    match run(&cfg) {
        Ok(done) => done,
        Err(Failure(code, message)) => (code, format!("error: {message}\n")),
    }
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Useful states: the trimmed automaton, always keeping the initial state.
fn useful(r: &CostedAutomaton) -> CostedAutomaton {
    let t = r.trim();
    if t.state_count() == 0 {
        CostedAutomaton::empty_language()
    } else {
        t
    }
}

pub fn emit_dot(r: &CostedAutomaton) -> String {
    let r = useful(r);
    let mut out = String::from("digraph model {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..r.state_count() {
        let mut attrs = Vec::new();
        if r.is_accepting(s) {
            attrs.push("shape=doublecircle".to_string());
        }
        if s == r.initial() {
            attrs.push("style=bold".to_string());
            attrs.push("initial=true".to_string());
        }
        writeln!(out, "  s{s} [{}];", attrs.join(", ")).unwrap();
    }
    for s in 0..r.state_count() {
        for e in r.edges_from(s) {
            let label = e.label.as_ref().map_or("ε".to_string(), ToString::to_string);
            writeln!(out, "  s{s} -> s{} [label=\"{}\"];", e.target, escape(&label)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// CSPM event name of a letter.
pub fn csp_event(l: &Letter) -> String {
    match l {
        Letter::Token => "tok".into(),
        Letter::Delim => "hash".into(),
        Letter::Move(_) => {
            let raw = l.to_string();
            let mut name: String = raw.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
            if !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
                name.insert(0, 'v');
            }
            // distinct renderings must stay distinct after flattening
            if name != raw {
                let digest = raw.bytes().fold(0u32, |h, b| h.wrapping_mul(31).wrapping_add(u32::from(b)));
                name = format!("{name}_{digest:x}");
            }
            name
        }
    }
}

/// CSPM script: one process per state, the balance property for worst-case
/// cost `n` and a traces-refinement assertion.
pub fn emit_csp(r: &CostedAutomaton, n: u64) -> String {
    let r = useful(r).remove_epsilon();
    let r = useful(&r);
    let mut events: BTreeMap<String, bool> = BTreeMap::new();
    events.insert("tok".into(), false);
    events.insert("hash".into(), false);
    for l in r.alphabet() {
        events.insert(csp_event(l), l.is_move());
    }
    let mut out = String::from("-- slot-game model\n");
    let names: Vec<&str> = events.keys().map(String::as_str).collect();
    writeln!(out, "channel {}", names.join(", ")).unwrap();
    let moves: Vec<&str> = events.iter().filter(|(_, m)| **m).map(|(k, _)| k.as_str()).collect();
    writeln!(out, "MOVES = {{{}}}", moves.join(", ")).unwrap();
    out.push('\n');
    for s in 0..r.state_count() {
        let mut branches: Vec<String> = r
            .edges_from(s)
            .iter()
            .filter_map(|e| e.label.as_ref().map(|l| format!("{} -> P{}", csp_event(l), e.target)))
            .collect();
        if r.is_accepting(s) {
            branches.push("SKIP".into());
        }
        let body = if branches.is_empty() { "STOP".to_string() } else { branches.join(" [] ") };
        writeln!(out, "P{s} = {body}").unwrap();
    }
    writeln!(out, "\nMODEL = P{} \\ MOVES", r.initial()).unwrap();
    out.push_str("\nTOKS(0, P) = P\nTOKS(i, P) = tok -> TOKS(i - 1, P)\n");
    writeln!(out, "PROP = [] i : {{0..{n}}} @ TOKS(i, hash -> TOKS(i, SKIP))").unwrap();
    out.push_str("\nassert PROP [T= MODEL\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::letter::parse_word;

    fn lit(text: &str) -> CostedAutomaton {
        CostedAutomaton::word(parse_word(text).unwrap()).minimize()
    }

    #[test]
    fn dot_of_run_done() {
        let dot = emit_dot(&lit("run done"));
        assert_eq!(dot.matches("->").count(), 2);
        assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('s') && !l.contains("->")).count(), 3);
        assert_eq!(dot.matches("doublecircle").count(), 1);
    }

    #[test]
    fn dot_of_empty_language() {
        let dot = emit_dot(&CostedAutomaton::empty_language());
        assert!(dot.contains("s0 [style=bold, initial=true]"));
        assert!(!dot.contains("doublecircle") && !dot.contains("->"));
    }

    #[test]
    fn csp_has_one_process_per_state() {
        let m = lit("run $ # $ done");
        let csp = emit_csp(&m, 1);
        assert_eq!(csp.lines().filter(|l| l.starts_with('P') && l[1..].starts_with(|c: char| c.is_ascii_digit())).count(), m.trim().state_count());
        assert!(csp.contains("PROP = [] i : {0..1} @ TOKS(i, hash -> TOKS(i, SKIP))"));
        assert!(csp.contains("assert PROP [T= MODEL"));
    }

    #[test]
    fn csp_event_names_are_identifiers() {
        for text in ["q@f.1", "0@k", "write(1)@x[0]", "run"] {
            let l = crate::automaton::letter::parse_letter(text).unwrap();
            let e = csp_event(&l);
            assert!(e.starts_with(|c: char| c.is_ascii_alphabetic()) && e.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'), "{e}");
        }
        assert_eq!(csp_event(&crate::automaton::letter::parse_letter("run").unwrap()), "run");
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run_cli(["slotgame"]).0, EXIT_USAGE);
        assert_eq!(run_cli(["slotgame", "check-timing", "/nonexistent.ia"]).0, EXIT_USAGE);
        assert_eq!(run_cli(["slotgame", "frobnicate", "x.ia"]).0, EXIT_USAGE);
    }
}
