//! Lexer and recursive-descent parser producing the position-annotated
//! surface tree that elaboration turns into a [`Term`](super::Term).

use std::fmt;

use super::ast::{BinOp, DataType, Type};
use super::FrontendError;
use crate::automaton::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// longest first, so that prefixes are tried last
const SYMBOLS: [&str; 22] = [
    "|-", ":=", "->", "&&", "||", ":", ";", "(", ")", "{", "}", "[", "]", "\\", ".", "+", "-", "*", "=", "<", ">",
    "!",
];
const BAR: &str = "|";

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, FrontendError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| FrontendError::Parse { pos, message: format!("integer literal {digits} too large") })?;
            out.push((Tok::Int(n), pos));
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS.iter().find(|s| rest.starts_with(**s)).copied().or((c == '|').then_some(BAR));
            match sym {
                Some(s) => {
                    out.push((Tok::Sym(s), pos));
                    advance(&mut i, &mut line, &mut col, s.len());
                }
                None => {
                    return Err(FrontendError::Parse { pos, message: format!("unexpected character `{c}`") });
                }
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    High,
    Low,
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub pos: Pos,
    pub class: Class,
    pub name: Name,
    pub size: Option<u32>,
    pub ty: Type,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub pos: Pos,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Ident(Name),
    Index(Name, Box<Node>),
    Int(u32),
    Bool(bool),
    Skip,
    Diverge,
    Bin(BinOp, Box<Node>, Box<Node>),
    Not(Box<Node>),
    Deref(Box<Node>),
    Seq(Box<Node>, Box<Node>),
    If(Box<Node>, Box<Node>, Option<Box<Node>>),
    While(Box<Node>, Box<Node>),
    Assign(Box<Node>, Box<Node>),
    New { name: Name, size: Option<u32>, ty: DataType, init: Option<Box<Node>>, body: Box<Node> },
    Mkvar(Box<Node>, Box<Node>),
    Lam { name: Name, ty: Type, body: Box<Node> },
    App(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub term: Node,
    pub ty: Type,
    pub ty_pos: Pos,
}

const KEYWORDS: [&str; 17] = [
    "skip", "diverge", "tt", "ff", "if", "then", "else", "while", "do", "new", "in", "mkvar", "not", "high", "low",
    "given", "com",
];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(FrontendError::Parse { pos: self.pos(), message: format!("expected {expected}, found {}", self.peek()) })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let yes = self.is_sym(s);
        if yes {
            self.bump();
        }
        yes
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        let yes = self.is_kw(k);
        if yes {
            self.bump();
        }
        yes
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.error(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s.into())
            }
            _ => self.error("identifier"),
        }
    }

    fn int(&mut self) -> PResult<u32> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error("integer"),
        }
    }

    /// `expint2`, `expint<2>`, `varint 2` are all accepted.
    fn sized(&mut self, word: &str, prefix: &str) -> PResult<Option<u32>> {
        let Some(rest) = word.strip_prefix(prefix) else { return Ok(None) };
        let pos = self.pos();
        let n = if rest.is_empty() {
            self.bump();
            let angle = self.eat_sym("<");
            let n = self.int()?;
            if angle {
                self.expect_sym(">")?;
            }
            n
        } else {
            let n = rest.parse().map_err(|_| FrontendError::Parse { pos, message: format!("bad type `{word}`") })?;
            self.bump();
            n
        };
        if n == 0 {
            return Err(FrontendError::Parse { pos, message: "int types need at least one value".into() });
        }
        Ok(Some(n))
    }

    fn base_type(&mut self) -> PResult<Type> {
        if self.eat_sym("(") {
            let t = self.ty()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        let Tok::Ident(word) = self.peek().clone() else { return self.error("type") };
        if let Some(n) = self.sized(&word, "expint")? {
            return Ok(Type::Exp(DataType::Int(n)));
        }
        if let Some(n) = self.sized(&word, "varint")? {
            return Ok(Type::Var(DataType::Int(n)));
        }
        let t = match word.as_str() {
            "com" => Type::Com,
            "expbool" => Type::Exp(DataType::Bool),
            "varbool" => Type::Var(DataType::Bool),
            _ => return self.error("type"),
        };
        self.bump();
        Ok(t)
    }

    fn ty(&mut self) -> PResult<Type> {
        let pos = self.pos();
        let first = self.base_type()?;
        if !self.eat_sym("->") {
            return Ok(first);
        }
        let rest = self.ty()?;
        if !first.is_base() {
            return Err(FrontendError::Parse { pos, message: "only first-order function types are supported".into() });
        }
        let (args, res) = rest.arguments();
        let mut all = vec![first];
        all.extend(args.iter().cloned());
        Ok(Type::Fun(all, Box::new(res.clone())))
    }

    fn data_type(&mut self) -> PResult<DataType> {
        let pos = self.pos();
        match self.base_type()? {
            Type::Var(d) => Ok(d),
            other => Err(FrontendError::Parse { pos, message: format!("expected a variable type, found {other}") }),
        }
    }

    fn node(pos: Pos, kind: Kind) -> Node {
        Node { pos, kind }
    }

    fn seq(&mut self) -> PResult<Node> {
        let mut left = self.stmt()?;
        while self.is_sym(";") {
            let pos = self.pos();
            self.bump();
            if self.at_seq_end() {
                break;
            }
            let right = self.stmt()?;
            left = Self::node(pos, Kind::Seq(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn at_seq_end(&self) -> bool {
        self.is_sym("}") || self.is_sym(")") || self.is_sym(":") || self.is_kw("else") || *self.peek() == Tok::Eof
    }

    fn stmt(&mut self) -> PResult<Node> {
        let pos = self.pos();
        if self.eat_kw("if") {
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.stmt()?;
            if self.is_sym(";") && matches!(self.peek_at(1), Tok::Ident(k) if k == "else") {
                self.bump();
            }
            let e = if self.eat_kw("else") { Some(Box::new(self.stmt()?)) } else { None };
            return Ok(Self::node(pos, Kind::If(Box::new(c), Box::new(t), e)));
        }
        if self.eat_kw("while") {
            let c = self.expr()?;
            self.expect_kw("do")?;
            let b = self.stmt()?;
            return Ok(Self::node(pos, Kind::While(Box::new(c), Box::new(b))));
        }
        if self.eat_kw("new") {
            let name = self.ident()?;
            let size = if self.eat_sym("[") {
                let n = self.int()?;
                self.expect_sym("]")?;
                Some(n)
            } else {
                None
            };
            self.expect_sym(":")?;
            let ty = self.data_type()?;
            let init = if self.eat_sym(":=") { Some(Box::new(self.expr()?)) } else { None };
            self.expect_kw("in")?;
            let body = self.seq()?;
            return Ok(Self::node(pos, Kind::New { name, size, ty, init, body: Box::new(body) }));
        }
        if self.eat_sym("\\") {
            let name = self.ident()?;
            self.expect_sym(":")?;
            let ty = self.ty()?;
            self.expect_sym(".")?;
            let body = self.seq()?;
            return Ok(Self::node(pos, Kind::Lam { name, ty, body: Box::new(body) }));
        }
        let lhs = self.expr()?;
        if self.is_sym(":=") {
            let pos = self.pos();
            self.bump();
            let rhs = self.expr()?;
            return Ok(Self::node(pos, Kind::Assign(Box::new(lhs), Box::new(rhs))));
        }
        Ok(lhs)
    }

    fn binary(&mut self, level: usize) -> PResult<Node> {
        const LEVELS: [&[(&str, BinOp)]; 5] = [
            &[("||", BinOp::Or)],
            &[("&&", BinOp::And)],
            &[("=", BinOp::Eq), ("<", BinOp::Lt), (">", BinOp::Gt)],
            &[("+", BinOp::Add), ("-", BinOp::Sub)],
            &[("*", BinOp::Mul)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut left = self.binary(level + 1)?;
        while let Some(&(_, op)) = LEVELS[level].iter().find(|(s, _)| self.is_sym(s)) {
            let pos = self.pos();
            self.bump();
            let right = self.binary(level + 1)?;
            left = Self::node(pos, Kind::Bin(op, Box::new(left), Box::new(right)));
            if level == 2 {
                // comparisons do not chain
                break;
            }
        }
        Ok(left)
    }

    fn expr(&mut self) -> PResult<Node> {
        self.binary(0)
    }

    fn unary(&mut self) -> PResult<Node> {
        let pos = self.pos();
        if self.eat_sym("!") {
            let e = self.unary()?;
            return Ok(Self::node(pos, Kind::Deref(Box::new(e))));
        }
        if self.eat_kw("not") {
            let e = self.unary()?;
            return Ok(Self::node(pos, Kind::Not(Box::new(e))));
        }
        self.application()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) => true,
            Tok::Sym(s) => matches!(*s, "(" | "{"),
            Tok::Ident(s) => {
                !KEYWORDS.contains(&s.as_str()) || matches!(s.as_str(), "skip" | "diverge" | "tt" | "ff" | "mkvar")
            }
            Tok::Eof => false,
        }
    }

    fn application(&mut self) -> PResult<Node> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let pos = self.pos();
            let a = self.atom()?;
            f = Self::node(pos, Kind::App(Box::new(f), Box::new(a)));
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Node> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Self::node(pos, Kind::Int(n)))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.seq()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Sym("{") => {
                self.bump();
                let t = self.seq()?;
                self.expect_sym("}")?;
                Ok(t)
            }
            Tok::Ident(word) => {
                let kind = match word.as_str() {
                    "skip" => Kind::Skip,
                    "diverge" => Kind::Diverge,
                    "tt" => Kind::Bool(true),
                    "ff" => Kind::Bool(false),
                    "mkvar" => {
                        self.bump();
                        let a = self.atom()?;
                        let b = self.atom()?;
                        return Ok(Self::node(pos, Kind::Mkvar(Box::new(a), Box::new(b))));
                    }
                    _ => {
                        let name = self.ident()?;
                        if self.eat_sym("[") {
                            let index = self.expr()?;
                            self.expect_sym("]")?;
                            return Ok(Self::node(pos, Kind::Index(name, Box::new(index))));
                        }
                        return Ok(Self::node(pos, Kind::Ident(name)));
                    }
                };
                self.bump();
                Ok(Self::node(pos, kind))
            }
            _ => self.error("term"),
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        let class = if self.eat_kw("high") {
            Class::High
        } else if self.eat_kw("low") {
            Class::Low
        } else {
            self.eat_kw("given");
            Class::Given
        };
        let name = self.ident()?;
        let size = if self.eat_sym("[") {
            let n = self.int()?;
            self.expect_sym("]")?;
            Some(n)
        } else {
            None
        };
        self.expect_sym(":")?;
        let ty = self.ty()?;
        Ok(Decl { pos, class, name, size, ty })
    }

    fn has_turnstile(&self) -> bool {
        self.toks.iter().any(|(t, _)| *t == Tok::Sym("|-"))
    }

    fn program(&mut self) -> PResult<Program> {
        let mut decls = Vec::new();
        if self.has_turnstile() {
            while !self.eat_sym("|-") {
                decls.push(self.decl()?);
                if !(self.eat_sym(";") || self.eat_sym(BAR) || self.eat_sym(",")) && !self.is_sym("|-") {
                    return self.error("`;`, `|` or `|-`");
                }
            }
        }
        let term = self.seq()?;
        self.expect_sym(":")?;
        let ty_pos = self.pos();
        let ty = self.ty()?;
        self.eat_sym(";");
        if *self.peek() != Tok::Eof {
            return self.error("end of input");
        }
        Ok(Program { decls, term, ty, ty_pos })
    }
}

/// Parses a whole input file.
pub fn parse_program(text: &str) -> Result<Program, FrontendError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.program()
}

/// Parses a type expression on its own.
pub fn parse_type(text: &str) -> Result<Type, FrontendError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    Ok(t)
}
