//! Alphabet of the costed automata: game moves, the cost token and the
//! delimiter.

use std::fmt;
use std::sync::Arc;

/// Shared identifier name.
pub type Name = Arc<str>;

/// A data value carried by an answer move or a `write` question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(u32),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> Option<u32> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(true) => f.write_str("tt"),
            Value::Bool(false) => f.write_str("ff"),
        }
    }
}

/// The move proper, without its tag. Variant order fixes the
/// lexicographic tie-break used when reporting witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Q,
    Run,
    Read,
    Write(Value),
    Answer(Value),
    Ok,
    Done,
}

impl MoveKind {
    pub fn is_question(self) -> bool {
        matches!(self, MoveKind::Q | MoveKind::Run | MoveKind::Read | MoveKind::Write(_))
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::Q => f.write_str("q"),
            MoveKind::Run => f.write_str("run"),
            MoveKind::Read => f.write_str("read"),
            MoveKind::Write(v) => write!(f, "write({v})"),
            MoveKind::Answer(v) => write!(f, "{v}"),
            MoveKind::Ok => f.write_str("ok"),
            MoveKind::Done => f.write_str("done"),
        }
    }
}

/// One component of a move tag: either a context identifier (with the
/// occurrence number introduced by contraction, 0 once de-tagged) or an
/// argument position of a function type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagPart {
    Id { name: Name, occ: u32 },
    Arg(u32),
}

impl TagPart {
    pub fn id(name: impl Into<Name>) -> TagPart {
        TagPart::Id { name: name.into(), occ: 0 }
    }

    pub fn occurrence(name: impl Into<Name>, occ: u32) -> TagPart {
        TagPart::Id { name: name.into(), occ }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            TagPart::Id { name, .. } => Some(name),
            TagPart::Arg(_) => None,
        }
    }
}

impl fmt::Display for TagPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagPart::Id { name, occ: 0 } => f.write_str(name),
            TagPart::Id { name, occ } => write!(f, "{name}~{occ}"),
            TagPart::Arg(i) => write!(f, "{i}"),
        }
    }
}

/// Superscript tag of a move; `[f, 1]` is the first argument of `f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tag(Arc<[TagPart]>);

impl Tag {
    pub fn empty() -> Tag {
        Tag(Arc::from(Vec::new()))
    }

    pub fn new(parts: Vec<TagPart>) -> Tag {
        Tag(Arc::from(parts))
    }

    pub fn parts(&self) -> &[TagPart] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `prefix` followed by this tag.
    pub fn prefixed(&self, prefix: &[TagPart]) -> Tag {
        let mut parts = prefix.to_vec();
        parts.extend(self.0.iter().cloned());
        Tag::new(parts)
    }

    pub fn starts_with(&self, prefix: &[TagPart]) -> bool {
        self.0.starts_with(prefix)
    }

    /// Tag with `prefix` removed, if it starts with it.
    pub fn strip_prefix(&self, prefix: &[TagPart]) -> Option<Tag> {
        self.0.strip_prefix(prefix).map(|rest| Tag::new(rest.to_vec()))
    }

    /// Identifier at the head of the tag.
    pub fn head_name(&self) -> Option<&str> {
        self.0.first().and_then(TagPart::name)
    }

    /// The same tag with the head occurrence number reset to 0.
    pub fn detagged(&self) -> Tag {
        match self.0.first() {
            Some(TagPart::Id { name, occ }) if *occ != 0 => {
                let mut parts = self.0.to_vec();
                parts[0] = TagPart::Id { name: name.clone(), occ: 0 };
                Tag::new(parts)
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub tag: Tag,
}

/// Alphabet element of every model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Move(Move),
    /// One unit of cost, rendered `$`.
    Token,
    /// Boundary between self-composed copies, rendered `#`.
    Delim,
}

impl Letter {
    pub fn mv(kind: MoveKind) -> Letter {
        Letter::Move(Move { kind, tag: Tag::empty() })
    }

    pub fn tagged(kind: MoveKind, tag: Tag) -> Letter {
        Letter::Move(Move { kind, tag })
    }

    pub fn as_move(&self) -> Option<&Move> {
        match self {
            Letter::Move(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_move(&self) -> bool {
        matches!(self, Letter::Move(_))
    }

    pub fn tag(&self) -> Option<&Tag> {
        self.as_move().map(|m| &m.tag)
    }

    /// True for moves whose tag starts with `prefix` (never for `$`/`#`).
    pub fn has_tag_prefix(&self, prefix: &[TagPart]) -> bool {
        self.tag().is_some_and(|t| t.starts_with(prefix))
    }

    /// True for moves tagged by identifier `name`, any occurrence.
    pub fn belongs_to(&self, name: &str) -> bool {
        self.tag().and_then(Tag::head_name) == Some(name)
    }

    pub fn with_tag_prefix(&self, prefix: &[TagPart]) -> Letter {
        match self {
            Letter::Move(m) => Letter::tagged(m.kind, m.tag.prefixed(prefix)),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Token => f.write_str("$"),
            Letter::Delim => f.write_str("#"),
            Letter::Move(m) if m.tag.is_empty() => write!(f, "{}", m.kind),
            Letter::Move(m) => write!(f, "{}@{}", m.kind, m.tag),
        }
    }
}

/// Renders a word as dot-separated letters.
pub fn render_word(word: &[Letter]) -> String {
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(".")
}

/// Number of tokens in a word.
pub fn token_count(word: &[Letter]) -> usize {
    word.iter().filter(|l| **l == Letter::Token).count()
}

/// Parses the textual letter rendering back; used by tests and golden files.
pub fn parse_letter(text: &str) -> Option<Letter> {
    match text {
        "$" => return Some(Letter::Token),
        "#" => return Some(Letter::Delim),
        _ => {}
    }
    let (kind_text, tag) = match text.split_once('@') {
        Some((k, t)) => (k, parse_tag(t)?),
        None => (text, Tag::empty()),
    };
    let kind = match kind_text {
        "q" => MoveKind::Q,
        "run" => MoveKind::Run,
        "read" => MoveKind::Read,
        "ok" => MoveKind::Ok,
        "done" => MoveKind::Done,
        other => {
            if let Some(inner) = other.strip_prefix("write(").and_then(|s| s.strip_suffix(')')) {
                MoveKind::Write(parse_value(inner)?)
            } else {
                MoveKind::Answer(parse_value(other)?)
            }
        }
    };
    Some(Letter::tagged(kind, tag))
}

fn parse_value(text: &str) -> Option<Value> {
    match text {
        "tt" => Some(Value::Bool(true)),
        "ff" => Some(Value::Bool(false)),
        n => n.parse().ok().map(Value::Int),
    }
}

fn parse_tag(text: &str) -> Option<Tag> {
    let mut parts = Vec::new();
    for (i, piece) in text.split('.').enumerate() {
        if piece.is_empty() {
            return None;
        }
        if i > 0 {
            if let Ok(n) = piece.parse() {
                parts.push(TagPart::Arg(n));
                continue;
            }
        }
        match piece.split_once('~') {
            Some((name, occ)) => parts.push(TagPart::occurrence(name, occ.parse().ok()?)),
            None => match piece.parse() {
                Ok(n) if i == 0 => parts.push(TagPart::Arg(n)),
                _ => parts.push(TagPart::id(piece)),
            },
        }
    }
    Some(Tag::new(parts))
}

/// Parses a whitespace-separated word such as `run $ q@k 0@k done`.
/// (The dot-joined rendering is ambiguous for an untagged numeric answer
/// following a tagged move, so it is not used as an input format.)
pub fn parse_word(text: &str) -> Option<Vec<Letter>> {
    text.split_whitespace().map(parse_letter).collect()
}
