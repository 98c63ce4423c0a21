use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::frontend::{BinOp, UnOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cost model line {line}: {message}")]
pub struct CostModelError {
    pub line: usize,
    pub message: String,
}

/// Token counts charged by each kind of reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostModel {
    pub seq: u64,
    pub if_: u64,
    pub asg: u64,
    pub der: u64,
    pub app: u64,
    /// Charged once per `new` block.
    pub var: u64,
    /// Keyed by operator symbol (`+`, `&&`, `not`, ...).
    ops: BTreeMap<String, u64>,
}

fn op_symbols() -> impl Iterator<Item = &'static str> {
    BinOp::ALL.iter().map(|op| op.symbol()).chain([UnOp::Not.symbol()])
}

impl CostModel {
    /// Every kind costs `k`.
    pub fn uniform(k: u64) -> CostModel {
        CostModel {
            seq: k,
            if_: k,
            asg: k,
            der: k,
            app: k,
            var: k,
            ops: op_symbols().map(|s| (s.to_string(), k)).collect(),
        }
    }

    pub fn zero() -> CostModel {
        CostModel::uniform(0)
    }

    pub fn binop(&self, op: BinOp) -> u64 {
        self.ops[op.symbol()]
    }

    pub fn unop(&self, op: UnOp) -> u64 {
        self.ops[op.symbol()]
    }

    /// Sets one entry by its configuration key.
    pub fn set(&mut self, key: &str, value: u64) -> Result<(), String> {
        let slot = match key {
            "seq" => &mut self.seq,
            "if" => &mut self.if_,
            "asg" => &mut self.asg,
            "der" => &mut self.der,
            "app" => &mut self.app,
            "var" | "new" => &mut self.var,
            other => match other.strip_prefix("op.").and_then(|s| self.ops.get_mut(s)) {
                Some(slot) => slot,
                None => return Err(format!("unknown key `{key}`")),
            },
        };
        *slot = value;
        Ok(())
    }

    /// Builder-style [`set`](Self::set) for known keys.
    pub fn with(mut self, key: &str, value: u64) -> CostModel {
        self.set(key, value).expect("known cost key");
        self
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::uniform(1)
    }
}

/// `key = n` lines over the defaults; `#` starts a comment.
impl FromStr for CostModel {
    type Err = CostModelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cm = CostModel::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CostModelError { line: i + 1, message };
            let (key, value) = line.rsplit_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let value: u64 =
                value.trim().parse().map_err(|_| err(format!("`{}` is not a non-negative integer", value.trim())))?;
            cm.set(key.trim(), value).map_err(err)?;
        }
        Ok(cm)
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seq = {}", self.seq)?;
        writeln!(f, "if = {}", self.if_)?;
        writeln!(f, "asg = {}", self.asg)?;
        writeln!(f, "der = {}", self.der)?;
        writeln!(f, "app = {}", self.app)?;
        writeln!(f, "var = {}", self.var)?;
        for (k, v) in &self.ops {
            writeln!(f, "op.{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_rejects_unknown_keys() {
        let cm: CostModel = "# compare only\nseq = 0\nop.= = 1\nop.+ = 0\n".parse().unwrap();
        assert_eq!(cm.seq, 0);
        assert_eq!(cm.binop(BinOp::Eq), 1);
        assert_eq!(cm.binop(BinOp::Add), 0);
        assert_eq!(cm.der, 1);
        let err = "seq = 1\nfoo = 2".parse::<CostModel>().unwrap_err();
        assert_eq!(err.line, 2);
        assert!("op.% = 1".parse::<CostModel>().is_err());
        assert!("seq = -1".parse::<CostModel>().is_err());
    }

    #[test]
    fn display_round_trips() {
        let cm = CostModel::zero().with("op.<", 3).with("app", 2);
        assert_eq!(cm.to_string().parse::<CostModel>().unwrap(), cm);
    }
}
