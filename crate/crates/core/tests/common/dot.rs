//! Minimal DOT reader for checking exported graphs.

use std::collections::BTreeMap;

/// A parsed DOT digraph: node ids with attributes, and labelled edges.
#[derive(Debug, Default)]
pub struct Dot {
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    pub edges: Vec<(String, String, String)>,
}

fn attrs(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or_else(|| format!("attribute without '=': {rest}"))?;
        let after = after.trim_start();
        let (value, tail) = if let Some(quoted) = after.strip_prefix('"') {
            let end = quoted.find('"').ok_or("unterminated string")?;
            (quoted[..end].to_string(), &quoted[end + 1..])
        } else {
            let end = after.find([',', ' ']).unwrap_or(after.len());
            (after[..end].to_string(), &after[end..])
        };
        out.insert(key.trim().to_string(), value);
        rest = tail.trim_start().trim_start_matches(',').trim_start();
    }
    Ok(out)
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !s.starts_with(|c: char| c.is_ascii_digit())
}

/// Accepts `digraph NAME { stmt; ... }` where each statement is a graph
/// attribute, a node `ID [attrs]` or an edge `ID -> ID [attrs]`.
pub fn parse_dot(text: &str) -> Result<Dot, String> {
    let text = text.trim();
    let body = text.strip_prefix("digraph").ok_or("missing digraph keyword")?;
    let open = body.find('{').ok_or("missing '{'")?;
    if !body[..open].trim().is_empty() && !is_id(body[..open].trim()) {
        return Err(format!("bad graph name {:?}", body[..open].trim()));
    }
    let inner = body[open + 1..].strip_suffix('}').ok_or("missing '}'")?;
    let mut dot = Dot::default();
    for stmt in inner.split(";\n").map(str::trim).filter(|s| !s.is_empty()) {
        let stmt = stmt.trim_end_matches(';');
        let (head, attr_text) = match stmt.find('[') {
            Some(i) => {
                let close = stmt.rfind(']').ok_or("missing ']'")?;
                (stmt[..i].trim(), &stmt[i + 1..close])
            }
            None => (stmt, ""),
        };
        if let Some((a, b)) = head.split_once("->") {
            let (a, b) = (a.trim(), b.trim());
            if !is_id(a) || !is_id(b) {
                return Err(format!("bad edge endpoints in {stmt:?}"));
            }
            let label = attrs(attr_text)?.remove("label").unwrap_or_default();
            dot.edges.push((a.to_string(), b.to_string(), label));
        } else if head.contains('=') {
            attrs(head)?;
        } else if matches!(head, "node" | "edge" | "graph") {
            attrs(attr_text)?;
        } else if is_id(head) {
            dot.nodes.insert(head.to_string(), attrs(attr_text)?);
        } else {
            return Err(format!("bad statement {stmt:?}"));
        }
    }
    for (a, b, _) in &dot.edges {
        for end in [a, b] {
            if !dot.nodes.contains_key(end) {
                return Err(format!("edge uses undeclared node {end}"));
            }
        }
    }
    Ok(dot)
}
