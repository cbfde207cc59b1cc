//! Line-based ARS text format:
//!
//! ```text
//! # edges: source label target
//! a 1 b
//! a 2 c
//! [STRICT]
//! 2 1
//! [WEAK]
//! 2 1
//! ```
//!
//! An optional `[EDGES]` header may precede the edges. Order sections list
//! pairs `greater smaller`; the strict order is closed transitively and the
//! weak order reflexively and transitively. `[OBJECTS]` and `[LABELS]`
//! sections declare names that occur on no edge.

use std::fmt::Write as _;

use thiserror::Error;

use super::{FiniteArs, LabelOrders, OrderError, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArsParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Objects,
    Labels,
    Edges,
    Strict,
    Weak,
}

pub fn parse_ars(text: &str) -> Result<(FiniteArs, LabelOrders), ArsParseError> {
    let mut ars = FiniteArs::new();
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    let mut section = Section::Edges;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| ArsParseError::Syntax { line: i + 1, message };
        if line.starts_with('[') {
            section = match line {
                "[OBJECTS]" => Section::Objects,
                "[LABELS]" => Section::Labels,
                "[EDGES]" => Section::Edges,
                "[STRICT]" => Section::Strict,
                "[WEAK]" => Section::Weak,
                other => return Err(syntax(format!("unknown section {other}"))),
            };
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match (section, words.as_slice()) {
            (Section::Objects, names) => names.iter().for_each(|o| ars.add_object(o)),
            (Section::Labels, names) => names.iter().for_each(|l| ars.add_label(l)),
            (Section::Edges, [s, l, t]) => ars.add_edge(s, l, t),
            (Section::Edges, _) => return Err(syntax("expected `source label target`".into())),
            (Section::Strict, [a, b]) => strict.push((a.to_string(), b.to_string())),
            (Section::Weak, [a, b]) => weak.push((a.to_string(), b.to_string())),
            _ => return Err(syntax("expected `greater smaller`".into())),
        }
    }
    for (a, b) in strict.iter().chain(&weak) {
        ars.add_label(a);
        ars.add_label(b);
    }
    let ord = LabelOrders::closed(
        ars.labels().iter().map(String::as_str),
        strict.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        weak.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )?;
    Ok((ars, ord))
}

pub fn write_ars(ars: &FiniteArs, ord: &LabelOrders) -> String {
    let mut out = String::from("[OBJECTS]\n");
    for o in ars.objects() {
        let _ = writeln!(out, "{o}");
    }
    out.push_str("[LABELS]\n");
    for l in ord.labels() {
        let _ = writeln!(out, "{l}");
    }
    out.push_str("[EDGES]\n");
    for (s, l, t) in ars.edges() {
        let _ = writeln!(out, "{s} {l} {t}");
    }
    out.push_str("[STRICT]\n");
    for (a, b) in ord.pairs(Relation::Strict) {
        let _ = writeln!(out, "{a} {b}");
    }
    out.push_str("[WEAK]\n");
    for (a, b) in ord.pairs(Relation::Weak) {
        if a != b {
            let _ = writeln!(out, "{a} {b}");
        }
    }
    out
}
