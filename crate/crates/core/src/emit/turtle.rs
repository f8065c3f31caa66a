//! Minimal Turtle writer: prefix block, then one block per subject sorted by
//! IRI, predicates and objects sorted. Output bytes depend only on content.

use std::collections::{BTreeMap, BTreeSet};

pub(crate) fn iri(s: &str) -> String {
    format!("<{s}>")
}

pub(crate) fn literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub(crate) fn literal_en(s: &str) -> String {
    format!("{}@en", literal(s))
}

#[derive(Debug, Default)]
pub(crate) struct Document {
    prefixes: Vec<(&'static str, String)>,
    nodes: BTreeMap<String, BTreeMap<String, BTreeSet<String>>>,
}

impl Document {
    pub(crate) fn new(prefixes: Vec<(&'static str, String)>) -> Self {
        Document {
            prefixes,
            nodes: BTreeMap::new(),
        }
    }

    /// `subject` is a full IRI; `predicate` and `object` are already rendered.
    pub(crate) fn add(&mut self, subject: &str, predicate: &str, object: String) {
        self.nodes
            .entry(subject.to_string())
            .or_default()
            .entry(predicate.to_string())
            .or_default()
            .insert(object);
    }

    pub(crate) fn render(&self) -> String {
        let mut out = String::new();
        for (name, ns) in &self.prefixes {
            out.push_str(&format!("@prefix {name}: <{ns}> .\n"));
        }
        for (subject, predicates) in &self.nodes {
            out.push('\n');
            out.push_str(&iri(subject));
            let mut first = true;
            for (predicate, objects) in predicates {
                out.push_str(if first { " " } else { " ;\n    " });
                first = false;
                let objs: Vec<&str> = objects.iter().map(String::as_str).collect();
                out.push_str(&format!("{predicate} {}", objs.join(", ")));
            }
            out.push_str(" .\n");
        }
        out
    }
}
