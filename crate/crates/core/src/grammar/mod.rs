//! Parses one lexed vocabulary entry into a tree of facets and instances.
//!
//! Rules, in priority order:
//! 1. entry head: a roman "or" followed by an italic span gives the alternate
//!    name; a roman "including" followed by small-caps spans gives the scope
//!    areas;
//! 2. a roman span opens a facet, nested under the current facet when the
//!    connective carries a nesting cue (see [`GrammarConfig`]);
//! 3. italic spans are instances of the current facet;
//! 4. `&c.` or a period closes the current instance list (`&c.` marks it
//!    open-ended); a further italic span starts a new grouping in the same
//!    facet;
//! 5. a long dash closes every facet and records a topic break;
//! 6. an ordinal starts a new numbered section at entry level;
//! 7. `@interp{L}` opens a transcriber-supplied facet labelled `L`.

mod config;
mod normalize;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::diagnostic::{Diagnostic, Position};

pub use config::{ConfigError, GrammarConfig};
pub use normalize::{normalize_facet_label, split_alternate};
pub use parser::{parse_document, parse_entry};

/// Whether a heading was printed by the author or supplied by the transcriber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Origin {
    #[default]
    Textual,
    Interpolated,
}

/// An italic concept term listed under a facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceRef {
    pub label: String,
    /// The list holding this instance ended in `&c.`.
    pub open_ended: bool,
    /// Transcriber note attached directly after the span.
    pub emendation: Option<String>,
    /// 1-based index of the list within its facet.
    pub group: u32,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetNode {
    /// The roman phrase as printed; empty for interpolated headings.
    pub connective: String,
    pub facet_label: String,
    /// Label after an internal "or" ("Fossils or Minerals").
    pub alt_label: Option<String>,
    pub instances: Vec<InstanceRef>,
    pub children: Vec<FacetNode>,
    pub origin: Origin,
    pub ordinal_section: Option<u32>,
    pub position: Position,
}

impl FacetNode {
    /// Pre-order traversal including `self`.
    pub fn walk(&self) -> Vec<&FacetNode> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }

    /// Instances grouped by list, in source order.
    pub fn groups(&self) -> Vec<&[InstanceRef]> {
        self.instances.chunk_by(|a, b| a.group == b.group).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainParseTree {
    pub source_name: String,
    pub headword: String,
    pub position: Position,
    pub alt_name: Option<String>,
    pub scope_areas: Vec<String>,
    pub facets: Vec<FacetNode>,
    pub topic_breaks: Vec<Position>,
    /// Entry-level `@note{}` texts.
    pub notes: Vec<String>,
    pub warnings: Vec<Diagnostic>,
}

impl DomainParseTree {
    pub fn all_facets(&self) -> Vec<&FacetNode> {
        self.facets.iter().flat_map(FacetNode::walk).collect()
    }

    pub fn find_facet(&self, label: &str) -> Option<&FacetNode> {
        self.all_facets().into_iter().find(|f| f.facet_label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub instances: usize,
    pub facets: usize,
    pub open_ended_lists: usize,
}

/// Counts instances, facets and `&c.`-terminated lists by full traversal.
pub fn entry_concept_census(tree: &DomainParseTree) -> Census {
    let facets = tree.all_facets();
    Census {
        instances: facets.iter().map(|f| f.instances.len()).sum(),
        facets: facets.len(),
        open_ended_lists: facets
            .iter()
            .flat_map(|f| f.groups())
            .filter(|g| g.iter().all(|i| i.open_ended))
            .count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("entry must begin with @domain{{}}")]
    NotAnEntry { position: Position },
    #[error("a second @domain{{}} inside one entry")]
    UnexpectedDomainStart { position: Position },
    #[error("connective {connective:?} introduces no instances")]
    DanglingConnective { connective: String, position: Position },
    #[error("instance {label:?} appears before any facet")]
    OrphanInstance { label: String, position: Position },
    #[error("connective {connective:?} consists only of stop words")]
    NormalizationEmpty { connective: String },
}

impl GrammarError {
    pub fn position(&self) -> Option<Position> {
        match self {
            GrammarError::NotAnEntry { position }
            | GrammarError::UnexpectedDomainStart { position }
            | GrammarError::DanglingConnective { position, .. }
            | GrammarError::OrphanInstance { position, .. } => Some(*position),
            GrammarError::NormalizationEmpty { .. } => None,
        }
    }

    pub fn to_diagnostic(&self, source: &str) -> Diagnostic {
        Diagnostic::error(source, self.position(), self.to_string())
    }
}

fn write_facet(f: &mut fmt::Formatter<'_>, facet: &FacetNode, depth: usize) -> fmt::Result {
    let indent = "  ".repeat(depth);
    write!(f, "{indent}")?;
    if let Some(n) = facet.ordinal_section {
        write!(f, "[{n}] ")?;
    }
    write!(f, "{}", facet.facet_label)?;
    if let Some(alt) = &facet.alt_label {
        write!(f, " (or {alt})")?;
    }
    match facet.origin {
        Origin::Interpolated => writeln!(f, "  <interpolated>")?,
        Origin::Textual => writeln!(f, "  <- {:?}", facet.connective)?,
    }
    for group in facet.groups() {
        let labels: Vec<&str> = group.iter().map(|i| i.label.as_str()).collect();
        let end = if group[0].open_ended { ", &c." } else { "." };
        writeln!(f, "{indent}  | {}{end}", labels.join(", "))?;
    }
    for child in &facet.children {
        write_facet(f, child, depth + 1)?;
    }
    Ok(())
}

impl fmt::Display for DomainParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.headword)?;
        if let Some(alt) = &self.alt_name {
            write!(f, " (or {alt})")?;
        }
        if !self.scope_areas.is_empty() {
            write!(f, " including {}", self.scope_areas.join(", "))?;
        }
        writeln!(f)?;
        for facet in &self.facets {
            write_facet(f, facet, 1)?;
        }
        if !self.topic_breaks.is_empty() {
            let at: Vec<String> = self.topic_breaks.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  topic breaks at {}", at.join(", "))?;
        }
        Ok(())
    }
}
