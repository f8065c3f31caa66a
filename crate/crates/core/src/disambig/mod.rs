//! Human merge/split decisions for homonymous labels.
//!
//! Decisions are external data. Nothing here judges whether two "Feast"
//! concepts mean the same thing; the decisions file says so, with a rationale.

mod apply;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kos::ConceptId;
use crate::text::case_fold;

pub use apply::{apply_decisions, ApplicationReport, DecisionOutcome, DisambigError, Outcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionAction {
    /// Collapse every occurrence into one concept labelled with the target.
    Merge(String),
    /// Give each occurrence a qualifier; missing ids default to the domain.
    Split(BTreeMap<ConceptId, String>),
}

impl DecisionAction {
    pub fn keyword(&self) -> &'static str {
        match self {
            DecisionAction::Merge(_) => "merge",
            DecisionAction::Split(_) => "split",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionEntry {
    pub label: String,
    pub action: DecisionAction,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecisionSet {
    pub entries: Vec<DecisionEntry>,
    pub source_file: String,
}

impl DecisionSet {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionFileError {
    #[error("line {line}: expected at least 3 tab-separated columns, found {found}")]
    MissingColumns { line: usize, found: usize },
    #[error("line {line}: unknown action {action:?} (expected merge or split)")]
    UnknownAction { line: usize, action: String },
    #[error("line {line}: empty label")]
    EmptyLabel { line: usize },
    #[error("line {line}: merge needs a target label")]
    EmptyTarget { line: usize },
    #[error("line {line}: qualifier {pair:?} is not conceptId=qualifier")]
    BadQualifier { line: usize, pair: String },
    #[error("line {line}: second decision for label {label:?}")]
    DuplicateLabel { line: usize, label: String },
}

impl DecisionFileError {
    pub fn line(&self) -> usize {
        match self {
            DecisionFileError::MissingColumns { line, .. }
            | DecisionFileError::UnknownAction { line, .. }
            | DecisionFileError::EmptyLabel { line }
            | DecisionFileError::EmptyTarget { line }
            | DecisionFileError::BadQualifier { line, .. }
            | DecisionFileError::DuplicateLabel { line, .. } => *line,
        }
    }
}

/// Parses `label<TAB>action<TAB>target_or_qualifiers<TAB>rationale`.
/// The rationale column may be omitted; `#` lines and blank lines are skipped.
pub fn parse_decisions(source_file: &str, text: &str) -> Result<DecisionSet, DecisionFileError> {
    let mut entries = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        if cols.len() < 3 {
            return Err(DecisionFileError::MissingColumns { line, found: cols.len() });
        }
        let label = cols[0].to_string();
        if label.is_empty() {
            return Err(DecisionFileError::EmptyLabel { line });
        }
        let action = match cols[1].to_lowercase().as_str() {
            "merge" if cols[2].is_empty() => return Err(DecisionFileError::EmptyTarget { line }),
            "merge" => DecisionAction::Merge(cols[2].to_string()),
            "split" => DecisionAction::Split(parse_qualifiers(line, cols[2])?),
            other => {
                return Err(DecisionFileError::UnknownAction {
                    line,
                    action: other.to_string(),
                })
            }
        };
        if seen.insert(case_fold(&label), line).is_some() {
            return Err(DecisionFileError::DuplicateLabel { line, label });
        }
        entries.push(DecisionEntry {
            label,
            action,
            rationale: cols[3..].join(" ").trim().to_string(),
        });
    }
    Ok(DecisionSet {
        entries,
        source_file: source_file.to_string(),
    })
}

fn parse_qualifiers(line: usize, field: &str) -> Result<BTreeMap<ConceptId, String>, DecisionFileError> {
    field
        .split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| match pair.split_once('=') {
            Some((id, q)) if !id.trim().is_empty() && !q.trim().is_empty() => {
                Ok((ConceptId::new(id.trim()), q.trim().to_string()))
            }
            _ => Err(DecisionFileError::BadQualifier {
                line,
                pair: pair.to_string(),
            }),
        })
        .collect()
}

impl fmt::Display for DecisionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let third = match &e.action {
                DecisionAction::Merge(target) => target.clone(),
                DecisionAction::Split(q) => q.iter().map(|(id, q)| format!("{id}={q}")).collect::<Vec<_>>().join(";"),
            };
            writeln!(f, "{}\t{}\t{}\t{}", e.label, e.action.keyword(), third, e.rationale)?;
        }
        Ok(())
    }
}
