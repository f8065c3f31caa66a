//! The taxonomic tree from "Knowledge" down to the domain headwords.
//!
//! Outline format: one label per line, two spaces of indentation per level,
//! optional ` | principle` suffix naming the dividing principle of the node.
//! Blank lines are ignored.
//!
//! Only the pairwise-disjoint half of JEPD is checked: a leaf label printed
//! under more than one branch. Joint exhaustiveness over all knowledge is a
//! modelling claim and cannot be decided from the outline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kos::{ConceptId, ConceptScheme};
use crate::text::fold;

pub const ROOT_LABEL: &str = "Knowledge";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonNode {
    pub label: String,
    pub children: Vec<TaxonNode>,
    pub dividing_principle: Option<String>,
}

impl TaxonNode {
    pub fn new(label: impl Into<String>) -> Self {
        TaxonNode {
            label: label.into(),
            children: Vec::new(),
            dividing_principle: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn count(&self) -> usize {
        1 + self.children.iter().map(TaxonNode::count).sum::<usize>()
    }

    fn collect_leaves<'a>(&'a self, prefix: &mut Vec<String>, out: &mut Vec<(&'a TaxonNode, Vec<String>)>) {
        prefix.push(self.label.clone());
        if self.is_leaf() {
            out.push((self, prefix.clone()));
        }
        for child in &self.children {
            child.collect_leaves(prefix, out);
        }
        prefix.pop();
    }
}

/// A root-to-node label path.
pub type TaxonPath = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyTree {
    pub root: TaxonNode,
    /// Every leaf label with each of its root-to-leaf paths, in outline order.
    pub leaf_index: BTreeMap<String, Vec<TaxonPath>>,
}

impl TaxonomyTree {
    pub fn from_root(root: TaxonNode) -> Self {
        let mut leaf_index: BTreeMap<String, Vec<TaxonPath>> = BTreeMap::new();
        let mut leaves = Vec::new();
        root.collect_leaves(&mut Vec::new(), &mut leaves);
        for (leaf, path) in leaves {
            leaf_index.entry(leaf.label.clone()).or_default().push(path);
        }
        TaxonomyTree { root, leaf_index }
    }

    /// Leaves with their paths in outline order.
    pub fn leaves(&self) -> Vec<(&TaxonNode, TaxonPath)> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut Vec::new(), &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// Pre-order walk yielding each node with its parent.
    pub fn edges(&self) -> Vec<(Option<&TaxonNode>, &TaxonNode, usize)> {
        fn go<'a>(parent: Option<&'a TaxonNode>, node: &'a TaxonNode, depth: usize, out: &mut Vec<(Option<&'a TaxonNode>, &'a TaxonNode, usize)>) {
            out.push((parent, node, depth));
            for child in &node.children {
                go(Some(node), child, depth + 1, out);
            }
        }
        let mut out = Vec::new();
        go(None, &self.root, 0, &mut out);
        out
    }
}

impl fmt::Display for TaxonomyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, node, depth) in self.edges() {
            write!(f, "{}{}", "  ".repeat(depth), node.label)?;
            if let Some(p) = &node.dividing_principle {
                write!(f, " | {p}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("taxonomy outline is empty")]
    EmptyOutline,
    #[error("line {line}: root must be {ROOT_LABEL:?}, found {found:?}")]
    RootMismatch { line: usize, found: String },
    #[error("line {line}: indentation jumps from depth {from} to depth {to}")]
    IndentJump { line: usize, from: usize, to: usize },
    #[error("line {line}: indentation must be a multiple of two spaces")]
    MisalignedIndent { line: usize },
    #[error("line {line}: a second top-level node")]
    MultipleRoots { line: usize },
    #[error("line {line}: empty node label")]
    EmptyLabel { line: usize },
}

impl TaxonomyError {
    pub fn line(&self) -> Option<usize> {
        match self {
            TaxonomyError::EmptyOutline => None,
            TaxonomyError::RootMismatch { line, .. }
            | TaxonomyError::IndentJump { line, .. }
            | TaxonomyError::MisalignedIndent { line }
            | TaxonomyError::MultipleRoots { line }
            | TaxonomyError::EmptyLabel { line } => Some(*line),
        }
    }
}

/// Parses an indented outline into a tree rooted at "Knowledge".
pub fn parse_taxonomy(outline_text: &str) -> Result<TaxonomyTree, TaxonomyError> {
    // stack[d] is the open node at depth d
    let mut stack: Vec<TaxonNode> = Vec::new();
    let mut depth_prev = 0;
    let mut seen_root = false;

    for (idx, raw) in outline_text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if raw[indent..].starts_with('\t') || indent % 2 != 0 {
            return Err(TaxonomyError::MisalignedIndent { line });
        }
        let depth = indent / 2;
        let (label, principle) = match raw.trim().split_once('|') {
            Some((l, p)) => (l.trim(), Some(p.trim().to_string()).filter(|p| !p.is_empty())),
            None => (raw.trim(), None),
        };
        if label.is_empty() {
            return Err(TaxonomyError::EmptyLabel { line });
        }

        if !seen_root {
            if depth != 0 || label != ROOT_LABEL {
                return Err(TaxonomyError::RootMismatch {
                    line,
                    found: label.to_string(),
                });
            }
            seen_root = true;
        } else if depth == 0 {
            return Err(TaxonomyError::MultipleRoots { line });
        } else if depth > depth_prev + 1 {
            return Err(TaxonomyError::IndentJump {
                line,
                from: depth_prev,
                to: depth,
            });
        }

        while stack.len() > depth {
            let done = stack.pop().unwrap();
            stack.last_mut().unwrap().children.push(done);
        }
        let mut node = TaxonNode::new(label);
        node.dividing_principle = principle;
        stack.push(node);
        depth_prev = depth;
    }

    while stack.len() > 1 {
        let done = stack.pop().unwrap();
        stack.last_mut().unwrap().children.push(done);
    }
    stack.pop().map(TaxonomyTree::from_root).ok_or(TaxonomyError::EmptyOutline)
}

/// A leaf label printed under more than one branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JepdViolation {
    pub label: String,
    pub paths: Vec<TaxonPath>,
}

impl fmt::Display for JepdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paths: Vec<String> = self.paths.iter().map(|p| p.join(" / ")).collect();
        write!(f, "leaf {:?} occurs {} times: {}", self.label, self.paths.len(), paths.join("; "))
    }
}

/// Reports every leaf label that occurs more than once, sorted by label.
pub fn validate_jepd(tree: &TaxonomyTree) -> Vec<JepdViolation> {
    tree.leaf_index
        .iter()
        .filter(|(_, paths)| paths.len() >= 2)
        .map(|(label, paths)| JepdViolation {
            label: label.clone(),
            paths: paths.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeafLinkReport {
    /// (leaf label, headword concept)
    pub matched: Vec<(String, ConceptId)>,
    pub unmatched_leaves: Vec<String>,
    pub unmatched_headwords: Vec<ConceptId>,
}

impl LeafLinkReport {
    pub fn headword_for_leaf(&self, leaf: &str) -> Option<&ConceptId> {
        self.matched.iter().find(|(l, _)| fold(l) == fold(leaf)).map(|(_, id)| id)
    }
}

/// Matches distinct leaf labels to headwords after case and diacritic
/// folding. No fuzzy matching: near misses surface as unmatched.
pub fn link_leaves(tree: &TaxonomyTree, scheme: &ConceptScheme) -> LeafLinkReport {
    let mut headwords: BTreeMap<String, &ConceptId> = BTreeMap::new();
    for id in &scheme.top_concepts {
        if let Some(c) = scheme.get(id) {
            headwords.entry(fold(&c.pref_label)).or_insert(id);
        }
    }

    let mut report = LeafLinkReport::default();
    let mut seen = BTreeSet::new();
    let mut used = BTreeSet::new();
    for (leaf, _) in tree.leaves() {
        let key = fold(&leaf.label);
        if !seen.insert(key.clone()) {
            continue;
        }
        match headwords.get(&key) {
            Some(id) => {
                used.insert(*id);
                report.matched.push((leaf.label.clone(), (*id).clone()));
            }
            None => report.unmatched_leaves.push(leaf.label.clone()),
        }
    }
    report.unmatched_headwords = scheme
        .top_concepts
        .iter()
        .filter(|id| !used.contains(id))
        .cloned()
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kos::{Concept, ConceptKind};

    #[test]
    fn two_children() {
        let tree = parse_taxonomy("Knowledge\n  Natural\n  Artificial").unwrap();
        assert_eq!(tree.root.children.len(), 2);
        assert_eq!(tree.leaves().len(), 2);
        assert_eq!(tree.node_count(), 3);
    }

    #[test]
    fn root_only() {
        let tree = parse_taxonomy("Knowledge\n").unwrap();
        assert_eq!(tree.leaves().len(), 1);
        assert!(validate_jepd(&tree).is_empty());
    }

    #[test]
    fn outline_errors() {
        assert_eq!(
            parse_taxonomy("Knowledge\n  Natural\n      Meteorology").unwrap_err(),
            TaxonomyError::IndentJump { line: 3, from: 1, to: 3 }
        );
        assert_eq!(parse_taxonomy("\n \n").unwrap_err(), TaxonomyError::EmptyOutline);
        assert!(matches!(parse_taxonomy("Science\n  Natural").unwrap_err(), TaxonomyError::RootMismatch { .. }));
        assert!(matches!(parse_taxonomy("Knowledge\n   Natural").unwrap_err(), TaxonomyError::MisalignedIndent { .. }));
        assert!(matches!(parse_taxonomy("Knowledge\n\tNatural").unwrap_err(), TaxonomyError::MisalignedIndent { .. }));
        assert!(matches!(parse_taxonomy("Knowledge\nArt").unwrap_err(), TaxonomyError::MultipleRoots { line: 2 }));
        assert!(matches!(parse_taxonomy("Knowledge\n  | x").unwrap_err(), TaxonomyError::EmptyLabel { line: 2 }));
    }

    #[test]
    fn principles_and_order() {
        let src = "Knowledge | origin\n  Natural | faculty\n    Sensible\n    Rational\n  Artificial\n    Internal\n";
        let tree = parse_taxonomy(src).unwrap();
        assert_eq!(tree.root.dividing_principle.as_deref(), Some("origin"));
        let leaves: Vec<_> = tree.leaves().into_iter().map(|(n, _)| n.label.clone()).collect();
        assert_eq!(leaves, vec!["Sensible", "Rational", "Internal"]);
        assert_eq!(tree.to_string(), src);
    }

    #[test]
    fn duplicated_leaf_is_one_violation() {
        let tree = parse_taxonomy("Knowledge\n  Natural\n    Optics\n    Botany\n  Artificial\n    Optics\n").unwrap();
        let v = validate_jepd(&tree);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].label, "Optics");
        assert_eq!(
            v[0].paths,
            vec![
                vec!["Knowledge", "Natural", "Optics"],
                vec!["Knowledge", "Artificial", "Optics"]
            ]
        );
    }

    fn headwords(names: &[&str]) -> ConceptScheme {
        let mut s = ConceptScheme::default();
        for (i, n) in names.iter().enumerate() {
            let id = ConceptId::new(format!("h/{i}"));
            s.insert(Concept::new(id.clone(), *n, *n, ConceptKind::Headword));
            s.top_concepts.insert(id);
        }
        s
    }

    #[test]
    fn link_case_insensitive() {
        let tree = parse_taxonomy("Knowledge\n  Natural\n    Minerology\n    Theology\n    Heraldry\n").unwrap();
        let report = link_leaves(&tree, &headwords(&["MINEROLOGY", "THEOLOGY"]));
        assert_eq!(report.matched.len(), 2);
        assert_eq!(report.unmatched_leaves, vec!["Heraldry"]);
        assert!(report.unmatched_headwords.is_empty());
        assert!(report.headword_for_leaf("minerology").is_some());
    }

    #[test]
    fn link_folds_diacritics() {
        let tree = parse_taxonomy("Knowledge\n  Phænomena\n").unwrap();
        assert_eq!(link_leaves(&tree, &headwords(&["PHAENOMENA"])).matched.len(), 1);
    }

    #[test]
    fn link_empty_scheme() {
        let tree = parse_taxonomy("Knowledge\n  A\n  B\n").unwrap();
        let report = link_leaves(&tree, &ConceptScheme::default());
        assert!(report.matched.is_empty());
        assert_eq!(report.unmatched_leaves.len(), 2);
    }
}
