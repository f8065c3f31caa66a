//! The concept scheme: concepts with labels and provenance, linked by
//! broader / narrower / related relations.

mod build;
mod check;
mod homonyms;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use crate::grammar::Origin;
pub use build::build_scheme;
pub use check::check_scheme;
pub(crate) use check::broader_cycles;
pub use homonyms::{find_homonyms, AmbiguityRecord, Occurrence};

/// Stable concept identifier, `<domain-slug>/<label-slug>[-n]`, assigned at
/// build time and never changed by later renames.
///
/// Ordered naturally, so `x/feast-2` sorts before `x/feast-10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConceptId(String);

impl ConceptId {
    pub fn new(id: impl Into<String>) -> Self {
        ConceptId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let xn = x.iter().take_while(|b| b.is_ascii_digit()).count();
                let yn = y.iter().take_while(|b| b.is_ascii_digit()).count();
                let xs = std::str::from_utf8(&x[..xn]).unwrap().trim_start_matches('0');
                let ys = std::str::from_utf8(&y[..yn]).unwrap().trim_start_matches('0');
                let ord = xs.len().cmp(&ys.len()).then_with(|| xs.cmp(ys));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[xn..];
                y = &y[yn..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

impl Ord for ConceptId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for ConceptId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptKind {
    Headword,
    Facet,
    Instance,
}

impl ConceptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConceptKind::Headword => "headword",
            ConceptKind::Facet => "facet",
            ConceptKind::Instance => "instance",
        }
    }

    pub fn parse(s: &str) -> Option<ConceptKind> {
        match s {
            "headword" => Some(ConceptKind::Headword),
            "facet" => Some(ConceptKind::Facet),
            "instance" => Some(ConceptKind::Instance),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub pref_label: String,
    pub alt_labels: BTreeSet<String>,
    /// Headwords of the entries the concept appears under.
    pub domains: BTreeSet<String>,
    pub kind: ConceptKind,
    pub origin: Origin,
    pub open_ended: bool,
    /// Printed connective for facet concepts.
    pub connective: Option<String>,
    pub notes: Vec<String>,
}

impl Concept {
    pub fn new(id: ConceptId, pref_label: impl Into<String>, domain: impl Into<String>, kind: ConceptKind) -> Self {
        Concept {
            id,
            pref_label: pref_label.into(),
            alt_labels: BTreeSet::new(),
            domains: BTreeSet::from([domain.into()]),
            kind,
            origin: Origin::Textual,
            open_ended: false,
            connective: None,
            notes: Vec::new(),
        }
    }

    /// The first domain in sorted order; used for IRI minting.
    pub fn primary_domain(&self) -> Option<&str> {
        self.domains.iter().next().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    Broader,
    Narrower,
    Related,
}

impl RelationKind {
    pub fn inverse(self) -> RelationKind {
        match self {
            RelationKind::Broader => RelationKind::Narrower,
            RelationKind::Narrower => RelationKind::Broader,
            RelationKind::Related => RelationKind::Related,
        }
    }
}

/// `subject kind object`, e.g. `Mountain Broader Parts`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub subject: ConceptId,
    pub kind: RelationKind,
    pub object: ConceptId,
}

impl Relation {
    pub fn new(subject: ConceptId, kind: RelationKind, object: ConceptId) -> Self {
        Relation { subject, kind, object }
    }

    pub fn inverse(&self) -> Relation {
        Relation::new(self.object.clone(), self.kind.inverse(), self.subject.clone())
    }
}

/// Both directions of every relation are stored explicitly, so a scheme
/// missing a reciprocal is representable and [`check_scheme`] can flag it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConceptScheme {
    pub concepts: BTreeMap<ConceptId, Concept>,
    pub relations: BTreeSet<Relation>,
    pub top_concepts: BTreeSet<ConceptId>,
}

impl ConceptScheme {
    pub fn insert(&mut self, concept: Concept) {
        self.concepts.insert(concept.id.clone(), concept);
    }

    /// Stores `narrower Broader broader` and its reciprocal.
    pub fn link_broader(&mut self, narrower: &ConceptId, broader: &ConceptId) {
        let rel = Relation::new(narrower.clone(), RelationKind::Broader, broader.clone());
        self.relations.insert(rel.inverse());
        self.relations.insert(rel);
    }

    pub fn link_related(&mut self, a: &ConceptId, b: &ConceptId) {
        let rel = Relation::new(a.clone(), RelationKind::Related, b.clone());
        self.relations.insert(rel.inverse());
        self.relations.insert(rel);
    }

    pub fn get(&self, id: &ConceptId) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn targets(&self, id: &ConceptId, kind: RelationKind) -> impl Iterator<Item = &ConceptId> + '_ {
        let id = id.clone();
        let start = Relation::new(id.clone(), kind, ConceptId::new(""));
        self.relations
            .range(start..)
            .take_while(move |r| r.kind == kind && r.subject == id)
            .map(|r| &r.object)
    }

    pub fn broader(&self, id: &ConceptId) -> Vec<&ConceptId> {
        self.targets(id, RelationKind::Broader).collect()
    }

    pub fn narrower(&self, id: &ConceptId) -> Vec<&ConceptId> {
        self.targets(id, RelationKind::Narrower).collect()
    }

    pub fn count_kind(&self, kind: ConceptKind) -> usize {
        self.concepts.values().filter(|c| c.kind == kind).count()
    }

    /// Labels from the top concept down to `id`'s parent, following the
    /// first broader concept at each step.
    pub fn facet_path(&self, id: &ConceptId) -> Vec<String> {
        let mut path = Vec::new();
        let mut seen = BTreeSet::from([id.clone()]);
        let mut current = id.clone();
        while let Some(parent) = self.broader(&current).into_iter().next().cloned() {
            if !seen.insert(parent.clone()) {
                break;
            }
            if let Some(c) = self.get(&parent) {
                path.push(c.pref_label.clone());
            }
            current = parent;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KosError {
    #[error("headword {headword:?} is used by more than one entry")]
    DuplicateHeadword { headword: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_sort_naturally() {
        let mut ids: Vec<ConceptId> = ["x/feast-10", "x/feast", "x/feast-2", "law/act"]
            .into_iter()
            .map(ConceptId::new)
            .collect();
        ids.sort();
        let sorted: Vec<&str> = ids.iter().map(ConceptId::as_str).collect();
        assert_eq!(sorted, vec!["law/act", "x/feast", "x/feast-2", "x/feast-10"]);
        assert_ne!(ConceptId::new("a-02").cmp(&ConceptId::new("a-2")), Ordering::Equal);
    }
}
