//! Turtle serialization of the scheme (SKOS) and of the taxonomy plus scheme
//! (OWL), with persistent IRIs derived from domain and label.

mod owl;
mod reader;
mod skos;
mod turtle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kos::{Concept, ConceptId, ConceptScheme};
use crate::taxonomy::JepdViolation;
use crate::text::slug;

pub use owl::{emit_owl, OwlStrategy};
pub use reader::read_turtle_subset;
pub use skos::{emit_skos, emit_skos_with, FacetMode};

pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Base IRI under which every concept and class is minted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IriPolicy {
    base_iri: String,
}

impl IriPolicy {
    /// Accepts an absolute IRI ending in "/".
    pub fn new(base_iri: &str) -> Result<Self, EmitError> {
        let invalid = || EmitError::InvalidBaseIri(base_iri.to_string());
        let (scheme, rest) = base_iri.split_once(':').ok_or_else(invalid)?;
        let scheme_ok = scheme.starts_with(|c: char| c.is_ascii_alphabetic())
            && scheme.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
        let rest_ok = rest.len() > 1
            && !rest
                .chars()
                .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\#".contains(c));
        if !scheme_ok || !rest_ok || !base_iri.ends_with('/') {
            return Err(invalid());
        }
        Ok(IriPolicy {
            base_iri: base_iri.to_string(),
        })
    }

    pub fn base(&self) -> &str {
        &self.base_iri
    }

    /// Namespace of the project's own annotation properties.
    pub fn vocab(&self) -> String {
        format!("{}vocab#", self.base_iri)
    }

    /// Taxonomy classes live under a fragment namespace, which concept IRIs
    /// (always `domain/label`) can never reach.
    pub fn taxon(&self, label: &str) -> Iri {
        Iri(format!("{}tree#{}", self.base_iri, slug(label)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("base IRI {0:?} must be an absolute IRI ending in '/'")]
    InvalidBaseIri(String),
    #[error("{id}: label {label:?} reduces to an empty slug")]
    EmptySlug { id: ConceptId, label: String },
    #[error("scheme fails {} well-formedness check(s); first: {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    SchemeInvalid(Vec<String>),
    #[error("direct mapping refused: disjointness would be inconsistent with {}", describe_violations(.0))]
    JepdViolationInDirectMap(Vec<JepdViolation>),
    #[error("line {line}: outside the emitter profile: {detail}")]
    OutsideProfile { line: usize, detail: String },
}

fn describe_violations(v: &[JepdViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// `base + slug(primary domain) + "/" + slug(prefLabel)`, without collision
/// handling; see [`mint_all`].
pub fn mint_iri(concept: &Concept, policy: &IriPolicy) -> Result<Iri, EmitError> {
    let empty = || EmitError::EmptySlug {
        id: concept.id.clone(),
        label: concept.pref_label.clone(),
    };
    let domain = slug(concept.primary_domain().ok_or_else(empty)?);
    let label = slug(&concept.pref_label);
    if domain.is_empty() || label.is_empty() {
        return Err(empty());
    }
    Ok(Iri(format!("{}{domain}/{label}", policy.base())))
}

/// Mints every concept's IRI. Collisions get "-2", "-3" in concept id order,
/// so the assignment is fixed for a given scheme.
pub fn mint_all(scheme: &ConceptScheme, policy: &IriPolicy) -> Result<BTreeMap<ConceptId, Iri>, EmitError> {
    let mut used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for (id, concept) in &scheme.concepts {
        let base = mint_iri(concept, policy)?;
        let mut candidate = base.0.clone();
        let mut n = 1;
        while used.contains(&candidate) {
            n += 1;
            candidate = format!("{base}-{n}");
        }
        used.insert(candidate.clone());
        out.insert(id.clone(), Iri(candidate));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kos::ConceptKind;

    fn policy() -> IriPolicy {
        IriPolicy::new("https://example.org/chambers/").unwrap()
    }

    fn concept(id: &str, label: &str, domain: &str) -> Concept {
        Concept::new(ConceptId::new(id), label, domain, ConceptKind::Instance)
    }

    #[test]
    fn mint_examples() {
        let p = policy();
        assert_eq!(
            mint_iri(&concept("a", "Phænomena", "MINEROLOGY"), &p).unwrap().as_str(),
            "https://example.org/chambers/minerology/phaenomena"
        );
        assert_eq!(
            mint_iri(&concept("b", "Senatus-consultum", "LAW"), &p).unwrap().as_str(),
            "https://example.org/chambers/law/senatus-consultum"
        );
    }

    #[test]
    fn collisions_are_suffixed() {
        let mut s = ConceptScheme::default();
        s.insert(concept("x/feast", "Feast", "X"));
        s.insert(concept("x/feast-2", "feast", "X"));
        let iris = mint_all(&s, &policy()).unwrap();
        assert_eq!(iris[&ConceptId::new("x/feast")].as_str(), "https://example.org/chambers/x/feast");
        assert_eq!(iris[&ConceptId::new("x/feast-2")].as_str(), "https://example.org/chambers/x/feast-2");
    }

    #[test]
    fn empty_slug() {
        let err = mint_iri(&concept("a", "&", "X"), &policy()).unwrap_err();
        assert!(matches!(err, EmitError::EmptySlug { .. }));
    }

    #[test]
    fn base_iri_validation() {
        for bad in ["example.org/", "https://example.org", "https://ex ample.org/", "1http://x/", "http:/"] {
            assert!(IriPolicy::new(bad).is_err(), "{bad}");
        }
        assert!(IriPolicy::new("urn:x:chambers/").is_ok());
        assert_eq!(policy().taxon("Natural").as_str(), "https://example.org/chambers/tree#natural");
    }
}
