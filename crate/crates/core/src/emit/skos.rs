use std::collections::BTreeSet;

use super::turtle::{iri, literal, literal_en, Document};
use super::{mint_all, EmitError, IriPolicy, DCTERMS, SKOS};
use crate::kos::{check_scheme, ConceptId, ConceptKind, ConceptScheme, Origin, RelationKind};

/// Whether facet concepts are published as concepts or folded into notes on
/// the instances beneath them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FacetMode {
    #[default]
    FirstClass,
    Collapsed,
}

pub fn emit_skos(scheme: &ConceptScheme, policy: &IriPolicy) -> Result<String, EmitError> {
    emit_skos_with(scheme, policy, FacetMode::FirstClass)
}

pub fn emit_skos_with(scheme: &ConceptScheme, policy: &IriPolicy, mode: FacetMode) -> Result<String, EmitError> {
    let problems: Vec<String> = check_scheme(scheme).into_iter().map(|d| d.message).collect();
    if !problems.is_empty() {
        return Err(EmitError::SchemeInvalid(problems));
    }
    let collapsed;
    let scheme = match mode {
        FacetMode::FirstClass => scheme,
        FacetMode::Collapsed => {
            collapsed = collapse_facets(scheme);
            &collapsed
        }
    };

    let iris = mint_all(scheme, policy)?;
    let vocab = policy.vocab();
    let mut doc = Document::new(vec![
        ("chambers", vocab),
        ("dcterms", DCTERMS.into()),
        ("skos", SKOS.into()),
    ]);
    let base = policy.base();
    doc.add(base, "a", "skos:ConceptScheme".into());
    for top in &scheme.top_concepts {
        doc.add(base, "skos:hasTopConcept", iri(iris[top].as_str()));
    }

    for (id, c) in &scheme.concepts {
        let s = iris[id].as_str();
        doc.add(s, "a", "skos:Concept".into());
        doc.add(s, "dcterms:identifier", literal(id.as_str()));
        doc.add(s, "chambers:conceptKind", literal(c.kind.as_str()));
        for d in &c.domains {
            doc.add(s, "chambers:domain", literal(d));
        }
        if c.origin == Origin::Interpolated {
            doc.add(s, "chambers:interpolated", "true".into());
        }
        if c.open_ended {
            doc.add(s, "chambers:openEnded", "true".into());
        }
        if let Some(conn) = &c.connective {
            doc.add(s, "chambers:connective", literal(conn));
        }
        doc.add(s, "skos:prefLabel", literal_en(&c.pref_label));
        for alt in &c.alt_labels {
            doc.add(s, "skos:altLabel", literal_en(alt));
        }
        for note in &c.notes {
            doc.add(s, "skos:editorialNote", literal_en(note));
        }
        doc.add(s, "skos:inScheme", iri(base));
        if scheme.top_concepts.contains(id) {
            doc.add(s, "skos:topConceptOf", iri(base));
        }
    }
    for rel in &scheme.relations {
        let p = match rel.kind {
            RelationKind::Broader => "skos:broader",
            RelationKind::Narrower => "skos:narrower",
            RelationKind::Related => "skos:related",
        };
        doc.add(iris[&rel.subject].as_str(), p, iri(iris[&rel.object].as_str()));
    }
    Ok(doc.render())
}

/// Drops facet concepts. Each surviving concept is attached to its nearest
/// non-facet ancestors and keeps the facet labels it passed through as notes.
fn collapse_facets(scheme: &ConceptScheme) -> ConceptScheme {
    let is_facet = |id: &ConceptId| scheme.get(id).is_some_and(|c| c.kind == ConceptKind::Facet);
    let mut out = ConceptScheme {
        top_concepts: scheme.top_concepts.clone(),
        ..ConceptScheme::default()
    };
    for (id, concept) in &scheme.concepts {
        if is_facet(id) {
            continue;
        }
        let mut concept = concept.clone();
        let mut anchors = BTreeSet::new();
        let mut stack: Vec<(ConceptId, Vec<String>)> = vec![(id.clone(), Vec::new())];
        while let Some((current, path)) = stack.pop() {
            for parent in scheme.broader(&current) {
                if is_facet(parent) {
                    let mut path = path.clone();
                    path.insert(0, scheme.concepts[parent].pref_label.clone());
                    stack.push((parent.clone(), path));
                } else {
                    if !path.is_empty() {
                        concept.notes.push(format!("facet: {}", path.join(" > ")));
                    }
                    anchors.insert(parent.clone());
                }
            }
        }
        for other in scheme.targets(id, RelationKind::Related) {
            if let Some(aspect) = scheme.get(other).filter(|_| is_facet(other)) {
                concept.notes.push(format!("aspect named at the head of the entry: {}", aspect.pref_label));
            }
        }
        out.insert(concept);
        for anchor in anchors {
            out.link_broader(id, &anchor);
        }
    }
    for rel in &scheme.relations {
        if rel.kind == RelationKind::Related && !is_facet(&rel.subject) && !is_facet(&rel.object) {
            out.relations.insert(rel.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_entry, GrammarConfig};
    use crate::kos::build_scheme;
    use crate::transcript::lex;

    fn policy() -> IriPolicy {
        IriPolicy::new("https://example.org/chambers/").unwrap()
    }

    fn scheme(src: &str) -> ConceptScheme {
        build_scheme(&[parse_entry(&lex(src).unwrap(), &GrammarConfig::default()).unwrap()]).unwrap()
    }

    #[test]
    fn mountain_broader_parts() {
        let ttl = emit_skos(&scheme("@domain{MINEROLOGY} roman{Its Parts, as} italic{Mountain}, italic{Mine}."), &policy()).unwrap();
        assert!(ttl.contains(
            "<https://example.org/chambers/minerology/mountain> a skos:Concept ;\n    chambers:conceptKind \"instance\" ;\n    chambers:domain \"MINEROLOGY\" ;\n    dcterms:identifier \"minerology/mountain\" ;\n    skos:broader <https://example.org/chambers/minerology/parts> ;"
        ), "{ttl}");
        assert!(ttl.contains("skos:narrower <https://example.org/chambers/minerology/mine>, <https://example.org/chambers/minerology/mountain>"));
        assert!(ttl.starts_with("@prefix chambers: <https://example.org/chambers/vocab#> .\n"));
    }

    #[test]
    fn empty_scheme_has_scheme_node_only() {
        let ttl = emit_skos(&ConceptScheme::default(), &policy()).unwrap();
        assert!(ttl.ends_with("\n<https://example.org/chambers/> a skos:ConceptScheme .\n"), "{ttl}");
        assert_eq!(ttl.matches(" a skos:").count(), 1);
    }

    #[test]
    fn invalid_scheme_refused() {
        let mut s = scheme("@domain{LAW} roman{publish'd in} italic{Act}.");
        s.relations.retain(|r| r.kind != RelationKind::Narrower);
        assert!(matches!(emit_skos(&s, &policy()), Err(EmitError::SchemeInvalid(_))));
    }

    #[test]
    fn collapsed_facets_become_notes() {
        let s = scheme("@domain{THEOLOGY} roman{Heathen} ; roman{Their Gods} italic{Jupiter}, &c.");
        let ttl = emit_skos_with(&s, &policy(), FacetMode::Collapsed).unwrap();
        assert!(!ttl.contains("\"facet\""));
        assert!(ttl.contains("\"facet: Heathen > Gods\"@en"), "{ttl}");
        assert!(ttl.contains("skos:broader <https://example.org/chambers/theology/theology>"));
    }
}
