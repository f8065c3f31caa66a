use std::collections::BTreeMap;

use super::turtle::{iri, literal, literal_en, Document};
use super::{mint_all, EmitError, Iri, IriPolicy, OWL, RDFS};
use crate::kos::{check_scheme, ConceptId, ConceptKind, ConceptScheme, Origin, RelationKind};
use crate::taxonomy::{link_leaves, validate_jepd, JepdViolation, TaxonomyTree};
use crate::text::slug;

/// How the tree of knowledge becomes a class hierarchy.
///
/// `DirectMap` makes the root equivalent to `owl:Thing` and every set of
/// siblings pairwise disjoint, which is only consistent when no label repeats.
/// `AxiomBased` keeps subclass links and annotations but asserts no
/// disjointness, so a repeated leaf becomes one class with several parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OwlStrategy {
    DirectMap,
    AxiomBased,
}

/// Tree labels that would share a class IRI. Leaf repeats come first, as
/// reported by `validate_jepd`; repeated inner labels follow.
fn class_clashes(tree: &TaxonomyTree) -> Vec<JepdViolation> {
    let mut clashes = validate_jepd(tree);
    let mut by_slug: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    fn walk(node: &crate::taxonomy::TaxonNode, path: &mut Vec<String>, out: &mut BTreeMap<String, Vec<Vec<String>>>) {
        path.push(node.label.clone());
        out.entry(slug(&node.label)).or_default().push(path.clone());
        for child in &node.children {
            walk(child, path, out);
        }
        path.pop();
    }
    walk(&tree.root, &mut Vec::new(), &mut by_slug);
    for paths in by_slug.into_values().filter(|p| p.len() >= 2) {
        let label = paths[0].last().cloned().unwrap_or_default();
        if !clashes.iter().any(|c| c.paths == paths) {
            clashes.push(JepdViolation { label, paths });
        }
    }
    clashes
}

pub fn emit_owl(
    scheme: &ConceptScheme,
    tree: &TaxonomyTree,
    strategy: OwlStrategy,
    policy: &IriPolicy,
) -> Result<String, EmitError> {
    if strategy == OwlStrategy::DirectMap {
        let clashes = class_clashes(tree);
        if !clashes.is_empty() {
            return Err(EmitError::JepdViolationInDirectMap(clashes));
        }
    }
    let problems: Vec<String> = check_scheme(scheme).into_iter().map(|d| d.message).collect();
    if !problems.is_empty() {
        return Err(EmitError::SchemeInvalid(problems));
    }
    let axioms = strategy == OwlStrategy::AxiomBased;

    let vocab = policy.vocab();
    let mut doc = Document::new(vec![("chambers", vocab.clone()), ("owl", OWL.into()), ("rdfs", RDFS.into())]);
    doc.add(policy.base(), "a", "owl:Ontology".into());
    let mut properties = vec!["domain"];
    if axioms {
        properties.extend(["connective", "dividingPrinciple", "interpolated", "openEnded"]);
    }
    for p in properties {
        doc.add(&format!("{vocab}{p}"), "a", "owl:AnnotationProperty".into());
    }

    let root = policy.taxon(&tree.root.label);
    for (parent, node, _) in tree.edges() {
        let class = policy.taxon(&node.label);
        let c = class.as_str();
        doc.add(c, "a", "owl:Class".into());
        doc.add(c, "rdfs:label", literal_en(&node.label));
        match parent {
            Some(p) => doc.add(c, "rdfs:subClassOf", iri(policy.taxon(&p.label).as_str())),
            None if !axioms => doc.add(c, "owl:equivalentClass", "owl:Thing".into()),
            None => {}
        }
        if axioms {
            if let Some(principle) = &node.dividing_principle {
                doc.add(c, "chambers:dividingPrinciple", literal_en(principle));
            }
        } else {
            let siblings: Vec<Iri> = node.children.iter().map(|n| policy.taxon(&n.label)).collect();
            for (i, a) in siblings.iter().enumerate() {
                for b in &siblings[i + 1..] {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    doc.add(lo.as_str(), "owl:disjointWith", iri(hi.as_str()));
                }
            }
        }
    }

    // headwords are identified with their leaf class, or hang off the root
    let links = link_leaves(tree, scheme);
    let mut headword_class: BTreeMap<&ConceptId, Iri> = BTreeMap::new();
    for id in &scheme.top_concepts {
        let class = scheme
            .get(id)
            .and_then(|c| links.matched.iter().find(|(_, hid)| hid == id).map(|(leaf, _)| (c, leaf)))
            .map(|(_, leaf)| policy.taxon(leaf))
            .unwrap_or_else(|| root.clone());
        headword_class.insert(id, class);
    }
    let by_domain: BTreeMap<&str, &ConceptId> = scheme
        .top_concepts
        .iter()
        .filter_map(|id| scheme.get(id).map(|c| (c.pref_label.as_str(), id)))
        .collect();

    let iris = mint_all(scheme, policy)?;
    let class_of = |id: &ConceptId| headword_class.get(id).cloned().unwrap_or_else(|| iris[id].clone());

    for (id, concept) in &scheme.concepts {
        if concept.kind == ConceptKind::Headword {
            continue;
        }
        let c = iris[id].as_str();
        doc.add(c, "a", "owl:Class".into());
        doc.add(c, "rdfs:label", literal_en(&concept.pref_label));
        for d in &concept.domains {
            doc.add(c, "chambers:domain", literal(d));
        }
        let parents: Vec<Iri> = scheme.targets(id, RelationKind::Broader).map(&class_of).collect();
        if parents.is_empty() {
            // an entry-head aspect: place it under its domain's class
            for d in &concept.domains {
                let class = by_domain.get(d.as_str()).map(|h| class_of(h)).unwrap_or_else(|| root.clone());
                doc.add(c, "rdfs:subClassOf", iri(class.as_str()));
            }
        }
        for p in parents {
            doc.add(c, "rdfs:subClassOf", iri(p.as_str()));
        }
        for other in scheme.targets(id, RelationKind::Related) {
            doc.add(c, "rdfs:seeAlso", iri(class_of(other).as_str()));
        }
        if axioms {
            if let Some(conn) = &concept.connective {
                doc.add(c, "chambers:connective", literal(conn));
            }
            if concept.origin == Origin::Interpolated {
                doc.add(c, "chambers:interpolated", "true".into());
            }
            if concept.open_ended {
                doc.add(c, "chambers:openEnded", "true".into());
            }
        }
    }
    Ok(doc.render())
}
