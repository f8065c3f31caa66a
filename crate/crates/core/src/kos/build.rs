use std::collections::BTreeSet;

use super::{Concept, ConceptId, ConceptKind, ConceptScheme, KosError, Origin};
use crate::grammar::{DomainParseTree, FacetNode};
use crate::text::{fold, slug};

struct IdMinter {
    used: BTreeSet<String>,
}

impl IdMinter {
    fn mint(&mut self, domain: &str, label: &str) -> ConceptId {
        let d = non_empty(slug(domain));
        let l = non_empty(slug(label));
        let base = format!("{d}/{l}");
        let mut candidate = base.clone();
        let mut n = 1;
        while self.used.contains(&candidate) {
            n += 1;
            candidate = format!("{base}-{n}");
        }
        self.used.insert(candidate.clone());
        ConceptId::new(candidate)
    }
}

fn non_empty(s: String) -> String {
    if s.is_empty() {
        "concept".into()
    } else {
        s
    }
}

/// Builds the concept scheme from parsed entries.
///
/// Headwords become top concepts; every facet becomes a concept broader than
/// its instances and narrower than its parent facet (or the headword). Entries
/// are processed in headword order so ids do not depend on input order.
pub fn build_scheme(trees: &[DomainParseTree]) -> Result<ConceptScheme, KosError> {
    let mut sorted: Vec<&DomainParseTree> = trees.iter().collect();
    sorted.sort_by(|a, b| fold(&a.headword).cmp(&fold(&b.headword)).then_with(|| a.headword.cmp(&b.headword)));
    for pair in sorted.windows(2) {
        if fold(&pair[0].headword) == fold(&pair[1].headword) {
            return Err(KosError::DuplicateHeadword {
                headword: pair[1].headword.clone(),
            });
        }
    }

    let mut scheme = ConceptScheme::default();
    let mut minter = IdMinter { used: BTreeSet::new() };

    for tree in sorted {
        let domain = tree.headword.as_str();
        let head_id = minter.mint(domain, domain);
        let mut head = Concept::new(head_id.clone(), domain, domain, ConceptKind::Headword);
        head.alt_labels.extend(tree.alt_name.iter().cloned());
        head.notes.extend(tree.notes.iter().cloned());
        scheme.insert(head);
        scheme.top_concepts.insert(head_id.clone());

        for facet in &tree.facets {
            add_facet(&mut scheme, &mut minter, domain, facet, &head_id);
        }

        let facet_labels: BTreeSet<String> = tree.all_facets().iter().map(|f| fold(&f.facet_label)).collect();
        for area in &tree.scope_areas {
            if facet_labels.contains(&fold(area)) {
                continue;
            }
            let id = minter.mint(domain, area);
            let mut aspect = Concept::new(id.clone(), area.as_str(), domain, ConceptKind::Facet);
            aspect.notes.push("aspect named at the head of the entry".into());
            scheme.insert(aspect);
            scheme.link_related(&head_id, &id);
        }
    }
    Ok(scheme)
}

fn add_facet(scheme: &mut ConceptScheme, minter: &mut IdMinter, domain: &str, facet: &FacetNode, parent: &ConceptId) {
    let id = minter.mint(domain, &facet.facet_label);
    let mut concept = Concept::new(id.clone(), facet.facet_label.as_str(), domain, ConceptKind::Facet);
    concept.alt_labels.extend(facet.alt_label.iter().cloned());
    concept.origin = facet.origin;
    concept.open_ended = facet.instances.iter().any(|i| i.open_ended);
    match facet.origin {
        Origin::Textual => {
            concept.connective = Some(facet.connective.clone());
            concept.notes.push(format!("printed connective: \"{}\"", facet.connective));
        }
        Origin::Interpolated => concept
            .notes
            .push("heading interpolated by the transcriber; not printed in the source".into()),
    }
    if concept.open_ended {
        concept.notes.push("list open-ended: '&c.'".into());
    }
    scheme.insert(concept);
    scheme.link_broader(&id, parent);

    for inst in &facet.instances {
        let inst_id = minter.mint(domain, &inst.label);
        let mut concept = Concept::new(inst_id.clone(), inst.label.as_str(), domain, ConceptKind::Instance);
        concept.open_ended = inst.open_ended;
        if let Some(note) = &inst.emendation {
            concept.notes.push(format!("emendation: {note}"));
        }
        scheme.insert(concept);
        scheme.link_broader(&inst_id, &id);
    }
    for child in &facet.children {
        add_facet(scheme, minter, domain, child, &id);
    }
}
