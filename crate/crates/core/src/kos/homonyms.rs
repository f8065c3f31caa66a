use std::collections::BTreeMap;

use super::{ConceptId, ConceptScheme};
use crate::text::case_fold;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub id: ConceptId,
    pub domains: Vec<String>,
    /// Labels from the headword down to the concept's parent facet.
    pub facet_path: Vec<String>,
}

/// A label shared by two or more distinct concepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityRecord {
    pub label: String,
    pub occurrences: Vec<Occurrence>,
}

/// Groups concepts by case-folded preferred label and reports every label
/// carried by at least two concepts, sorted by folded label.
pub fn find_homonyms(scheme: &ConceptScheme) -> Vec<AmbiguityRecord> {
    let mut groups: BTreeMap<String, Vec<&ConceptId>> = BTreeMap::new();
    for (id, concept) in &scheme.concepts {
        groups.entry(case_fold(&concept.pref_label)).or_default().push(id);
    }
    groups
        .into_values()
        .filter(|ids| ids.len() >= 2)
        .map(|ids| AmbiguityRecord {
            label: scheme.concepts[ids[0]].pref_label.clone(),
            occurrences: ids
                .into_iter()
                .map(|id| Occurrence {
                    id: id.clone(),
                    domains: scheme.concepts[id].domains.iter().cloned().collect(),
                    facet_path: scheme.facet_path(id),
                })
                .collect(),
        })
        .collect()
}
