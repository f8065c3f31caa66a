use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{ConceptId, ConceptKind, ConceptScheme, RelationKind};
use crate::diagnostic::Diagnostic;

const SOURCE: &str = "scheme";

fn error(message: String) -> Diagnostic {
    Diagnostic::error(SOURCE, None, message)
}

/// Thesaurus well-formedness: non-empty labels, referential integrity,
/// reciprocal BT/NT and symmetric RT pairs, an acyclic broader hierarchy,
/// and every concept reachable from a top concept (or related to one).
pub fn check_scheme(scheme: &ConceptScheme) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    for (key, concept) in &scheme.concepts {
        if key != &concept.id {
            out.push(error(format!("concept stored under {key} has id {}", concept.id)));
        }
        if concept.pref_label.trim().is_empty() {
            out.push(error(format!("{key}: empty preferred label")));
        }
        if concept.domains.is_empty() {
            out.push(error(format!("{key}: no domain")));
        }
        if concept.kind == ConceptKind::Headword
            && (concept.domains.len() != 1 || !concept.domains.contains(&concept.pref_label))
        {
            out.push(error(format!("{key}: headword must belong to exactly its own domain")));
        }
    }

    for top in &scheme.top_concepts {
        match scheme.get(top) {
            None => out.push(error(format!("top concept {top} does not exist"))),
            Some(c) if c.kind != ConceptKind::Headword => {
                out.push(error(format!("top concept {top} is not a headword")))
            }
            _ => {}
        }
    }

    for rel in &scheme.relations {
        for end in [&rel.subject, &rel.object] {
            if !scheme.concepts.contains_key(end) {
                out.push(error(format!("relation {} {:?} {} refers to missing {end}", rel.subject, rel.kind, rel.object)));
            }
        }
        if rel.subject == rel.object {
            out.push(error(format!("{} is {:?} to itself", rel.subject, rel.kind)));
        }
        if !scheme.relations.contains(&rel.inverse()) {
            let what = match rel.kind {
                RelationKind::Related => "symmetric related",
                _ => "reciprocal",
            };
            out.push(error(format!(
                "{} {:?} {} lacks its {what} {:?}",
                rel.subject,
                rel.kind,
                rel.object,
                rel.kind.inverse()
            )));
        }
    }

    for cycle in broader_cycles(scheme) {
        let names: Vec<String> = cycle.iter().map(ConceptId::to_string).collect();
        out.push(error(format!("broader cycle: {}", names.join(" -> "))));
    }

    let mut reached: BTreeSet<&ConceptId> = scheme.top_concepts.iter().collect();
    let mut queue: VecDeque<&ConceptId> = scheme.top_concepts.iter().collect();
    while let Some(id) = queue.pop_front() {
        for child in scheme.targets(id, RelationKind::Narrower) {
            if reached.insert(child) {
                queue.push_back(child);
            }
        }
    }
    let related_to_top = |id: &ConceptId| {
        scheme
            .targets(id, RelationKind::Related)
            .any(|other| scheme.top_concepts.contains(other))
    };
    for id in scheme.concepts.keys() {
        if !reached.contains(id) && !related_to_top(id) {
            out.push(error(format!("{id} is not reachable from any top concept")));
        }
    }

    out
}

/// One representative cycle per strongly connected set of broader edges.
pub(crate) fn broader_cycles(scheme: &ConceptScheme) -> Vec<Vec<ConceptId>> {
    let mut edges: BTreeMap<&ConceptId, Vec<&ConceptId>> = BTreeMap::new();
    for rel in scheme.relations.iter().filter(|r| r.kind == RelationKind::Broader) {
        edges.entry(&rel.subject).or_default().push(&rel.object);
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&ConceptId, Mark> = BTreeMap::new();
    let mut cycles = Vec::new();

    for &start in edges.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // iterative DFS keeping the active path
        let mut path: Vec<(&ConceptId, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some(&mut (node, ref mut next)) = path.last_mut() {
            let succ = edges.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if *next < succ.len() {
                let target = succ[*next];
                *next += 1;
                match marks.get(target) {
                    None => {
                        marks.insert(target, Mark::Active);
                        path.push((target, 0));
                    }
                    Some(Mark::Active) => {
                        let from = path.iter().position(|(n, _)| *n == target).unwrap_or(0);
                        let mut cycle: Vec<ConceptId> = path[from..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(target.clone());
                        cycles.push(cycle);
                    }
                    Some(Mark::Done) => {}
                }
            } else {
                marks.insert(node, Mark::Done);
                path.pop();
            }
        }
    }
    cycles
}
