use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{DecisionAction, DecisionEntry, DecisionSet};
use crate::kos::{broader_cycles, find_homonyms, AmbiguityRecord, ConceptId, ConceptKind, ConceptScheme, Origin, Relation, RelationKind};
use crate::text::{case_fold, display_case};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Applied(String),
    AlreadySatisfied,
    Ignored(String),
    /// No concept carries the label.
    UnknownLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub label: String,
    pub action: &'static str,
    pub outcome: Outcome,
}

impl fmt::Display for DecisionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match &self.outcome {
            Outcome::Applied(d) => format!("applied: {d}"),
            Outcome::AlreadySatisfied => "already satisfied".into(),
            Outcome::Ignored(why) => format!("ignored: {why}"),
            Outcome::UnknownLabel => "unmatched: label not in scheme".into(),
        };
        write!(f, "{} {:?}: {status}", self.action, self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ApplicationReport {
    pub outcomes: Vec<DecisionOutcome>,
    /// Homonyms still present after all decisions.
    pub unresolved: Vec<AmbiguityRecord>,
}

impl ApplicationReport {
    fn with(&self, pick: fn(&Outcome) -> bool) -> Vec<&DecisionOutcome> {
        self.outcomes.iter().filter(|o| pick(&o.outcome)).collect()
    }

    pub fn applied(&self) -> Vec<&DecisionOutcome> {
        self.with(|o| matches!(o, Outcome::Applied(_)))
    }

    pub fn ignored(&self) -> Vec<&DecisionOutcome> {
        self.with(|o| matches!(o, Outcome::Ignored(_)))
    }

    pub fn unmatched(&self) -> Vec<&DecisionOutcome> {
        self.with(|o| matches!(o, Outcome::UnknownLabel))
    }

    /// True when nothing was changed.
    pub fn is_noop(&self) -> bool {
        self.applied().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisambigError {
    #[error("merging {label:?} would create a broader cycle: {cycle}")]
    ConflictingDecision { label: String, cycle: String },
}

/// Applies decisions in file order and returns the rewritten scheme. The
/// input scheme is not modified.
pub fn apply_decisions(
    scheme: &ConceptScheme,
    decisions: &DecisionSet,
) -> Result<(ConceptScheme, ApplicationReport), DisambigError> {
    let mut out = scheme.clone();
    let mut report = ApplicationReport::default();
    for entry in &decisions.entries {
        let outcome = match &entry.action {
            DecisionAction::Merge(target) => merge(&mut out, entry, target)?,
            DecisionAction::Split(qualifiers) => split(&mut out, entry, qualifiers),
        };
        report.outcomes.push(DecisionOutcome {
            label: entry.label.clone(),
            action: entry.action.keyword(),
            outcome,
        });
    }
    report.unresolved = find_homonyms(&out);
    Ok((out, report))
}

fn occurrences(scheme: &ConceptScheme, label: &str) -> Vec<ConceptId> {
    let key = case_fold(label);
    scheme
        .concepts
        .values()
        .filter(|c| case_fold(&c.pref_label) == key)
        .map(|c| c.id.clone())
        .collect()
}

fn carries_alt(scheme: &ConceptScheme, label: &str) -> bool {
    let key = case_fold(label);
    scheme
        .concepts
        .values()
        .any(|c| c.alt_labels.iter().any(|a| case_fold(a) == key))
}

fn merge(scheme: &mut ConceptScheme, entry: &DecisionEntry, target: &str) -> Result<Outcome, DisambigError> {
    let ids = occurrences(scheme, &entry.label);
    match ids.len() {
        0 if carries_alt(scheme, &entry.label) => return Ok(Outcome::AlreadySatisfied),
        0 => return Ok(Outcome::UnknownLabel),
        1 if scheme.concepts[&ids[0]].pref_label == target => return Ok(Outcome::AlreadySatisfied),
        _ => {}
    }
    if ids.iter().any(|id| scheme.concepts[id].kind == ConceptKind::Headword) {
        return Ok(Outcome::Ignored("a headword cannot be merged".into()));
    }

    // ids are sorted, so the survivor is the smallest
    let survivor = ids[0].clone();
    let absorbed: BTreeSet<ConceptId> = ids[1..].iter().cloned().collect();

    let relations: BTreeSet<Relation> = scheme
        .relations
        .iter()
        .map(|r| {
            let repoint = |id: &ConceptId| if absorbed.contains(id) { survivor.clone() } else { id.clone() };
            Relation::new(repoint(&r.subject), r.kind, repoint(&r.object))
        })
        .filter(|r| !(r.kind == RelationKind::Related && r.subject == r.object))
        .collect();
    if let Some(r) = relations.iter().find(|r| r.subject == r.object) {
        return Err(DisambigError::ConflictingDecision {
            label: entry.label.clone(),
            cycle: format!("{} -> {}", r.subject, r.object),
        });
    }

    let mut merged = scheme.concepts[&survivor].clone();
    for id in &absorbed {
        let other = scheme.concepts.remove(id).expect("occurrence exists");
        merged.domains.extend(other.domains);
        merged.alt_labels.extend(other.alt_labels);
        merged.alt_labels.insert(other.pref_label);
        merged.open_ended |= other.open_ended;
        if other.origin == Origin::Textual {
            merged.origin = Origin::Textual;
        }
        if other.kind == ConceptKind::Facet {
            merged.kind = ConceptKind::Facet;
        }
        if merged.connective.is_none() {
            merged.connective = other.connective;
        }
        for note in other.notes {
            if !merged.notes.contains(&note) {
                merged.notes.push(note);
            }
        }
    }
    merged.alt_labels.insert(merged.pref_label.clone());
    merged.pref_label = target.to_string();
    merged.alt_labels.remove(target);

    let candidate = {
        let mut s = scheme.clone();
        s.relations = relations;
        s.insert(merged);
        s
    };
    if let Some(cycle) = broader_cycles(&candidate).into_iter().next() {
        let names: Vec<String> = cycle.iter().map(ConceptId::to_string).collect();
        return Err(DisambigError::ConflictingDecision {
            label: entry.label.clone(),
            cycle: names.join(" -> "),
        });
    }
    *scheme = candidate;
    Ok(Outcome::Applied(format!("{} concepts merged into {survivor}", ids.len())))
}

fn split(scheme: &mut ConceptScheme, entry: &DecisionEntry, qualifiers: &BTreeMap<ConceptId, String>) -> Outcome {
    let ids = occurrences(scheme, &entry.label);
    if ids.is_empty() {
        return if carries_alt(scheme, &entry.label) {
            Outcome::AlreadySatisfied
        } else {
            Outcome::UnknownLabel
        };
    }
    if let Some(stray) = qualifiers.keys().find(|id| !ids.contains(id)) {
        return Outcome::Ignored(format!("{stray} is not an occurrence of the label"));
    }
    if ids.iter().any(|id| scheme.concepts[id].kind == ConceptKind::Headword) {
        return Outcome::Ignored("a headword cannot be split".into());
    }
    for id in &ids {
        let concept = scheme.concepts.get_mut(id).expect("occurrence exists");
        let qualifier = qualifiers
            .get(id)
            .cloned()
            .unwrap_or_else(|| display_case(concept.primary_domain().unwrap_or_default()));
        let qualified = format!("{} ({qualifier})", concept.pref_label);
        let original = std::mem::replace(&mut concept.pref_label, qualified);
        concept.alt_labels.insert(original);
    }
    Outcome::Applied(format!("{} concepts qualified", ids.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disambig::parse_decisions;
    use crate::grammar::{parse_entry, GrammarConfig};
    use crate::kos::{build_scheme, check_scheme};
    use crate::transcript::lex;

    fn scheme(srcs: &[&str]) -> ConceptScheme {
        let trees: Vec<_> = srcs
            .iter()
            .map(|s| parse_entry(&lex(s).unwrap(), &GrammarConfig::default()).unwrap())
            .collect();
        build_scheme(&trees).unwrap()
    }

    fn feasts() -> ConceptScheme {
        scheme(&[
            "@domain{THEOLOGY} roman{Heathen} ; roman{Their Rites} italic{Feast}, italic{Lustration}, &c.",
            "@domain{CHRONOLOGY} roman{Divisions of time, as} italic{Year}, italic{Feast}, &c.",
        ])
    }

    fn decisions(text: &str) -> DecisionSet {
        parse_decisions("test.tsv", text).unwrap()
    }

    #[test]
    fn merge_collapses_two_feasts() {
        let before = feasts();
        let (after, report) = apply_decisions(&before, &decisions("Feast\tmerge\tFeast\tsame rite")).unwrap();
        assert_eq!(after.concepts.len(), before.concepts.len() - 1);
        let feast = after.concepts.values().find(|c| c.pref_label == "Feast").unwrap();
        assert_eq!(feast.domains, BTreeSet::from(["CHRONOLOGY".to_string(), "THEOLOGY".to_string()]));
        let parents: Vec<String> = after.broader(&feast.id).iter().map(|id| after.get(id).unwrap().pref_label.clone()).collect();
        assert_eq!(parents, vec!["Divisions of time", "Rites"]);
        assert!(check_scheme(&after).is_empty());
        assert!(report.unresolved.is_empty());
        assert_eq!(report.applied().len(), 1);
    }

    #[test]
    fn merge_twice_is_noop() {
        let d = decisions("Feast\tmerge\tFestival\t");
        let (once, _) = apply_decisions(&feasts(), &d).unwrap();
        let (twice, report) = apply_decisions(&once, &d).unwrap();
        assert_eq!(once, twice);
        assert!(report.is_noop());
        assert_eq!(report.outcomes[0].outcome, Outcome::AlreadySatisfied);
    }

    #[test]
    fn empty_set_reports_homonyms() {
        let before = feasts();
        let (after, report) = apply_decisions(&before, &DecisionSet::default()).unwrap();
        assert_eq!(before, after);
        assert_eq!(report.unresolved.len(), 1);
    }

    #[test]
    fn split_defaults_to_domain() {
        let before = scheme(&[
            "@domain{GEOMETRY} roman{Its Branches, as} italic{Operations}, italic{Problem}.",
            "@domain{MEDICINE} roman{Its Parts, as} italic{Operations}, italic{Amputation}.",
        ]);
        let (after, report) = apply_decisions(&before, &decisions("Operations\tsplit\t\tunrelated")).unwrap();
        let labels: BTreeSet<&str> = after.concepts.values().map(|c| c.pref_label.as_str()).collect();
        assert!(labels.contains("Operations (Geometry)"));
        assert!(labels.contains("Operations (Medicine)"));
        assert_eq!(after.concepts.len(), before.concepts.len());
        assert!(report.unresolved.is_empty());
        let (again, r2) = apply_decisions(&after, &decisions("Operations\tsplit\t\t")).unwrap();
        assert_eq!(again, after);
        assert!(r2.is_noop());
    }

    #[test]
    fn split_with_explicit_qualifier() {
        let before = feasts();
        let d = decisions("Feast\tsplit\tchronology/feast=calendar\t");
        let (after, _) = apply_decisions(&before, &d).unwrap();
        assert!(after.concepts.values().any(|c| c.pref_label == "Feast (calendar)"));
        assert!(after.concepts.values().any(|c| c.pref_label == "Feast (Theology)"));
    }

    #[test]
    fn unknown_label_is_not_fatal() {
        let (after, report) = apply_decisions(&feasts(), &decisions("Griffin\tmerge\tGriffin\t")).unwrap();
        assert_eq!(after, feasts());
        assert_eq!(report.unmatched().len(), 1);
    }

    #[test]
    fn merge_into_own_ancestor_conflicts() {
        let s = scheme(&["@domain{X} roman{Feast, as} italic{Feast}, italic{Fast}."]);
        let err = apply_decisions(&s, &decisions("Feast\tmerge\tFeast\t")).unwrap_err();
        assert!(matches!(err, DisambigError::ConflictingDecision { .. }));
    }

    #[test]
    fn merge_creating_long_cycle_conflicts() {
        // A under B in one domain, B-labelled concept under A-labelled in another
        let s = scheme(&[
            "@domain{X} roman{Alpha, as} italic{Beta}.",
            "@domain{Y} roman{Beta, as} italic{Alpha}.",
        ]);
        let (once, _) = apply_decisions(&s, &decisions("Alpha\tmerge\tAlpha\t")).unwrap();
        let err = apply_decisions(&once, &decisions("Beta\tmerge\tBeta\t")).unwrap_err();
        assert!(matches!(err, DisambigError::ConflictingDecision { .. }), "{err:?}");
    }

    #[test]
    fn headwords_are_not_merged() {
        let s = scheme(&["@domain{X} roman{Its Parts, as} italic{X}."]);
        let (after, report) = apply_decisions(&s, &decisions("X\tmerge\tX\t")).unwrap();
        assert_eq!(after, s);
        assert_eq!(report.ignored().len(), 1);
    }
}
