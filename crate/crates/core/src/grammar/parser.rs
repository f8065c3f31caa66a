use super::normalize::{leading_keyword, match_cue, normalize_facet_label, split_alternate, verbatim_label};
use super::{DomainParseTree, FacetNode, GrammarConfig, GrammarError, InstanceRef, Origin};
use crate::diagnostic::{Diagnostic, Position};
use crate::text::fold;
use crate::transcript::{DirectiveKind, PunctKind, Style, StyledSpan, Token, TranscriptDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ListState {
    Empty,
    Open,
    Closed,
}

struct Draft {
    node: FacetNode,
    children: Vec<usize>,
    /// The nesting cue that opened this facet, if any.
    cue: Option<String>,
    list: ListState,
    group: u32,
}

struct Builder<'a> {
    config: &'a GrammarConfig,
    source: &'a str,
    drafts: Vec<Draft>,
    roots: Vec<usize>,
    /// Open facets from entry level down to the current one.
    stack: Vec<usize>,
    section: Option<u32>,
    scope_areas: Vec<String>,
    warnings: Vec<Diagnostic>,
}

enum Placement {
    TopLevel,
    Child,
    SiblingOfCurrent,
}

impl<'a> Builder<'a> {
    fn open(&mut self, node: FacetNode, cue: Option<String>, placement: Placement) {
        let placement = match placement {
            _ if self.stack.is_empty() => Placement::TopLevel,
            p => p,
        };
        let parent = match placement {
            Placement::TopLevel => {
                self.stack.clear();
                None
            }
            Placement::Child => self.stack.last().copied(),
            Placement::SiblingOfCurrent => {
                self.stack.pop();
                self.stack.last().copied()
            }
        };
        let id = self.drafts.len();
        self.drafts.push(Draft {
            node,
            children: Vec::new(),
            cue,
            list: ListState::Empty,
            group: 1,
        });
        match parent {
            Some(p) => self.drafts[p].children.push(id),
            None => self.roots.push(id),
        }
        self.stack.push(id);
    }

    fn new_node(&self, connective: &str, label: String, alt: Option<String>, origin: Origin, position: Position) -> FacetNode {
        FacetNode {
            connective: connective.to_string(),
            facet_label: label,
            alt_label: alt,
            instances: Vec::new(),
            children: Vec::new(),
            origin,
            ordinal_section: self.section,
            position,
        }
    }

    fn open_connective(&mut self, span: &StyledSpan) {
        let connective = span.trimmed();
        let (head, alt) = split_alternate(connective);
        let normalized = normalize_facet_label(&head, self.config);
        let label = normalized.clone().unwrap_or_else(|_| verbatim_label(&head));
        let alt = alt.and_then(|a| normalize_facet_label(&a, self.config).ok());

        // A connective made only of stop words ("as") has no subject of its
        // own and refers back like a cue does.
        let cue = match span.style {
            Style::SmallCaps => None,
            _ => match_cue(connective, self.config).or_else(|| normalized.is_err().then(|| label.to_lowercase())),
        };

        if span.style == Style::SmallCaps && !self.scope_areas.iter().any(|a| fold(a) == fold(&label)) {
            self.warnings.push(Diagnostic::warning(
                self.source,
                Some(span.position),
                format!("small-caps span {connective:?} inside entry body treated as a facet heading"),
            ));
        }

        let placement = match (&cue, self.stack.last()) {
            (None, _) => Placement::TopLevel,
            (Some(c), Some(&top)) if self.drafts[top].cue.as_ref() == Some(c) => Placement::SiblingOfCurrent,
            (Some(_), _) => Placement::Child,
        };
        let node = self.new_node(connective, label, alt, Origin::Textual, span.position);
        self.open(node, cue, placement);
    }

    fn add_instance(&mut self, span: &StyledSpan) -> Result<(), GrammarError> {
        let Some(&top) = self.stack.last() else {
            return Err(GrammarError::OrphanInstance {
                label: span.trimmed().to_string(),
                position: span.position,
            });
        };
        let draft = &mut self.drafts[top];
        match draft.list {
            ListState::Closed => {
                draft.group += 1;
                draft.list = ListState::Open;
            }
            ListState::Empty => draft.list = ListState::Open,
            ListState::Open => {}
        }
        draft.node.instances.push(InstanceRef {
            label: span.trimmed().to_string(),
            open_ended: false,
            emendation: None,
            group: draft.group,
            position: span.position,
        });
        Ok(())
    }

    fn close_list(&mut self, open_ended: bool, position: Position) {
        let current = self.stack.last().copied().filter(|&top| self.drafts[top].list == ListState::Open);
        match current {
            Some(top) => {
                let draft = &mut self.drafts[top];
                draft.list = ListState::Closed;
                if open_ended {
                    let group = draft.group;
                    for inst in draft.node.instances.iter_mut().filter(|i| i.group == group) {
                        inst.open_ended = true;
                    }
                }
            }
            None if open_ended => self.warnings.push(Diagnostic::warning(
                self.source,
                Some(position),
                "`&c.` does not close an instance list",
            )),
            None => {}
        }
    }

    fn finish(mut self) -> Result<(Vec<FacetNode>, Vec<Diagnostic>), GrammarError> {
        if let Some(empty) = self
            .drafts
            .iter()
            .find(|d| d.node.instances.is_empty() && d.children.is_empty())
        {
            let connective = match empty.node.origin {
                Origin::Interpolated => format!("@interp{{{}}}", empty.node.facet_label),
                Origin::Textual => empty.node.connective.clone(),
            };
            return Err(GrammarError::DanglingConnective {
                connective,
                position: empty.node.position,
            });
        }
        let roots = std::mem::take(&mut self.roots);
        let facets = roots.into_iter().map(|id| assemble(&mut self.drafts, id)).collect();
        Ok((facets, self.warnings))
    }
}

fn assemble(drafts: &mut [Draft], id: usize) -> FacetNode {
    let children = std::mem::take(&mut drafts[id].children);
    let built: Vec<FacetNode> = children.into_iter().map(|c| assemble(drafts, c)).collect();
    let mut node = drafts[id].node.clone();
    node.children = built;
    node
}

fn roman_keyword(token: Option<&Token>) -> Option<String> {
    match token {
        Some(Token::Span(s)) if s.style == Style::Roman => leading_keyword(&s.text),
        _ => None,
    }
}

/// Parses a single entry. The document must begin with `@domain{}` and hold
/// no other entry.
pub fn parse_entry(doc: &TranscriptDocument, config: &GrammarConfig) -> Result<DomainParseTree, GrammarError> {
    let tokens = &doc.tokens;
    let (headword, position) = match tokens.first() {
        Some(Token::Directive(d)) => match &d.kind {
            DirectiveKind::DomainStart(name) => (name.trim().to_string(), d.position),
            _ => return Err(GrammarError::NotAnEntry { position: d.position }),
        },
        Some(other) => return Err(GrammarError::NotAnEntry { position: other.position() }),
        None => return Err(GrammarError::NotAnEntry { position: Position::new(1, 1) }),
    };

    let mut i = 1;
    while matches!(tokens.get(i), Some(Token::Punct(p)) if p.kind == PunctKind::Comma) {
        i += 1;
    }

    let mut alt_name = None;
    let mut scope_areas = Vec::new();
    match roman_keyword(tokens.get(i)).as_deref() {
        Some("or") => {
            if let Some(Token::Span(s)) = tokens.get(i + 1) {
                if s.style == Style::Italic {
                    alt_name = Some(s.trimmed().to_string());
                    i += 2;
                }
            }
        }
        Some("including") => {
            let mut j = i + 1;
            let mut areas = Vec::new();
            loop {
                match tokens.get(j) {
                    Some(Token::Span(s)) if s.style == Style::SmallCaps => areas.push(s.trimmed().to_string()),
                    Some(Token::Punct(p)) if p.kind == PunctKind::Comma => {}
                    Some(t @ Token::Span(_)) if roman_keyword(Some(t)).as_deref() == Some("and") => {}
                    _ => break,
                }
                j += 1;
            }
            if !areas.is_empty() {
                scope_areas = areas;
                i = j;
            }
        }
        _ => {}
    }

    let mut builder = Builder {
        config,
        source: &doc.source_name,
        drafts: Vec::new(),
        roots: Vec::new(),
        stack: Vec::new(),
        section: None,
        scope_areas: scope_areas.clone(),
        warnings: Vec::new(),
    };
    let mut topic_breaks = Vec::new();
    let mut notes = Vec::new();
    let mut previous: Option<&Token> = None;

    for token in &tokens[i..] {
        match token {
            Token::Span(span) => match span.style {
                Style::Italic => builder.add_instance(span)?,
                Style::Roman | Style::SmallCaps => builder.open_connective(span),
            },
            Token::Punct(p) => match p.kind {
                PunctKind::Comma | PunctKind::Semicolon => {}
                PunctKind::Period => builder.close_list(false, p.position),
                PunctKind::EtCetera => builder.close_list(true, p.position),
                PunctKind::LongDash => {
                    let repeated = matches!(previous, Some(Token::Punct(q)) if q.kind == PunctKind::LongDash);
                    if !repeated {
                        topic_breaks.push(p.position);
                    }
                    builder.stack.clear();
                }
                PunctKind::Ordinal(n) => {
                    builder.stack.clear();
                    builder.section = Some(n);
                }
            },
            Token::Directive(d) => match &d.kind {
                DirectiveKind::DomainStart(_) => {
                    return Err(GrammarError::UnexpectedDomainStart { position: d.position })
                }
                DirectiveKind::Interpolate(label) => {
                    let node = builder.new_node("", label.trim().to_string(), None, Origin::Interpolated, d.position);
                    builder.open(node, None, Placement::SiblingOfCurrent);
                }
                DirectiveKind::Note(text) => {
                    let follows_instance = matches!(previous, Some(Token::Span(s)) if s.style == Style::Italic);
                    let target = builder
                        .stack
                        .last()
                        .and_then(|&top| builder.drafts[top].node.instances.last_mut())
                        .filter(|_| follows_instance);
                    match target {
                        Some(inst) => {
                            let text = text.trim();
                            inst.emendation = Some(match inst.emendation.take() {
                                Some(prev) => format!("{prev}; {text}"),
                                None => text.to_string(),
                            });
                        }
                        None => notes.push(text.trim().to_string()),
                    }
                }
            },
        }
        previous = Some(token);
    }

    let (facets, warnings) = builder.finish()?;
    Ok(DomainParseTree {
        source_name: doc.source_name.clone(),
        headword,
        position,
        alt_name,
        scope_areas,
        facets,
        topic_breaks,
        notes,
        warnings,
    })
}

/// Parses every `@domain{}` entry of a (possibly concatenated) document.
pub fn parse_document(doc: &TranscriptDocument, config: &GrammarConfig) -> Result<Vec<DomainParseTree>, GrammarError> {
    doc.entries().iter().map(|entry| parse_entry(entry, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::entry_concept_census;
    use crate::transcript::lex;

    fn parse(src: &str) -> Result<DomainParseTree, GrammarError> {
        parse_entry(&lex(src).unwrap(), &GrammarConfig::default())
    }

    const LAW: &str = "@domain{LAW} roman{publish'd in} italic{Act}, italic{Statute}, italic{Charter}, \
        italic{Rescript}, italic{Constitution}, italic{Decretal}, italic{Senatus-consultum}, \
        italic{Pragmatic Sanction}, &c.";

    #[test]
    fn law_fragment() {
        let tree = parse(LAW).unwrap();
        assert_eq!(tree.facets.len(), 1);
        let facet = &tree.facets[0];
        assert_eq!(facet.connective, "publish'd in");
        assert_eq!(facet.instances.len(), 8);
        assert!(facet.instances.iter().all(|i| i.open_ended));
        let census = entry_concept_census(&tree);
        assert_eq!((census.instances, census.facets, census.open_ended_lists), (8, 1, 1));
    }

    #[test]
    fn headword_only() {
        let tree = parse("@domain{OPTICKS}").unwrap();
        assert_eq!(tree.headword, "OPTICKS");
        assert!(tree.facets.is_empty());
        assert_eq!(entry_concept_census(&tree), Default::default());
    }

    #[test]
    fn head_alternate_name() {
        let tree = parse("@domain{MINEROLOGY} roman{, or the} italic{History of EARTH} ; @ord{1}, roman{Its Parts, as} italic{Bog}.")
            .unwrap();
        assert_eq!(tree.alt_name.as_deref(), Some("History of EARTH"));
        assert!(tree.scope_areas.is_empty());
        assert_eq!(tree.facets[0].ordinal_section, Some(1));
        assert!(!tree.facets[0].instances[0].open_ended);
    }

    #[test]
    fn head_scope_areas() {
        let tree = parse(
            "@domain{MATHEMATICKS} roman{, including} sc{Arithmetick}, sc{Geometry}, roman{and} sc{Opticks} ; \
             sc{Geometry} italic{Line}, italic{Angle}, &c.",
        )
        .unwrap();
        assert_eq!(tree.scope_areas, vec!["Arithmetick", "Geometry", "Opticks"]);
        assert_eq!(tree.facets[0].facet_label, "Geometry");
        assert!(tree.warnings.is_empty());
    }

    #[test]
    fn body_small_caps_warns() {
        let tree = parse("@domain{X} sc{Astronomy} italic{Star}.").unwrap();
        assert_eq!(tree.warnings.len(), 1);
        assert_eq!(tree.facets[0].facet_label, "Astronomy");
    }

    #[test]
    fn nesting_by_cue_and_parallel_cues() {
        let tree = parse(
            "@domain{THEOLOGY} roman{Heathen} ; roman{Their} italic{Idolatry}, italic{Theogony}, &c. \
             roman{Their Gods} ; italic{Penates}, &c.",
        )
        .unwrap();
        assert_eq!(tree.facets.len(), 1);
        let heathen = &tree.facets[0];
        let labels: Vec<_> = heathen.children.iter().map(|c| c.facet_label.as_str()).collect();
        assert_eq!(labels, vec!["Their", "Gods"]);
    }

    #[test]
    fn non_cue_connective_returns_to_entry_level() {
        let tree = parse(
            "@domain{M} roman{Its Parts, as} italic{Bog} ; roman{and their Phænomena, as} italic{Volcano}, &c. \
             roman{Its Strata, as} italic{Clay}, &c.",
        )
        .unwrap();
        assert_eq!(tree.facets.len(), 2);
        assert_eq!(tree.facets[0].children[0].facet_label, "Phænomena");
        assert_eq!(tree.facets[1].facet_label, "Strata");
    }

    #[test]
    fn grouping_after_terminator() {
        let tree = parse("@domain{M} roman{Gems, as} italic{Diamond}, italic{Ruby}, &c. italic{Emery}, italic{Lapis}.").unwrap();
        let gems = &tree.facets[0];
        assert_eq!(gems.groups().len(), 2);
        assert!(gems.instances[..2].iter().all(|i| i.open_ended && i.group == 1));
        assert!(gems.instances[2..].iter().all(|i| !i.open_ended && i.group == 2));
        assert_eq!(entry_concept_census(&tree).open_ended_lists, 1);
    }

    #[test]
    fn facet_alternate_label() {
        let tree = parse("@domain{M} @ord{2}, roman{Fossils or Minerals, as} italic{Gold}, &c.").unwrap();
        let f = &tree.facets[0];
        assert_eq!(f.facet_label, "Fossils");
        assert_eq!(f.alt_label.as_deref(), Some("Minerals"));
        assert_eq!(f.ordinal_section, Some(2));
    }

    #[test]
    fn long_dash_closes_facets_and_collapses() {
        let tree = parse(
            "@domain{T} roman{Christian} ; roman{Their Rites} italic{Baptism}. \u{2014} \u{2014} roman{Jewish} ; roman{Their Sects} italic{Pharisee}.",
        )
        .unwrap();
        assert_eq!(tree.facets.len(), 2);
        assert_eq!(tree.topic_breaks.len(), 1);
        // after the dash a bare instance has no facet
        let err = parse("@domain{T} roman{Christian} italic{Baptism}. \u{2014} italic{Pharisee}.").unwrap_err();
        assert!(matches!(err, GrammarError::OrphanInstance { label, .. } if label == "Pharisee"));
    }

    #[test]
    fn interpolation_is_sibling_of_current_facet() {
        let tree = parse(
            "@domain{T} roman{Heathen} ; roman{Their Gods} ; italic{Demon}, italic{Genius}, &c. \
             @interp{Rites} italic{Apotheosis}, italic{Sacrifice}, &c. italic{Feast}, &c.",
        )
        .unwrap();
        let heathen = &tree.facets[0];
        assert_eq!(heathen.children.len(), 2);
        let rites = &heathen.children[1];
        assert_eq!(rites.origin, Origin::Interpolated);
        assert_eq!(rites.instances.len(), 3);
        assert_eq!(heathen.children[0].instances.last().unwrap().label, "Genius");
    }

    #[test]
    fn note_after_instance_is_emendation() {
        let tree = parse("@domain{M} roman{and their Phænomena, as} italic{Earthquake} @note{printed \"Earth, quake\"}, italic{Volcano}, &c. @note{checked against plate}")
            .unwrap();
        let f = &tree.facets[0];
        assert_eq!(f.instances[0].emendation.as_deref(), Some("printed \"Earth, quake\""));
        assert_eq!(f.instances[1].emendation, None);
        assert_eq!(tree.notes, vec!["checked against plate"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("@domain{X} roman{Its Parts, as}").unwrap_err(),
            GrammarError::DanglingConnective { connective, .. } if connective == "Its Parts, as"
        ));
        assert!(matches!(
            parse("@domain{X} @interp{Rites}").unwrap_err(),
            GrammarError::DanglingConnective { .. }
        ));
        assert!(matches!(
            parse("@domain{X} italic{Bog}").unwrap_err(),
            GrammarError::OrphanInstance { .. }
        ));
        assert!(matches!(
            parse_entry(&lex("italic{Bog}").unwrap(), &GrammarConfig::default()).unwrap_err(),
            GrammarError::NotAnEntry { .. }
        ));
        assert!(matches!(
            parse("@domain{X} @domain{Y}").unwrap_err(),
            GrammarError::UnexpectedDomainStart { .. }
        ));
    }

    #[test]
    fn stray_et_cetera_warns() {
        let tree = parse("@domain{X} roman{Salts, as} &c. italic{Nitre}.").unwrap();
        assert_eq!(tree.warnings.len(), 1);
    }

    #[test]
    fn custom_cue_config() {
        let config = GrammarConfig::parse("nesting_cues = hence").unwrap();
        let doc = lex("@domain{X} roman{Salts, as} italic{Nitre}. roman{hence} italic{Glass}.").unwrap();
        let tree = parse_entry(&doc, &config).unwrap();
        assert_eq!(tree.facets.len(), 1);
        assert_eq!(tree.facets[0].children[0].instances[0].label, "Glass");
    }
}
