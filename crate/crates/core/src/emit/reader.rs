//! Reads back Turtle in exactly the shape `emit_skos` writes: prefixed
//! names, IRIs, plain or `@en` literals, `true`, and `;`/`,` lists. Anything
//! else (blank nodes, collections, numbers, unknown predicates) is rejected.

use std::collections::{BTreeMap, BTreeSet};

use super::{EmitError, DCTERMS, SKOS};
use crate::kos::{Concept, ConceptId, ConceptKind, ConceptScheme, Origin, Relation, RelationKind};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Prefix,
    Iri(String),
    PName(String, String),
    Literal(String, Option<String>),
    True,
    A,
    Dot,
    Semi,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Object {
    Iri(String),
    Literal(String),
    True,
}

fn outside(line: usize, detail: impl Into<String>) -> EmitError {
    EmitError::OutsideProfile {
        line,
        detail: detail.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, EmitError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut out = Vec::new();
    let name_char = |c: char| c.is_alphanumeric() || "_-.".contains(c);
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '.' => {
                out.push((Tok::Dot, line));
                i += 1;
            }
            ';' => {
                out.push((Tok::Semi, line));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, line));
                i += 1;
            }
            '<' => {
                let end = chars[i..].iter().position(|&c| c == '>' || c == '\n').map(|p| i + p);
                match end {
                    Some(e) if chars[e] == '>' => {
                        out.push((Tok::Iri(chars[i + 1..e].iter().collect()), line));
                        i = e + 1;
                    }
                    _ => return Err(outside(line, "unterminated IRI")),
                }
            }
            '"' => {
                let mut value = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(outside(line, "unterminated literal")),
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('r') => '\r',
                                Some('t') => '\t',
                                other => return Err(outside(line, format!("escape \\{}", other.copied().unwrap_or(' ')))),
                            };
                            value.push(esc);
                            i += 2;
                        }
                        Some(&c) => {
                            value.push(c);
                            i += 1;
                        }
                    }
                }
                i += 1;
                let lang = if chars.get(i) == Some(&'@') {
                    let start = i + 1;
                    i = start;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '-') {
                        i += 1;
                    }
                    Some(chars[start..i].iter().collect())
                } else if chars.get(i) == Some(&'^') {
                    return Err(outside(line, "typed literal"));
                } else {
                    None
                };
                out.push((Tok::Literal(value, lang), line));
            }
            '@' => {
                let word: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_alphabetic()).collect();
                if word != "prefix" {
                    return Err(outside(line, format!("directive @{word}")));
                }
                out.push((Tok::Prefix, line));
                i += 1 + word.len();
            }
            c if c.is_alphabetic() || c == ':' => {
                let start = i;
                while i < chars.len() && (name_char(chars[i]) || chars[i] == ':') {
                    i += 1;
                }
                // a trailing '.' ends the statement, not the name
                while i > start && chars[i - 1] == '.' {
                    i -= 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "a" => Tok::A,
                    "true" => Tok::True,
                    _ => match word.split_once(':') {
                        Some((p, l)) => Tok::PName(p.to_string(), l.to_string()),
                        None => return Err(outside(line, format!("unexpected {word:?}"))),
                    },
                };
                out.push((tok, line));
            }
            other => return Err(outside(line, format!("unexpected {other:?}"))),
        }
    }
    Ok(out)
}

type Triples = BTreeMap<String, BTreeMap<String, BTreeSet<Object>>>;

fn parse_triples(tokens: &[(Tok, usize)]) -> Result<Triples, EmitError> {
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut triples: Triples = BTreeMap::new();
    let mut pos = 0;
    let last_line = tokens.last().map_or(1, |t| t.1);
    let next = |pos: &mut usize| -> Result<(Tok, usize), EmitError> {
        let t = tokens.get(*pos).cloned().ok_or_else(|| outside(last_line, "unexpected end of input"))?;
        *pos += 1;
        Ok(t)
    };
    let expand = |prefixes: &BTreeMap<String, String>, tok: Tok, line: usize| -> Result<String, EmitError> {
        match tok {
            Tok::Iri(i) => Ok(i),
            Tok::PName(p, l) => prefixes
                .get(&p)
                .map(|ns| format!("{ns}{l}"))
                .ok_or_else(|| outside(line, format!("undeclared prefix {p}:"))),
            Tok::A => Ok(RDF_TYPE.to_string()),
            other => Err(outside(line, format!("expected an IRI, found {other:?}"))),
        }
    };

    while pos < tokens.len() {
        let (tok, line) = next(&mut pos)?;
        if tok == Tok::Prefix {
            let (name, l) = next(&mut pos)?;
            let (ns, _) = next(&mut pos)?;
            match (name, ns, next(&mut pos)?.0) {
                (Tok::PName(p, local), Tok::Iri(ns), Tok::Dot) if local.is_empty() => {
                    prefixes.insert(p, ns);
                }
                _ => return Err(outside(l, "malformed @prefix")),
            }
            continue;
        }
        let subject = match tok {
            Tok::Iri(_) | Tok::PName(..) => expand(&prefixes, tok, line)?,
            other => return Err(outside(line, format!("expected a subject, found {other:?}"))),
        };
        loop {
            let (p, pline) = next(&mut pos)?;
            let predicate = expand(&prefixes, p, pline)?;
            loop {
                let (o, oline) = next(&mut pos)?;
                let object = match o {
                    Tok::Literal(v, _) => Object::Literal(v),
                    Tok::True => Object::True,
                    other => Object::Iri(expand(&prefixes, other, oline)?),
                };
                triples
                    .entry(subject.clone())
                    .or_default()
                    .entry(predicate.clone())
                    .or_default()
                    .insert(object);
                match next(&mut pos)? {
                    (Tok::Comma, _) => continue,
                    (t, l) => {
                        pos -= 1;
                        if !matches!(t, Tok::Semi | Tok::Dot) {
                            return Err(outside(l, format!("expected ',', ';' or '.', found {t:?}")));
                        }
                        break;
                    }
                }
            }
            match next(&mut pos)?.0 {
                Tok::Semi => continue,
                _ => break,
            }
        }
    }
    Ok(triples)
}

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Rebuilds a scheme from `emit_skos` output. Editorial notes come back in
/// sorted order, since RDF carries no order.
pub fn read_turtle_subset(text: &str) -> Result<ConceptScheme, EmitError> {
    let triples = parse_triples(&tokenize(text)?)?;
    let skos = |l: &str| format!("{SKOS}{l}");
    let is_a = |s: &str, class: &str| {
        triples
            .get(s)
            .and_then(|p| p.get(RDF_TYPE))
            .is_some_and(|o| o.contains(&Object::Iri(skos(class))))
    };

    // find the vocab namespace from the conceptKind predicate
    let vocab_preds = ["conceptKind", "domain", "interpolated", "openEnded", "connective"];
    let known: BTreeSet<String> = [
        "prefLabel", "altLabel", "broader", "narrower", "related", "editorialNote", "inScheme", "topConceptOf",
        "hasTopConcept",
    ]
    .iter()
    .map(|l| skos(l))
    .chain([RDF_TYPE.to_string(), format!("{DCTERMS}identifier")])
    .collect();
    let is_vocab = |p: &str| {
        vocab_preds
            .iter()
            .any(|v| p.strip_suffix(v).is_some_and(|ns| ns.ends_with("vocab#")))
    };

    let mut ids: BTreeMap<&str, ConceptId> = BTreeMap::new();
    let mut schemes = 0;
    for (subject, preds) in &triples {
        for p in preds.keys() {
            if !known.contains(p) && !is_vocab(p) {
                return Err(outside(0, format!("unknown predicate <{p}>")));
            }
        }
        if is_a(subject, "ConceptScheme") {
            schemes += 1;
        } else if is_a(subject, "Concept") {
            let id = single_literal(preds, &format!("{DCTERMS}identifier"), subject)?;
            ids.insert(subject, ConceptId::new(id));
        } else {
            return Err(outside(0, format!("<{subject}> is neither a skos:Concept nor the scheme")));
        }
    }
    if schemes != 1 {
        return Err(outside(0, format!("expected one skos:ConceptScheme, found {schemes}")));
    }

    let lookup = |iri: &str| ids.get(iri).cloned().ok_or_else(|| outside(0, format!("<{iri}> is not a concept")));
    let mut scheme = ConceptScheme::default();
    for (subject, id) in &ids {
        let preds = &triples[*subject];
        let vocab = |local: &str| preds.iter().find(|(p, _)| is_vocab(p) && p.ends_with(local)).map(|(_, o)| o);
        let literals = |objs: Option<&BTreeSet<Object>>| -> Vec<String> {
            objs.into_iter()
                .flatten()
                .filter_map(|o| match o {
                    Object::Literal(v) => Some(v.clone()),
                    _ => None,
                })
                .collect()
        };
        let kind_text = literals(vocab("#conceptKind"));
        let kind = kind_text
            .first()
            .and_then(|k| ConceptKind::parse(k))
            .ok_or_else(|| outside(0, format!("<{subject}> lacks a valid conceptKind")))?;
        let pref = single_literal(preds, &skos("prefLabel"), subject)?;
        let mut c = Concept::new(id.clone(), pref, String::new(), kind);
        c.domains = literals(vocab("#domain")).into_iter().collect();
        c.alt_labels = literals(preds.get(&skos("altLabel"))).into_iter().collect();
        c.notes = literals(preds.get(&skos("editorialNote")));
        c.connective = literals(vocab("#connective")).into_iter().next();
        c.open_ended = vocab("#openEnded").is_some_and(|o| o.contains(&Object::True));
        if vocab("#interpolated").is_some_and(|o| o.contains(&Object::True)) {
            c.origin = Origin::Interpolated;
        }
        if preds.contains_key(&skos("topConceptOf")) {
            scheme.top_concepts.insert(id.clone());
        }
        for (local, kind) in [
            ("broader", RelationKind::Broader),
            ("narrower", RelationKind::Narrower),
            ("related", RelationKind::Related),
        ] {
            for o in preds.get(&skos(local)).into_iter().flatten() {
                match o {
                    Object::Iri(target) => {
                        scheme.relations.insert(Relation::new(id.clone(), kind, lookup(target)?));
                    }
                    _ => return Err(outside(0, format!("skos:{local} of <{subject}> is not an IRI"))),
                }
            }
        }
        scheme.insert(c);
    }
    Ok(scheme)
}

fn single_literal(preds: &BTreeMap<String, BTreeSet<Object>>, p: &str, subject: &str) -> Result<String, EmitError> {
    match preds.get(p).map(|o| o.iter().collect::<Vec<_>>()).as_deref() {
        Some([Object::Literal(v)]) => Ok(v.clone()),
        _ => Err(outside(0, format!("<{subject}> needs exactly one literal <{p}>"))),
    }
}
