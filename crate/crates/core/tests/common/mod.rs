//! Generators and independent oracles shared by the property tests and the
//! acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;

use chambers_kos::grammar::{parse_document, GrammarConfig};
use chambers_kos::kos::{build_scheme, ConceptScheme};
use chambers_kos::transcript::lex;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn scheme_of(src: &str) -> ConceptScheme {
    let doc = lex(src).expect("lexes");
    build_scheme(&parse_document(&doc, &GrammarConfig::default()).expect("parses")).expect("builds")
}

pub const HEADWORDS: &[&str] = &["MINEROLOGY", "THEOLOGY", "LAW", "GEOMETRY", "MEDICINE", "HERALDRY"];

pub const CONNECTIVES: &[&str] = &[
    "Its Parts, as",
    "Its Kinds, as",
    "and their Phænomena, as",
    "Their Gods",
    "Ministers thereof",
    "with Operations relating to 'em, as",
    "publish'd in",
    "Salts, as",
    "whence",
    "as",
    "Fossils or Minerals, as",
    "Sects ; as",
    "Games",
];

pub const WORDS: &[&str] = &[
    "Feast", "Mountain", "Sand", "Operations", "Gold", "Ruby", "Temple", "Augur", "Lares", "Bog", "Clay", "Amber",
    "Act", "Statute", "Phænomena", "Senatus-consultum", "Cornu Ammonis", "Demi-god",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Period,
    EtCetera,
    Semicolon,
}

#[derive(Debug, Clone)]
pub struct Group {
    pub items: Vec<(String, Option<String>)>,
    pub end: End,
}

#[derive(Debug, Clone)]
pub enum Lead {
    None,
    Ordinal(u32),
    Dash,
}

#[derive(Debug, Clone)]
pub enum Opener {
    Connective(String),
    Interp(String),
}

#[derive(Debug, Clone)]
pub struct Segment {
    pub lead: Lead,
    pub opener: Opener,
    pub groups: Vec<Group>,
}

#[derive(Debug, Clone)]
pub struct EntrySpec {
    pub headword: String,
    pub alt_name: Option<String>,
    pub segments: Vec<Segment>,
}

impl EntrySpec {
    pub fn render(&self) -> String {
        let mut out = format!("@domain{{{}}}", self.headword);
        if let Some(alt) = &self.alt_name {
            out.push_str(&format!(" roman{{, or the}} italic{{{alt}}};"));
        }
        for seg in &self.segments {
            match seg.lead {
                Lead::None => {}
                Lead::Ordinal(n) => out.push_str(&format!(" @ord{{{n}}},")),
                Lead::Dash => out.push_str(" \u{2014}"),
            }
            match &seg.opener {
                Opener::Connective(c) => out.push_str(&format!(" roman{{{c}}}")),
                Opener::Interp(l) => out.push_str(&format!(" @interp{{{l}}}")),
            }
            for g in &seg.groups {
                let items: Vec<String> = g
                    .items
                    .iter()
                    .map(|(label, note)| match note {
                        Some(n) => format!("italic{{{label}}} @note{{{n}}}"),
                        None => format!("italic{{{label}}}"),
                    })
                    .collect();
                out.push(' ');
                out.push_str(&items.join(", "));
                out.push_str(match g.end {
                    End::Period => ".",
                    End::EtCetera => ", &c.",
                    End::Semicolon => ";",
                });
            }
        }
        out
    }

    pub fn instance_count(&self) -> usize {
        self.segments.iter().flat_map(|s| &s.groups).map(|g| g.items.len()).sum()
    }

    pub fn italic_count(&self) -> usize {
        self.instance_count() + usize::from(self.alt_name.is_some())
    }

    pub fn interp_count(&self) -> usize {
        self.segments.iter().filter(|s| matches!(s.opener, Opener::Interp(_))).count()
    }
}

fn pick(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    prop::sample::select(pool).prop_map(str::to_string)
}

fn group(last: bool) -> impl Strategy<Value = Group> {
    let item = (pick(WORDS), prop::option::weighted(0.1, Just("checked against the plate".to_string())));
    let end = if last {
        prop_oneof![Just(End::Period), Just(End::EtCetera), Just(End::Semicolon)].boxed()
    } else {
        prop_oneof![Just(End::Period), Just(End::EtCetera)].boxed()
    };
    (prop::collection::vec(item, 1..6), end).prop_map(|(items, end)| Group { items, end })
}

fn segment() -> impl Strategy<Value = Segment> {
    let lead = prop_oneof![6 => Just(Lead::None), 1 => (1u32..4).prop_map(Lead::Ordinal), 1 => Just(Lead::Dash)];
    let opener = prop_oneof![
        5 => pick(CONNECTIVES).prop_map(Opener::Connective),
        1 => pick(&["Rites", "Ministers", "Kinds"]).prop_map(Opener::Interp),
    ];
    let groups = (prop::collection::vec(group(false), 0..3), group(true)).prop_map(|(mut g, last)| {
        g.push(last);
        g
    });
    (lead, opener, groups).prop_map(|(lead, opener, groups)| Segment { lead, opener, groups })
}

pub fn entry(headword: &'static str) -> impl Strategy<Value = EntrySpec> {
    (
        prop::option::of(pick(&["History of EARTH", "Divinity", "Jurisprudence"])),
        prop::collection::vec(segment(), 0..7),
    )
        .prop_map(move |(alt_name, segments)| EntrySpec {
            headword: headword.to_string(),
            alt_name,
            segments,
        })
}

/// One to four entries with distinct headwords.
pub fn document() -> impl Strategy<Value = Vec<EntrySpec>> {
    prop::sample::subsequence(HEADWORDS, 1..=4)
        .prop_flat_map(|hws| hws.into_iter().map(entry).collect::<Vec<_>>())
}

pub fn render_document(entries: &[EntrySpec]) -> String {
    entries.iter().map(EntrySpec::render).collect::<Vec<_>>().join("\n")
}

pub const TAXA: &[&str] = &[
    "Natural", "Artificial", "Sensible", "Rational", "Internal", "External", "Meteorology", "Hydrology", "Minerology",
    "Phytology", "Zoology", "Theology", "Law", "Optics", "Heraldry", "Agriculture", "Pharmacy", "Chymistry",
    "Geometry", "Medicine", "Poetry", "Grammar", "Rhetoric", "Logic", "Ethics", "Heraldry", "Optics",
];

/// An outline with "Knowledge" at depth 0 and every later line at most one
/// level deeper than the one before, down to depth 6.
pub fn outline() -> impl Strategy<Value = String> {
    prop::collection::vec((1usize..=6, prop::sample::select(TAXA)), 0..150).prop_map(|lines| {
        let mut out = String::from("Knowledge\n");
        let mut prev = 0;
        for (want, label) in lines {
            let depth = want.min(prev + 1);
            out.push_str(&"  ".repeat(depth));
            out.push_str(label);
            out.push('\n');
            prev = depth;
        }
        out
    })
}

/// Leaf labels of an outline and how often each occurs, read straight from
/// the indentation: a line is a leaf unless the next line is deeper.
pub fn brute_force_leaf_counts(outline: &str) -> BTreeMap<String, usize> {
    let lines: Vec<(usize, &str)> = outline
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| (l.len() - l.trim_start().len(), l.trim()))
        .collect();
    let mut counts = BTreeMap::new();
    for (i, (indent, label)) in lines.iter().enumerate() {
        let is_leaf = lines.get(i + 1).is_none_or(|(next, _)| next <= indent);
        if is_leaf {
            let label = label.split('|').next().unwrap().trim().to_string();
            *counts.entry(label).or_insert(0) += 1;
        }
    }
    counts
}
