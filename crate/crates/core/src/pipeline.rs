//! The whole compile, from transcripts to Turtle and a text report.
//!
//! [`compile`] works on in-memory sources; [`run_pipeline`] adds file reading
//! and writing around it. Each stage records diagnostics and the run stops
//! after the first stage that reports an error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostic::{Diagnostic, Position};
use crate::disambig::{apply_decisions, parse_decisions, ApplicationReport, Outcome};
use crate::emit::{emit_owl, emit_skos_with, FacetMode, IriPolicy, OwlStrategy};
use crate::grammar::{entry_concept_census, parse_document, DomainParseTree, GrammarConfig};
use crate::kos::{build_scheme, check_scheme, find_homonyms, ConceptKind, ConceptScheme};
use crate::taxonomy::{link_leaves, parse_taxonomy, validate_jepd, JepdViolation, LeafLinkReport};
use crate::transcript::{lex_source, validate_transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OwlMode {
    #[default]
    Direct,
    Axiom,
    None,
}

impl OwlMode {
    pub fn strategy(self) -> Option<OwlStrategy> {
        match self {
            OwlMode::Direct => Some(OwlStrategy::DirectMap),
            OwlMode::Axiom => Some(OwlStrategy::AxiomBased),
            OwlMode::None => None,
        }
    }
}

/// A named input text. The name is what diagnostics print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Source {
            name: name.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub transcripts: Vec<Source>,
    pub taxonomy: Option<Source>,
    pub decisions: Option<Source>,
    pub grammar_config: Option<Source>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub base_iri: String,
    pub owl_mode: OwlMode,
    pub facet_mode: FacetMode,
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub skos: String,
    pub owl: Option<String>,
    pub report: String,
    pub trees: Vec<DomainParseTree>,
    pub scheme: ConceptScheme,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub diagnostics: Vec<Diagnostic>,
    /// `None` when a stage failed.
    pub artifacts: Option<Artifacts>,
}

/// 0 clean, 1 warnings only, 2 errors.
pub fn exit_code(diagnostics: &[Diagnostic]) -> u8 {
    if diagnostics.iter().any(Diagnostic::is_error) {
        2
    } else if diagnostics.is_empty() {
        0
    } else {
        1
    }
}

impl Compiled {
    pub fn exit_code(&self) -> u8 {
        exit_code(&self.diagnostics)
    }
}

fn line_pos(line: usize) -> Option<Position> {
    Some(Position::new(line as u32, 1))
}

/// Loads the grammar settings; `None` source means defaults.
pub fn load_grammar_config(source: Option<&Source>, diags: &mut Vec<Diagnostic>) -> Option<GrammarConfig> {
    match source {
        None => Some(GrammarConfig::default()),
        Some(src) => match GrammarConfig::parse(&src.text) {
            Ok(c) => Some(c),
            Err(e) => {
                diags.push(Diagnostic::error(&src.name, line_pos(e.line), e.message));
                None
            }
        },
    }
}

/// Lexes, validates and parses every transcript. Returns `None` if any
/// error was recorded; grammar warnings are recorded either way.
pub fn parse_sources(
    transcripts: &[Source],
    config: &GrammarConfig,
    diags: &mut Vec<Diagnostic>,
) -> Option<Vec<DomainParseTree>> {
    let mut trees = Vec::new();
    let mut failed = false;
    for src in transcripts {
        let doc = match lex_source(&src.name, &src.text) {
            Ok(doc) => doc,
            Err(e) => {
                diags.push(e.to_diagnostic(&src.name));
                failed = true;
                continue;
            }
        };
        let problems = validate_transcript(&doc);
        if problems.iter().any(Diagnostic::is_error) {
            diags.extend(problems);
            failed = true;
            continue;
        }
        diags.extend(problems);
        match parse_document(&doc, config) {
            Ok(parsed) => {
                for tree in &parsed {
                    diags.extend(tree.warnings.iter().cloned());
                }
                trees.extend(parsed);
            }
            Err(e) => {
                diags.push(e.to_diagnostic(&src.name));
                failed = true;
            }
        }
    }
    (!failed).then_some(trees)
}

/// Builds and checks the scheme.
pub fn build_stage(trees: &[DomainParseTree], diags: &mut Vec<Diagnostic>) -> Option<ConceptScheme> {
    match build_scheme(trees) {
        Ok(scheme) => {
            let problems = check_scheme(&scheme);
            let ok = problems.is_empty();
            diags.extend(problems);
            ok.then_some(scheme)
        }
        Err(e) => {
            diags.push(Diagnostic::error("scheme", None, e.to_string()));
            None
        }
    }
}

/// Tab-separated homonym table: a header, then one row per ambiguous label.
pub fn cmd_report_homonyms(scheme: &ConceptScheme) -> String {
    let mut out = String::from("label\toccurrences\tconcepts\tdomains\tfacet paths\n");
    for record in find_homonyms(scheme) {
        let join = |f: &dyn Fn(&crate::kos::Occurrence) -> String| {
            record.occurrences.iter().map(f).collect::<Vec<_>>().join("; ")
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            record.label,
            record.occurrences.len(),
            join(&|o| o.id.to_string()),
            join(&|o| o.domains.join(", ")),
            join(&|o| o.facet_path.join(" > ")),
        );
    }
    out
}

struct Findings<'a> {
    trees: &'a [DomainParseTree],
    scheme: &'a ConceptScheme,
    decisions: Option<&'a ApplicationReport>,
    jepd: Option<&'a [JepdViolation]>,
    links: Option<&'a LeafLinkReport>,
    diagnostics: &'a [Diagnostic],
}

fn section(out: &mut String, title: &str) {
    let _ = write!(out, "\n{title}\n{}\n", "-".repeat(title.chars().count()));
}

fn render_report(f: &Findings) -> String {
    let mut out = String::from("Compilation report\n==================\n");

    section(&mut out, "Entries");
    let mut trees: Vec<&DomainParseTree> = f.trees.iter().collect();
    trees.sort_by(|a, b| a.headword.cmp(&b.headword));
    for t in trees {
        let c = entry_concept_census(t);
        let _ = writeln!(
            out,
            "{} ({}): {} instances, {} facets, {} open-ended lists",
            t.headword, t.source_name, c.instances, c.facets, c.open_ended_lists
        );
    }
    let s = f.scheme;
    let _ = writeln!(
        out,
        "scheme: {} concepts ({} headwords, {} facets, {} instances), {} relations",
        s.concepts.len(),
        s.count_kind(ConceptKind::Headword),
        s.count_kind(ConceptKind::Facet),
        s.count_kind(ConceptKind::Instance),
        s.relations.len()
    );

    section(&mut out, "Homonyms");
    out.push_str(&cmd_report_homonyms(s));

    section(&mut out, "Decisions");
    match f.decisions {
        None => out.push_str("no decisions file\n"),
        Some(report) if report.outcomes.is_empty() => out.push_str("no decisions\n"),
        Some(report) => {
            for o in &report.outcomes {
                let _ = writeln!(out, "{o}");
            }
        }
    }
    let unresolved = find_homonyms(s);
    let _ = writeln!(out, "unresolved homonyms: {}", unresolved.len());

    section(&mut out, "JEPD");
    match f.jepd {
        None => out.push_str("no taxonomy\n"),
        Some([]) => out.push_str("pairwise disjoint: no repeated leaf labels\n"),
        Some(violations) => {
            for v in violations {
                let _ = writeln!(out, "{v}");
            }
        }
    }
    out.push_str("joint exhaustiveness is not checked\n");

    section(&mut out, "Leaf links");
    match f.links {
        None => out.push_str("no taxonomy\n"),
        Some(links) => {
            let _ = writeln!(
                out,
                "{} matched, {} unmatched leaves, {} unmatched headwords",
                links.matched.len(),
                links.unmatched_leaves.len(),
                links.unmatched_headwords.len()
            );
            for (leaf, id) in &links.matched {
                let _ = writeln!(out, "matched {leaf} -> {id}");
            }
            for leaf in &links.unmatched_leaves {
                let _ = writeln!(out, "unmatched leaf {leaf}");
            }
            for id in &links.unmatched_headwords {
                let _ = writeln!(out, "unmatched headword {id}");
            }
        }
    }

    section(&mut out, "Diagnostics");
    for d in f.diagnostics {
        let _ = writeln!(out, "{d}");
    }
    let errors = f.diagnostics.iter().filter(|d| d.is_error()).count();
    let _ = writeln!(out, "{errors} errors, {} warnings", f.diagnostics.len() - errors);
    out
}

pub fn compile(inputs: &Inputs, settings: &Settings) -> Compiled {
    let mut diags = Vec::new();
    let artifacts = compile_stages(inputs, settings, &mut diags);
    Compiled {
        diagnostics: diags,
        artifacts,
    }
}

fn compile_stages(inputs: &Inputs, settings: &Settings, diags: &mut Vec<Diagnostic>) -> Option<Artifacts> {
    if inputs.transcripts.is_empty() {
        diags.push(Diagnostic::error("-", None, "no transcript given"));
        return None;
    }
    let policy = match IriPolicy::new(&settings.base_iri) {
        Ok(p) => p,
        Err(e) => {
            diags.push(Diagnostic::error("--base-iri", None, e.to_string()));
            return None;
        }
    };
    let config = load_grammar_config(inputs.grammar_config.as_ref(), diags)?;
    let trees = parse_sources(&inputs.transcripts, &config, diags)?;
    let built = build_stage(&trees, diags)?;

    let (scheme, decision_report) = match &inputs.decisions {
        None => (built, None),
        Some(src) => {
            let set = match parse_decisions(&src.name, &src.text) {
                Ok(set) => set,
                Err(e) => {
                    diags.push(Diagnostic::error(&src.name, line_pos(e.line()), e.to_string()));
                    return None;
                }
            };
            match apply_decisions(&built, &set) {
                Ok((scheme, report)) => {
                    for o in &report.outcomes {
                        if matches!(o.outcome, Outcome::UnknownLabel | Outcome::Ignored(_)) {
                            diags.push(Diagnostic::warning(&src.name, None, o.to_string()));
                        }
                    }
                    (scheme, Some(report))
                }
                Err(e) => {
                    diags.push(Diagnostic::error(&src.name, None, e.to_string()));
                    return None;
                }
            }
        }
    };
    let problems = check_scheme(&scheme);
    if !problems.is_empty() {
        diags.extend(problems);
        return None;
    }
    for record in find_homonyms(&scheme) {
        diags.push(Diagnostic::warning(
            "scheme",
            None,
            format!("unresolved homonym {:?} ({} occurrences)", record.label, record.occurrences.len()),
        ));
    }

    let tree = match &inputs.taxonomy {
        None => None,
        Some(src) => match parse_taxonomy(&src.text) {
            Ok(t) => Some((src, t)),
            Err(e) => {
                let line = e.line().and_then(line_pos);
                diags.push(Diagnostic::error(&src.name, line, e.to_string()));
                return None;
            }
        },
    };
    let jepd = tree.as_ref().map(|(_, t)| validate_jepd(t));
    let links = tree.as_ref().map(|(_, t)| link_leaves(t, &scheme));
    if let (Some((src, _)), Some(violations), Some(links)) = (&tree, &jepd, &links) {
        for v in violations {
            diags.push(Diagnostic::warning(&src.name, None, format!("JEPD: {v}")));
        }
        for leaf in &links.unmatched_leaves {
            diags.push(Diagnostic::warning(&src.name, None, format!("leaf {leaf:?} matches no headword")));
        }
        for id in &links.unmatched_headwords {
            diags.push(Diagnostic::warning(&src.name, None, format!("headword {id} matches no leaf")));
        }
    }

    let skos = match emit_skos_with(&scheme, &policy, settings.facet_mode) {
        Ok(s) => s,
        Err(e) => {
            diags.push(Diagnostic::error("emit", None, e.to_string()));
            return None;
        }
    };
    let owl = match (settings.owl_mode.strategy(), &tree) {
        (None, _) => None,
        (Some(_), None) => {
            diags.push(Diagnostic::warning("-", None, "no taxonomy given; OWL output skipped"));
            None
        }
        (Some(strategy), Some((src, t))) => match emit_owl(&scheme, t, strategy, &policy) {
            Ok(o) => Some(o),
            Err(e) => {
                diags.push(Diagnostic::error(&src.name, None, e.to_string()));
                return None;
            }
        },
    };

    let report = render_report(&Findings {
        trees: &trees,
        scheme: &scheme,
        decisions: decision_report.as_ref(),
        jepd: jepd.as_deref(),
        links: links.as_ref(),
        diagnostics: diags,
    });
    Some(Artifacts {
        skos,
        owl,
        report,
        trees,
        scheme,
    })
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub transcript_paths: Vec<PathBuf>,
    pub taxonomy_path: Option<PathBuf>,
    pub decisions_path: Option<PathBuf>,
    pub grammar_config_path: Option<PathBuf>,
    pub base_iri: String,
    pub owl_mode: OwlMode,
    pub facet_mode: FacetMode,
    /// `None` prints the report instead of writing files.
    pub output_dir: Option<PathBuf>,
    /// File stem of the outputs.
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub exit_code: u8,
    pub diagnostics: Vec<Diagnostic>,
    pub report: Option<String>,
    pub written: Vec<PathBuf>,
}

pub fn read_source(path: &Path, diags: &mut Vec<Diagnostic>) -> Option<Source> {
    let name = path.display().to_string();
    match fs::read_to_string(path) {
        Ok(text) => Some(Source { name, text }),
        Err(e) => {
            diags.push(Diagnostic::error(name, None, format!("cannot read: {e}")));
            None
        }
    }
}

/// Reads the inputs, compiles, and writes `<name>.skos.ttl`,
/// `<name>.owl.ttl` (when produced) and `report.txt`. Nothing is written
/// when a stage fails.
pub fn run_pipeline(config: &PipelineConfig) -> PipelineOutcome {
    let mut diags = Vec::new();
    let read = |p: &Option<PathBuf>, diags: &mut Vec<Diagnostic>| p.as_deref().map(|p| read_source(p, diags));
    let transcripts: Vec<Option<Source>> = config.transcript_paths.iter().map(|p| read_source(p, &mut diags)).collect();
    let taxonomy = read(&config.taxonomy_path, &mut diags);
    let decisions = read(&config.decisions_path, &mut diags);
    let grammar_config = read(&config.grammar_config_path, &mut diags);
    let failed = |d: &[Diagnostic]| PipelineOutcome {
        exit_code: 2,
        diagnostics: d.to_vec(),
        report: None,
        written: Vec::new(),
    };
    if !diags.is_empty() {
        return failed(&diags);
    }
    let inputs = Inputs {
        transcripts: transcripts.into_iter().flatten().collect(),
        taxonomy: taxonomy.flatten(),
        decisions: decisions.flatten(),
        grammar_config: grammar_config.flatten(),
    };
    let settings = Settings {
        base_iri: config.base_iri.clone(),
        owl_mode: config.owl_mode,
        facet_mode: config.facet_mode,
    };
    let compiled = compile(&inputs, &settings);
    let Some(artifacts) = compiled.artifacts else {
        return failed(&compiled.diagnostics);
    };
    let mut diags = compiled.diagnostics;

    let mut written = Vec::new();
    if let Some(dir) = &config.output_dir {
        let mut files = vec![(format!("{}.skos.ttl", config.name), &artifacts.skos)];
        if let Some(owl) = &artifacts.owl {
            files.push((format!("{}.owl.ttl", config.name), owl));
        }
        files.push(("report.txt".to_string(), &artifacts.report));
        if let Err(e) = fs::create_dir_all(dir) {
            diags.push(Diagnostic::error(dir.display().to_string(), None, format!("cannot create: {e}")));
            return failed(&diags);
        }
        for (file, content) in files {
            let path = dir.join(file);
            if let Err(e) = fs::write(&path, content) {
                diags.push(Diagnostic::error(path.display().to_string(), None, format!("cannot write: {e}")));
                return failed(&diags);
            }
            written.push(path);
        }
    }
    PipelineOutcome {
        exit_code: exit_code(&diags),
        diagnostics: diags,
        report: Some(artifacts.report),
        written,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(owl_mode: OwlMode) -> Settings {
        Settings {
            base_iri: "https://example.org/chambers/".into(),
            owl_mode,
            facet_mode: FacetMode::FirstClass,
        }
    }

    fn inputs(transcript: &str) -> Inputs {
        Inputs {
            transcripts: vec![Source::new("t.txt", transcript)],
            ..Inputs::default()
        }
    }

    #[test]
    fn clean_run() {
        let mut i = inputs("@domain{LAW} roman{publish'd in} italic{Act}, italic{Statute}, &c.");
        i.taxonomy = Some(Source::new("tree.txt", "Knowledge\n  Artificial\n    Law\n"));
        let c = compile(&i, &settings(OwlMode::Direct));
        assert_eq!(c.exit_code(), 0, "{:?}", c.diagnostics);
        let a = c.artifacts.unwrap();
        assert!(a.owl.is_some());
        assert!(a.report.contains("LAW (t.txt): 2 instances, 1 facets, 1 open-ended lists"), "{}", a.report);
        assert!(a.report.ends_with("0 errors, 0 warnings\n"));
    }

    #[test]
    fn homonyms_warn() {
        let c = compile(
            &inputs("@domain{X} roman{Feasts, as} italic{Feast}. @domain{Y} roman{Rites, as} italic{Feast}."),
            &settings(OwlMode::None),
        );
        assert_eq!(c.exit_code(), 1);
        assert!(c.diagnostics[0].to_string().starts_with("WARNING scheme unresolved homonym"));
    }

    #[test]
    fn lex_error_stops() {
        let c = compile(&inputs("@domain{X} italic{Open"), &settings(OwlMode::None));
        assert_eq!(c.exit_code(), 2);
        assert!(c.artifacts.is_none());
        assert!(c.diagnostics[0].to_string().starts_with("ERROR t.txt:1:"), "{}", c.diagnostics[0]);
    }

    #[test]
    fn direct_map_refusal_is_an_error() {
        let mut i = inputs("@domain{LAW} roman{publish'd in} italic{Act}.");
        i.taxonomy = Some(Source::new("tree.txt", "Knowledge\n  A\n    Law\n  B\n    Law\n"));
        let c = compile(&i, &settings(OwlMode::Direct));
        assert_eq!(c.exit_code(), 2);
        let axiom = compile(&i, &settings(OwlMode::Axiom));
        assert_eq!(axiom.exit_code(), 1);
        assert!(axiom.artifacts.unwrap().owl.is_some());
    }

    #[test]
    fn no_transcripts() {
        assert_eq!(compile(&Inputs::default(), &settings(OwlMode::None)).exit_code(), 2);
    }

    #[test]
    fn homonym_table() {
        assert_eq!(cmd_report_homonyms(&ConceptScheme::default()).lines().count(), 1);
    }
}
