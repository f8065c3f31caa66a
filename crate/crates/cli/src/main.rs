use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chambers_kos::emit::FacetMode;
use chambers_kos::pipeline::{
    build_stage, cmd_report_homonyms, compile, exit_code, load_grammar_config, parse_sources, read_source, run_pipeline,
    Inputs, OwlMode, PipelineConfig, Settings, Source,
};
use chambers_kos::transcript::lex_source;
use chambers_kos::Diagnostic;

#[derive(Parser)]
#[command(name = "chambers", version, about = "Compile annotated Chambers transcriptions to SKOS and OWL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the token stream of each transcript
    Lex(Transcripts),
    /// Print the facet tree of each entry
    Parse(ParseArgs),
    /// Build the concept scheme and print the homonym table
    Build(BuildArgs),
    /// Run every check without writing output
    Validate(FullArgs),
    /// Write SKOS and OWL Turtle (to stdout without --out)
    Emit(FullArgs),
    /// Full pipeline: Turtle files plus report.txt
    Run(FullArgs),
}

#[derive(Args)]
struct Transcripts {
    /// Transcript files in the markup format
    #[arg(required = true)]
    transcripts: Vec<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    files: Transcripts,
    /// Nesting cues and stop words
    #[arg(long, value_name = "FILE")]
    grammar_config: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    parse: ParseArgs,
    /// Write homonyms.tsv here instead of printing it
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OwlArg {
    Direct,
    Axiom,
    None,
}

#[derive(Args)]
struct FullArgs {
    #[command(flatten)]
    parse: ParseArgs,
    #[arg(long, default_value = "https://example.org/chambers/")]
    base_iri: String,
    /// Taxonomy outline, "Knowledge" at the root
    #[arg(long, value_name = "FILE")]
    taxonomy: Option<PathBuf>,
    /// Merge/split decisions (TSV)
    #[arg(long, value_name = "FILE")]
    decisions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "direct")]
    owl: OwlArg,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Stem of the output files; defaults to the transcript's stem
    #[arg(long)]
    name: Option<String>,
    /// Fold facet concepts into notes on their instances
    #[arg(long)]
    collapse_facets: bool,
}

impl FullArgs {
    fn config(&self) -> PipelineConfig {
        let files = &self.parse.files.transcripts;
        let name = self.name.clone().unwrap_or_else(|| match files.as_slice() {
            [one] => one.file_stem().map_or("chambers".into(), |s| s.to_string_lossy().into_owned()),
            _ => "chambers".into(),
        });
        PipelineConfig {
            transcript_paths: files.clone(),
            taxonomy_path: self.taxonomy.clone(),
            decisions_path: self.decisions.clone(),
            grammar_config_path: self.parse.grammar_config.clone(),
            base_iri: self.base_iri.clone(),
            owl_mode: match self.owl {
                OwlArg::Direct => OwlMode::Direct,
                OwlArg::Axiom => OwlMode::Axiom,
                OwlArg::None => OwlMode::None,
            },
            facet_mode: if self.collapse_facets { FacetMode::Collapsed } else { FacetMode::FirstClass },
            output_dir: self.out.clone(),
            name,
        }
    }
}

fn report(diags: &[Diagnostic]) -> ExitCode {
    for d in diags {
        eprintln!("{d}");
    }
    ExitCode::from(exit_code(diags))
}

fn read_all(paths: &[PathBuf], diags: &mut Vec<Diagnostic>) -> Vec<Source> {
    paths.iter().filter_map(|p| read_source(p, diags)).collect()
}

fn read_optional(path: Option<&Path>, diags: &mut Vec<Diagnostic>) -> Option<Source> {
    path.and_then(|p| read_source(p, diags))
}

fn lex(args: &Transcripts) -> ExitCode {
    let mut diags = Vec::new();
    let sources = read_all(&args.transcripts, &mut diags);
    for src in &sources {
        match lex_source(&src.name, &src.text) {
            Ok(doc) => {
                if sources.len() > 1 {
                    println!("# {}", src.name);
                }
                for token in &doc.tokens {
                    println!("{token}");
                }
                diags.extend(chambers_kos::transcript::validate_transcript(&doc));
            }
            Err(e) => diags.push(e.to_diagnostic(&src.name)),
        }
    }
    report(&diags)
}

fn parse(args: &ParseArgs) -> ExitCode {
    let mut diags = Vec::new();
    let sources = read_all(&args.files.transcripts, &mut diags);
    let config = read_optional(args.grammar_config.as_deref(), &mut diags);
    if !diags.is_empty() {
        return report(&diags);
    }
    let Some(config) = load_grammar_config(config.as_ref(), &mut diags) else {
        return report(&diags);
    };
    if let Some(trees) = parse_sources(&sources, &config, &mut diags) {
        for tree in trees {
            print!("{tree}");
        }
    }
    report(&diags)
}

fn build(args: &BuildArgs) -> ExitCode {
    let mut diags = Vec::new();
    let sources = read_all(&args.parse.files.transcripts, &mut diags);
    let config = read_optional(args.parse.grammar_config.as_deref(), &mut diags);
    if !diags.is_empty() {
        return report(&diags);
    }
    let Some(config) = load_grammar_config(config.as_ref(), &mut diags) else {
        return report(&diags);
    };
    let Some(trees) = parse_sources(&sources, &config, &mut diags) else {
        return report(&diags);
    };
    if let Some(scheme) = build_stage(&trees, &mut diags) {
        let table = cmd_report_homonyms(&scheme);
        match &args.out {
            None => print!("{table}"),
            Some(dir) => {
                let path = dir.join("homonyms.tsv");
                if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(&path, table)) {
                    diags.push(Diagnostic::error(path.display().to_string(), None, format!("cannot write: {e}")));
                }
            }
        }
    }
    report(&diags)
}

/// `validate` and stdout `emit` share the in-memory compile.
fn compile_only(args: &FullArgs, print: bool) -> ExitCode {
    let config = args.config();
    let mut diags = Vec::new();
    let inputs = Inputs {
        transcripts: read_all(&config.transcript_paths, &mut diags),
        taxonomy: read_optional(config.taxonomy_path.as_deref(), &mut diags),
        decisions: read_optional(config.decisions_path.as_deref(), &mut diags),
        grammar_config: read_optional(config.grammar_config_path.as_deref(), &mut diags),
    };
    if !diags.is_empty() {
        return report(&diags);
    }
    let settings = Settings {
        base_iri: config.base_iri,
        owl_mode: config.owl_mode,
        facet_mode: config.facet_mode,
    };
    let compiled = compile(&inputs, &settings);
    if let (true, Some(a)) = (print, &compiled.artifacts) {
        print!("{}", a.skos);
        if let Some(owl) = &a.owl {
            println!();
            print!("{owl}");
        }
    }
    report(&compiled.diagnostics)
}

fn run(args: &FullArgs) -> ExitCode {
    let outcome = run_pipeline(&args.config());
    if args.out.is_none() {
        if let Some(r) = &outcome.report {
            print!("{r}");
        }
    }
    report(&outcome.diagnostics)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Lex(a) => lex(a),
        Command::Parse(a) => parse(a),
        Command::Build(a) => build(a),
        Command::Validate(a) => compile_only(a, false),
        Command::Emit(a) if a.out.is_none() => compile_only(a, true),
        Command::Emit(a) | Command::Run(a) => run(a),
    }
}
