//! Browser bindings. Each exported function takes the text of a textarea and
//! returns the text to show, or the diagnostics as an error string.

use wasm_bindgen::prelude::*;

use chambers_kos::emit::FacetMode;
use chambers_kos::grammar::{parse_document, GrammarConfig};
use chambers_kos::pipeline::{compile, Inputs, OwlMode, Settings, Source};
use chambers_kos::taxonomy::{parse_taxonomy, validate_jepd};
use chambers_kos::transcript::lex_source;
use chambers_kos::Diagnostic;

const SOURCE: &str = "input";

fn lines(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

/// The parse trees of every entry in the markup.
pub fn parse_tree(markup: &str) -> Result<String, String> {
    let doc = lex_source(SOURCE, markup).map_err(|e| e.to_diagnostic(SOURCE).to_string())?;
    let trees = parse_document(&doc, &GrammarConfig::default()).map_err(|e| e.to_diagnostic(SOURCE).to_string())?;
    Ok(trees.iter().map(ToString::to_string).collect())
}

/// SKOS Turtle for the markup, followed by any warnings as Turtle comments.
pub fn skos(markup: &str, base_iri: &str, decisions: &str) -> Result<String, String> {
    let inputs = Inputs {
        transcripts: vec![Source::new(SOURCE, markup)],
        decisions: (!decisions.trim().is_empty()).then(|| Source::new("decisions", decisions)),
        ..Inputs::default()
    };
    let settings = Settings {
        base_iri: base_iri.to_string(),
        owl_mode: OwlMode::None,
        facet_mode: FacetMode::FirstClass,
    };
    let compiled = compile(&inputs, &settings);
    let Some(artifacts) = compiled.artifacts else {
        return Err(lines(&compiled.diagnostics));
    };
    let mut out = artifacts.skos;
    for d in &compiled.diagnostics {
        out.push_str(&format!("# {d}\n"));
    }
    Ok(out)
}

/// Repeated leaves of a taxonomy outline, one per line.
pub fn jepd(outline: &str) -> Result<String, String> {
    let tree = parse_taxonomy(outline).map_err(|e| e.to_string())?;
    let violations = validate_jepd(&tree);
    if violations.is_empty() {
        return Ok(format!("{} nodes, {} leaves, no repeated leaf\n", tree.node_count(), tree.leaves().len()));
    }
    Ok(violations.iter().map(|v| format!("{v}\n")).collect())
}

#[wasm_bindgen(js_name = parseTree)]
pub fn parse_tree_js(markup: &str) -> Result<String, JsError> {
    parse_tree(markup).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = emitSkos)]
pub fn skos_js(markup: &str, base_iri: &str, decisions: &str) -> Result<String, JsError> {
    skos(markup, base_iri, decisions).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = checkJepd)]
pub fn jepd_js(outline: &str) -> Result<String, JsError> {
    jepd(outline).map_err(|e| JsError::new(&e))
}
