//! Compiles annotated transcriptions of Ephraim Chambers' 1728 domain
//! vocabulary and taxonomic tree into a faceted SKOS thesaurus and an OWL
//! ontology.
//!
//! The pipeline is `transcript` (lex) -> `grammar` (parse entries) -> `kos`
//! (concept scheme) -> `disambig` (human merge/split decisions) -> `emit`
//! (Turtle), with `taxonomy` handling the tree of knowledge.

pub mod diagnostic;
pub mod disambig;
pub mod emit;
pub mod grammar;
pub mod kos;
pub mod pipeline;
pub mod taxonomy;
pub mod text;
pub mod transcript;

pub use diagnostic::{Diagnostic, Position, Severity};
