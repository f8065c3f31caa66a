use super::{DirectiveKind, PunctKind, Token, TranscriptDocument};
use crate::diagnostic::Diagnostic;

/// Checks the document invariants that the lexer cannot enforce on its own
/// (hand-built documents, concatenated files).
///
/// Returns an empty list iff every entry starts with `@domain{}`, positions
/// never decrease, and no span or directive payload is blank.
pub fn validate_transcript(doc: &TranscriptDocument) -> Vec<Diagnostic> {
    let source = doc.source_name.as_str();
    let mut diagnostics = Vec::new();

    if let Some(first) = doc.tokens.iter().take_while(|t| !t.is_domain_start()).next() {
        diagnostics.push(Diagnostic::error(
            source,
            Some(first.position()),
            "content before the first @domain{} entry",
        ));
    }

    for pair in doc.tokens.windows(2) {
        if pair[1].position() < pair[0].position() {
            diagnostics.push(Diagnostic::error(
                source,
                Some(pair[1].position()),
                format!("token position goes backwards from {}", pair[0].position()),
            ));
        }
    }

    for token in &doc.tokens {
        let pos = Some(token.position());
        match token {
            Token::Span(span) => {
                if span.text.trim().is_empty() {
                    diagnostics.push(Diagnostic::error(source, pos, "empty span"));
                } else if span.text.contains(['{', '}']) {
                    diagnostics.push(Diagnostic::error(source, pos, "markup delimiter inside span text"));
                }
            }
            Token::Punct(p) => {
                if p.kind == PunctKind::Ordinal(0) {
                    diagnostics.push(Diagnostic::error(source, pos, "ordinal must be positive"));
                }
            }
            Token::Directive(d) => {
                let (what, payload) = match &d.kind {
                    DirectiveKind::DomainStart(n) => ("@domain", n),
                    DirectiveKind::Interpolate(l) => ("@interp", l),
                    DirectiveKind::Note(t) => ("@note", t),
                };
                if payload.trim().is_empty() {
                    diagnostics.push(Diagnostic::error(source, pos, format!("{what} needs a non-empty argument")));
                } else if payload.contains(['{', '}']) {
                    diagnostics.push(Diagnostic::error(
                        source,
                        pos,
                        format!("markup delimiter inside {what} argument"),
                    ));
                }
            }
        }
    }

    diagnostics
}
