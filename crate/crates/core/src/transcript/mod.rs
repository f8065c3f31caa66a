//! Transcription markup for the printed vocabulary and its token stream.
//!
//! The markup records exactly the typographic evidence the vocabulary relies
//! on: font style (`roman{}`, `italic{}`, `sc{}`), list punctuation, the long
//! dash, the `&c.` terminator and printed ordinals, plus three transcriber
//! directives (`@domain{}`, `@interp{}`, `@note{}`).

mod lexer;
mod validate;

use std::fmt;

use crate::diagnostic::Position;

pub use lexer::{lex, lex_source, LexError};
pub use validate::validate_transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    Roman,
    Italic,
    SmallCaps,
}

impl Style {
    pub fn keyword(self) -> &'static str {
        match self {
            Style::Roman => "roman",
            Style::Italic => "italic",
            Style::SmallCaps => "sc",
        }
    }

    pub(crate) fn from_keyword(word: &str) -> Option<Style> {
        match word {
            "roman" => Some(Style::Roman),
            "italic" => Some(Style::Italic),
            "sc" => Some(Style::SmallCaps),
            _ => None,
        }
    }
}

/// Text printed in a single font style. `text` is kept verbatim, including
/// any surrounding spaces inside the braces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StyledSpan {
    pub style: Style,
    pub text: String,
    pub position: Position,
}

impl StyledSpan {
    pub fn trimmed(&self) -> &str {
        self.text.trim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PunctKind {
    Comma,
    Semicolon,
    Period,
    LongDash,
    /// The literal `&c.`, trailing period included.
    EtCetera,
    /// A printed ordinal such as "1°", carrying its number.
    Ordinal(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PunctToken {
    pub kind: PunctKind,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DirectiveKind {
    DomainStart(String),
    /// A heading supplied by the transcriber, never printed by the author.
    Interpolate(String),
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Directive {
    pub kind: DirectiveKind,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Span(StyledSpan),
    Punct(PunctToken),
    Directive(Directive),
}

impl Token {
    pub fn position(&self) -> Position {
        match self {
            Token::Span(s) => s.position,
            Token::Punct(p) => p.position,
            Token::Directive(d) => d.position,
        }
    }

    pub fn is_domain_start(&self) -> bool {
        matches!(
            self,
            Token::Directive(Directive {
                kind: DirectiveKind::DomainStart(_),
                ..
            })
        )
    }

    /// Re-emits the markup for this token.
    pub fn markup(&self) -> String {
        match self {
            Token::Span(s) => format!("{}{{{}}}", s.style.keyword(), s.text),
            Token::Punct(p) => match p.kind {
                PunctKind::Comma => ",".into(),
                PunctKind::Semicolon => ";".into(),
                PunctKind::Period => ".".into(),
                PunctKind::LongDash => "\u{2014}".into(),
                PunctKind::EtCetera => "&c.".into(),
                PunctKind::Ordinal(n) => format!("@ord{{{n}}}"),
            },
            Token::Directive(d) => match &d.kind {
                DirectiveKind::DomainStart(name) => format!("@domain{{{name}}}"),
                DirectiveKind::Interpolate(label) => format!("@interp{{{label}}}"),
                DirectiveKind::Note(text) => format!("@note{{{text}}}"),
            },
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos = self.position();
        match self {
            Token::Span(s) => {
                let kind = match s.style {
                    Style::Roman => "ROMAN",
                    Style::Italic => "ITALIC",
                    Style::SmallCaps => "SMALLCAPS",
                };
                write!(f, "{pos} {kind} {:?}", s.text)
            }
            Token::Punct(p) => match p.kind {
                PunctKind::Comma => write!(f, "{pos} COMMA"),
                PunctKind::Semicolon => write!(f, "{pos} SEMICOLON"),
                PunctKind::Period => write!(f, "{pos} PERIOD"),
                PunctKind::LongDash => write!(f, "{pos} LONG_DASH"),
                PunctKind::EtCetera => write!(f, "{pos} ET_CETERA"),
                PunctKind::Ordinal(n) => write!(f, "{pos} ORDINAL {n}"),
            },
            Token::Directive(d) => match &d.kind {
                DirectiveKind::DomainStart(n) => write!(f, "{pos} DOMAIN {n:?}"),
                DirectiveKind::Interpolate(l) => write!(f, "{pos} INTERPOLATE {l:?}"),
                DirectiveKind::Note(t) => write!(f, "{pos} NOTE {t:?}"),
            },
        }
    }
}

/// A lexed transcription.
///
/// `whitespace` holds the inter-token whitespace (one slot before each token
/// plus a trailing slot) so the source can be re-rendered verbatim. Documents
/// built by hand may leave it empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranscriptDocument {
    pub source_name: String,
    pub tokens: Vec<Token>,
    pub whitespace: Vec<String>,
}

impl TranscriptDocument {
    pub fn new(source_name: impl Into<String>, tokens: Vec<Token>) -> Self {
        TranscriptDocument {
            source_name: source_name.into(),
            tokens,
            whitespace: Vec::new(),
        }
    }

    /// Re-emits the markup. Exact for lexed documents; hand-built documents
    /// are joined with single spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let verbatim = self.whitespace.len() == self.tokens.len() + 1;
        for (i, token) in self.tokens.iter().enumerate() {
            if verbatim {
                out.push_str(&self.whitespace[i]);
            } else if i > 0 {
                out.push(' ');
            }
            out.push_str(&token.markup());
        }
        if verbatim {
            out.push_str(&self.whitespace[self.tokens.len()]);
        }
        out
    }

    /// Splits a concatenated transcription into one document per
    /// `@domain{}` entry. Tokens before the first entry are dropped;
    /// [`validate_transcript`] reports them.
    pub fn entries(&self) -> Vec<TranscriptDocument> {
        let mut entries: Vec<TranscriptDocument> = Vec::new();
        for token in &self.tokens {
            if token.is_domain_start() {
                entries.push(TranscriptDocument::new(self.source_name.clone(), Vec::new()));
            }
            if let Some(entry) = entries.last_mut() {
                entry.tokens.push(token.clone());
            }
        }
        entries
    }
}
