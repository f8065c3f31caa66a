use std::iter::Peekable;
use std::str::Chars;

use thiserror::Error;

use super::{Directive, DirectiveKind, PunctKind, PunctToken, Style, StyledSpan, Token, TranscriptDocument};
use crate::diagnostic::{Diagnostic, Position};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("unbalanced delimiter: {detail}")]
    UnbalancedDelimiter { position: Position, detail: &'static str },
    #[error("unknown directive `{name}`")]
    UnknownDirective { name: String, position: Position },
    #[error("empty span")]
    EmptySpan { position: Position },
    #[error("spans and directives cannot be nested")]
    NestedSpan { position: Position },
    #[error("unexpected {found:?} outside a span")]
    UnexpectedText { found: char, position: Position },
    #[error("ordinal must be a positive integer without leading zeros, found {text:?}")]
    InvalidOrdinal { text: String, position: Position },
}

impl LexError {
    pub fn position(&self) -> Position {
        match self {
            LexError::UnbalancedDelimiter { position, .. }
            | LexError::UnknownDirective { position, .. }
            | LexError::EmptySpan { position }
            | LexError::NestedSpan { position }
            | LexError::UnexpectedText { position, .. }
            | LexError::InvalidOrdinal { position, .. } => *position,
        }
    }

    pub fn to_diagnostic(&self, source: &str) -> Diagnostic {
        Diagnostic::error(source, Some(self.position()), self.to_string())
    }
}

struct Cursor<'a> {
    chars: Peekable<Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn position(&self) -> Position {
        Position::new(self.line, self.col)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Lexes transcription markup into a token stream.
pub fn lex(source_text: &str) -> Result<TranscriptDocument, LexError> {
    lex_source("", source_text)
}

/// Like [`lex`], recording `source_name` on the document for diagnostics.
pub fn lex_source(source_name: &str, source_text: &str) -> Result<TranscriptDocument, LexError> {
    let mut cur = Cursor::new(source_text);
    let mut tokens = Vec::new();
    let mut whitespace = Vec::new();
    let mut pending_ws = String::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            pending_ws.push(c);
            cur.bump();
            continue;
        }
        let start = cur.position();
        let token = match c {
            ',' | ';' | '.' | '\u{2014}' => {
                cur.bump();
                let kind = match c {
                    ',' => PunctKind::Comma,
                    ';' => PunctKind::Semicolon,
                    '.' => PunctKind::Period,
                    _ => PunctKind::LongDash,
                };
                Token::Punct(PunctToken { kind, position: start })
            }
            '&' => {
                cur.bump();
                for expected in ['c', '.'] {
                    match cur.peek() {
                        Some(found) if found == expected => {
                            cur.bump();
                        }
                        _ => {
                            return Err(LexError::UnexpectedText {
                                found: '&',
                                position: start,
                            })
                        }
                    }
                }
                Token::Punct(PunctToken {
                    kind: PunctKind::EtCetera,
                    position: start,
                })
            }
            '@' => {
                cur.bump();
                let name = read_word(&mut cur);
                if cur.peek() != Some('{') {
                    return Err(LexError::UnknownDirective { name, position: start });
                }
                if !matches!(name.as_str(), "domain" | "interp" | "note" | "ord") {
                    return Err(LexError::UnknownDirective { name, position: start });
                }
                let body = read_body(&mut cur, start)?;
                match name.as_str() {
                    "ord" => {
                        let n = parse_ordinal(&body).ok_or(LexError::InvalidOrdinal {
                            text: body.clone(),
                            position: start,
                        })?;
                        Token::Punct(PunctToken {
                            kind: PunctKind::Ordinal(n),
                            position: start,
                        })
                    }
                    "domain" => directive(DirectiveKind::DomainStart(body), start),
                    "interp" => directive(DirectiveKind::Interpolate(body), start),
                    _ => directive(DirectiveKind::Note(body), start),
                }
            }
            '}' => {
                return Err(LexError::UnbalancedDelimiter {
                    position: start,
                    detail: "`}` without a matching opener",
                })
            }
            c if c.is_ascii_alphabetic() => {
                let word = read_word(&mut cur);
                if cur.peek() != Some('{') {
                    return Err(LexError::UnexpectedText {
                        found: c,
                        position: start,
                    });
                }
                let style = Style::from_keyword(&word).ok_or_else(|| LexError::UnknownDirective {
                    name: word.clone(),
                    position: start,
                })?;
                let text = read_body(&mut cur, start)?;
                Token::Span(StyledSpan {
                    style,
                    text,
                    position: start,
                })
            }
            other => {
                return Err(LexError::UnexpectedText {
                    found: other,
                    position: start,
                })
            }
        };
        whitespace.push(std::mem::take(&mut pending_ws));
        tokens.push(token);
    }
    whitespace.push(pending_ws);

    Ok(TranscriptDocument {
        source_name: source_name.to_string(),
        tokens,
        whitespace,
    })
}

fn directive(kind: DirectiveKind, position: Position) -> Token {
    Token::Directive(Directive { kind, position })
}

fn read_word(cur: &mut Cursor<'_>) -> String {
    let mut word = String::new();
    while let Some(c) = cur.peek() {
        if !c.is_ascii_alphabetic() {
            break;
        }
        word.push(c);
        cur.bump();
    }
    word
}

/// Reads `{...}` starting at the opening brace; the body must be non-blank.
fn read_body(cur: &mut Cursor<'_>, start: Position) -> Result<String, LexError> {
    cur.bump();
    let mut body = String::new();
    loop {
        match cur.peek() {
            None => {
                return Err(LexError::UnbalancedDelimiter {
                    position: start,
                    detail: "span opened here is never closed",
                })
            }
            Some('}') => {
                cur.bump();
                break;
            }
            Some('{') => return Err(LexError::NestedSpan { position: cur.position() }),
            Some(c) => {
                body.push(c);
                cur.bump();
            }
        }
    }
    if body.trim().is_empty() {
        return Err(LexError::EmptySpan { position: start });
    }
    Ok(body)
}

fn parse_ordinal(body: &str) -> Option<u32> {
    if body.is_empty() || body.starts_with('0') || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    body.parse().ok()
}
