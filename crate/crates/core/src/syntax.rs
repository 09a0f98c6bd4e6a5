//! Tokenizer and cursor shared by the term and formula parsers.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// longest first so that "<+" wins over a bare "<"
const PUNCTS: &[&str] = &[
    "<+", "<#", "|>", "->", "!=", "|", "&", "\\", ";", "~", "-", "^", "(", ")", ",", ".", "!", "=",
];

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c == '\n' {
            line += 1;
            column = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            out.push(Spanned {
                tok: Tok::Ident(rest[..len].to_string()),
                line,
                column,
            });
            column += len;
            rest = &rest[len..];
            continue;
        }
        match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Spanned {
                    tok: Tok::Punct(p),
                    line,
                    column,
                });
                column += p.len();
                rest = &rest[p.len()..];
            }
            None => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character {c:?}"),
                    expected: vec![],
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Recursive-descent cursor that remembers what it looked for at the current position.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    expected: Vec<String>,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Cursor {
            toks: tokenize(text)?,
            pos: 0,
            expected: Vec::new(),
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
            self.expected.clear();
        }
        t
    }

    /// Consumes `p` if it is next; records it as expected otherwise.
    pub fn eat(&mut self, p: &'static str) -> bool {
        if *self.peek() == Tok::Punct(p) {
            self.bump();
            true
        } else {
            self.note(format!("`{p}`"));
            false
        }
    }

    pub fn note(&mut self, what: impl Into<String>) {
        let w = what.into();
        if !self.expected.contains(&w) {
            self.expected.push(w);
        }
    }

    pub fn expect(&mut self, p: &'static str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error("unexpected token"))
        }
    }

    pub fn error(&self, message: &str) -> Error {
        let here = &self.toks[self.pos];
        let mut expected = self.expected.clone();
        expected.sort();
        Error::Syntax {
            line: here.line,
            column: here.column,
            message: format!("{message} {}", here.tok),
            expected,
        }
    }

    pub fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.note("end of input");
            Err(self.error("trailing input at"))
        }
    }
}
