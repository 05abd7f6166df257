//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! iff   := imp ("<->" imp)*
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := ("~" | "<>" | "[]" | "O" | "F" | "G") unary | atom | "(" iff ")"
//! atom  := [a-z][a-zA-Z0-9_]*
//! ```

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token {token:?} at position {position}")]
    UnknownToken { position: usize, token: String },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Dia,
    Box,
    Next,
    Evt,
    Hence,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Next => "`O`".into(),
            Tok::Evt => "`F`".into(),
            Tok::Hence => "`G`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else if rest.starts_with("<>") {
            (Tok::Dia, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else {
            match c {
                b'~' => (Tok::Not, 1),
                b'&' => (Tok::And, 1),
                b'|' => (Tok::Or, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'O' => (Tok::Next, 1),
                b'F' => (Tok::Evt, 1),
                b'G' => (Tok::Hence, 1),
                b'a'..=b'z' => {
                    let mut j = i + 1;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                        j += 1;
                    }
                    (Tok::Atom(text[i..j].to_string()), j - i)
                }
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(ParseError::UnknownToken {
                        position: start,
                        token: ch.to_string(),
                    });
                }
            }
        };
        out.push((start, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = lhs.iff(&rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            return Ok(lhs.implies(&rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = lhs.or(&rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = lhs.and(&rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let position = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::Syntax {
                position,
                message: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(self.unary()?.neg()),
            Tok::Dia => Ok(self.unary()?.dia()),
            Tok::Box => Ok(self.unary()?.boxed()),
            Tok::Next => Ok(self.unary()?.next()),
            Tok::Evt => Ok(self.unary()?.evt()),
            Tok::Hence => Ok(self.unary()?.hence()),
            Tok::Atom(name) => Ok(Formula::atom(&name)),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::Syntax {
                        position: self.here(),
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                position,
                message: format!("unexpected {}", other.describe()),
            }),
        }
    }
}

/// Parses a formula, expanding all derived connectives.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.iff()?;
    if let Some((position, tok)) = parser.toks.get(parser.pos) {
        return Err(ParseError::Syntax {
            position: *position,
            message: format!("unexpected {} after complete formula", tok.describe()),
        });
    }
    Ok(f)
}
