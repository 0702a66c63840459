//! Recursive-descent parser for the sentence grammar.
//!
//! ```text
//! sentence := disj            (or: disj ('->' sentence)?  with implication enabled)
//! disj     := conj ('|' conj)*
//! conj     := unary ('&' unary)*
//! unary    := '!' unary | '(' sentence ')' | atom | '_|_'
//! ```

use super::{Root, Sentence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

impl ParseError {
    fn at(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `A -> B` and read it as `!A | B`. Right associative, binds
    /// weaker than `|`.
    pub desugar_implication: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    Bot,
    Star,
    Ident(String),
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = match b {
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'*' => Token::Star,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Implies
            }
            // `_|_` is the falsum unless an identifier continues right after it.
            b'_' if bytes[i..].starts_with(b"_|_")
                && !bytes.get(i + 3).copied().is_some_and(is_ident_char) =>
            {
                i += 2;
                Token::Bot
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i + 1 < bytes.len() && is_ident_char(bytes[i + 1]) {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::at(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, token));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
    options: ParseOptions,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn sentence(&mut self) -> Result<Sentence, ParseError> {
        let left = self.disj()?;
        if self.peek() == Some(&Token::Implies) {
            if !self.options.desugar_implication {
                return Err(ParseError::at(
                    self.offset(),
                    "`->` is only accepted with implication desugaring enabled",
                ));
            }
            self.bump();
            let right = self.sentence()?;
            return Ok(Sentence::disj(Sentence::neg(left), right));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Sentence, ParseError> {
        let mut acc = self.conj()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            acc = Sentence::disj(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Sentence, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            acc = Sentence::conj(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Sentence, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Not) => Ok(Sentence::neg(self.unary()?)),
            Some(Token::LParen) => {
                let inner = self.sentence()?;
                let close = self.offset();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ParseError::at(close, "expected `)`")),
                }
            }
            Some(Token::Ident(name)) => Ok(Sentence::atom(&name)),
            Some(Token::Bot) => Ok(Sentence::Bot),
            Some(Token::Star) => Err(ParseError::at(
                offset,
                "`*` is only allowed as a root label",
            )),
            Some(other) => Err(ParseError::at(offset, format!("unexpected {other:?}"))),
            None => Err(ParseError::at(offset, "unexpected end of input")),
        }
    }
}

/// Parses with the default options (no implication).
pub fn parse_sentence(text: &str) -> Result<Sentence, ParseError> {
    parse_sentence_with(text, ParseOptions::default())
}

pub fn parse_sentence_with(text: &str, options: ParseOptions) -> Result<Sentence, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        len: text.len(),
        options,
    };
    let s = parser.sentence()?;
    if parser.pos < parser.tokens.len() {
        return Err(ParseError::at(parser.offset(), "unexpected trailing input"));
    }
    Ok(s)
}

/// Parses a root label: `*` or a sentence.
pub fn parse_root(text: &str, options: ParseOptions) -> Result<Root, ParseError> {
    if text.trim() == "*" {
        return Ok(Root::Star);
    }
    parse_sentence_with(text, options).map(Root::Info)
}
