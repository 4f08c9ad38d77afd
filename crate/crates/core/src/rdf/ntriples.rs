//! Line-oriented N-Triples reader and writer.
//!
//! Supported subset: IRIREF, STRING_LITERAL_QUOTE with the usual backslash
//! escapes plus `\uXXXX` / `\UXXXXXXXX`, optional `^^<datatype>` or
//! `@lang`, and blank node labels. Blank lines and `#` comments are skipped.

use std::io::{self, BufRead, Write};

use super::dictionary::Dictionary;
use super::term::Term;
use super::{RdfError, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("unterminated IRI")]
    UnterminatedIri,
    #[error("invalid character {0:?} in IRI")]
    InvalidIriChar(char),
    #[error("unterminated string literal")]
    UnterminatedLiteral,
    #[error("bad escape sequence {0}")]
    BadEscape(String),
    #[error("invalid blank node label")]
    InvalidBlankNode,
    #[error("invalid language tag")]
    InvalidLanguageTag,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("missing final dot")]
    MissingFinalDot,
    #[error("unexpected content after final dot")]
    TrailingContent,
}

/// Syntax error with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: SyntaxError,
}

/// Parses one N-Triples line. Returns `Ok(None)` for blank and comment lines.
pub fn parse_line(line: &str) -> Result<Option<(Term, Term, Term)>, SyntaxError> {
    let mut cur = Cursor::new(line);
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }

    let subject = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        Some('_') => Term::blank(cur.blank()?),
        _ => return Err(SyntaxError::Expected("subject IRI or blank node")),
    };
    cur.skip_ws();
    let predicate = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        _ => return Err(SyntaxError::Expected("predicate IRI")),
    };
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        Some('_') => Term::blank(cur.blank()?),
        Some('"') => cur.literal()?,
        _ => return Err(SyntaxError::Expected("object term")),
    };
    cur.skip_ws();
    if cur.next() != Some('.') {
        return Err(SyntaxError::MissingFinalDot);
    }
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => Ok(Some((subject, predicate, object))),
        Some(_) => Err(SyntaxError::TrailingContent),
    }
}

/// Parses a single term in N-Triples syntax, as written by `Term`'s
/// `Display`.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let term = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        Some('_') => Term::blank(cur.blank()?),
        Some('"') => cur.literal()?,
        _ => return Err(SyntaxError::Expected("term")),
    };
    cur.skip_ws();
    match cur.peek() {
        None => Ok(term),
        Some(_) => Err(SyntaxError::TrailingContent),
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r' | '\n')) {
            self.pos += 1;
        }
    }

    fn iri(&mut self) -> Result<String, SyntaxError> {
        self.next(); // '<'
        let mut out = String::new();
        loop {
            match self.next() {
                None => return Err(SyntaxError::UnterminatedIri),
                Some('>') => return Ok(out),
                Some('\\') => match self.next() {
                    Some('u') => out.push(self.hex_escape(4, 'u')?),
                    Some('U') => out.push(self.hex_escape(8, 'U')?),
                    Some(c) => return Err(SyntaxError::BadEscape(format!("\\{c}"))),
                    None => return Err(SyntaxError::UnterminatedIri),
                },
                Some(c) if c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(SyntaxError::InvalidIriChar(c))
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn blank(&mut self) -> Result<String, SyntaxError> {
        self.next(); // '_'
        if self.next() != Some(':') {
            return Err(SyntaxError::InvalidBlankNode);
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        // a trailing '.' is the statement terminator, not part of the label
        while self.pos > start && self.src.as_bytes()[self.pos - 1] == b'.' {
            self.pos -= 1;
        }
        let label = &self.src[start..self.pos];
        if label.is_empty() || !label.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            return Err(SyntaxError::InvalidBlankNode);
        }
        Ok(label.to_owned())
    }

    fn literal(&mut self) -> Result<Term, SyntaxError> {
        self.next(); // '"'
        let mut value = String::new();
        loop {
            match self.next() {
                None => return Err(SyntaxError::UnterminatedLiteral),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.next() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4, 'u')?,
                        Some('U') => self.hex_escape(8, 'U')?,
                        Some(c) => return Err(SyntaxError::BadEscape(format!("\\{c}"))),
                        None => return Err(SyntaxError::UnterminatedLiteral),
                    };
                    value.push(c);
                }
                Some(c) => value.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.next();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.next();
                    } else {
                        break;
                    }
                }
                let valid = !tag.is_empty()
                    && tag.split('-').all(|part| !part.is_empty())
                    && tag.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
                if !valid {
                    return Err(SyntaxError::InvalidLanguageTag);
                }
                Ok(Term::lang_literal(value, tag))
            }
            Some('^') => {
                self.next();
                if self.next() != Some('^') || self.peek() != Some('<') {
                    return Err(SyntaxError::Expected("datatype IRI after '^^'"));
                }
                Ok(Term::typed_literal(value, self.iri()?))
            }
            _ => Ok(Term::literal(value)),
        }
    }

    fn hex_escape(&mut self, digits: usize, marker: char) -> Result<char, SyntaxError> {
        let mut code = 0u32;
        let mut seen = String::new();
        for _ in 0..digits {
            let c = self.next().ok_or_else(|| SyntaxError::BadEscape(format!("\\{marker}{seen}")))?;
            seen.push(c);
            let d = c.to_digit(16).ok_or_else(|| SyntaxError::BadEscape(format!("\\{marker}{seen}")))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| SyntaxError::BadEscape(format!("\\{marker}{seen}")))
    }
}

/// Streaming reader: pulls one line at a time from `input` and interns the
/// terms of each statement into the supplied dictionary.
pub struct NTriplesReader<R> {
    input: R,
    line_no: usize,
    buf: String,
}

impl<R: BufRead> NTriplesReader<R> {
    pub fn new(input: R) -> Self {
        NTriplesReader { input, line_no: 0, buf: String::new() }
    }

    /// Reads the next statement. `Ok(None)` at end of input.
    pub fn next_triple(&mut self, dict: &mut Dictionary) -> Result<Option<Triple>, RdfError> {
        loop {
            self.buf.clear();
            if self.input.read_line(&mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let parsed = parse_line(&self.buf)
                .map_err(|reason| ParseError { line: self.line_no, reason })?;
            if let Some((s, p, o)) = parsed {
                return Ok(Some(Triple { s: dict.id_of(s), p: dict.id_of(p), o: dict.id_of(o) }));
            }
        }
    }

    pub fn line_number(&self) -> usize {
        self.line_no
    }
}

/// Parses a whole N-Triples stream into a fresh dictionary, failing on the
/// first malformed line. Duplicate statements are kept.
pub fn parse_ntriples<R: BufRead>(input: R) -> Result<(Vec<Triple>, Dictionary), RdfError> {
    let mut dict = Dictionary::new();
    let triples = parse_ntriples_into(input, &mut dict)?;
    Ok((triples, dict))
}

/// Like [`parse_ntriples`] but interns into an existing dictionary.
pub fn parse_ntriples_into<R: BufRead>(
    input: R,
    dict: &mut Dictionary,
) -> Result<Vec<Triple>, RdfError> {
    let mut reader = NTriplesReader::new(input);
    let mut triples = Vec::new();
    while let Some(t) = reader.next_triple(dict)? {
        triples.push(t);
    }
    Ok(triples)
}

pub fn write_ntriples<W: Write>(
    triples: &[Triple],
    dict: &Dictionary,
    mut out: W,
) -> Result<(), RdfError> {
    for t in triples {
        let s = dict.term_of(t.s)?;
        let p = dict.term_of(t.p)?;
        let o = dict.term_of(t.o)?;
        writeln!(out, "{s} {p} {o} .")?;
    }
    Ok(())
}

/// Convenience wrapper returning the serialized text.
pub fn to_ntriples_string(triples: &[Triple], dict: &Dictionary) -> Result<String, RdfError> {
    let mut buf = Vec::new();
    write_ntriples(triples, dict, &mut buf)?;
    String::from_utf8(buf).map_err(|e| RdfError::Io(io::Error::new(io::ErrorKind::InvalidData, e)))
}
