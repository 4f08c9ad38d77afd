//! Recursive-descent parser for the BGP subset of SPARQL:
//!
//! ```text
//! PREFIX ub: <http://...>
//! SELECT [DISTINCT] ?x ?y | *
//! [WHERE] { s p o . s p o ; p o , o . }
//! ```

use std::collections::{BTreeMap, HashMap};

use super::{is_connected, BgpQuery, PatternTerm, Position, QueryError, TriplePattern, Variable};
use crate::rdf::{Interner, Term};

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Iri(String),
    PName { prefix: String, local: String },
    Literal { value: String, lang: Option<String>, datatype: Option<Box<Tok>> },
    Blank(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Var(v) => format!("variable ?{v}"),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("'{prefix}:{local}'"),
            Tok::Literal { value, .. } => format!("literal \"{value}\""),
            Tok::Blank(b) => format!("_:{b}"),
            Tok::Punct(c) => format!("'{c}'"),
            Tok::Eof => "end of input".to_owned(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

fn syntax(at: Position, message: impl Into<String>) -> QueryError {
    QueryError::Syntax { at, message: message.into() }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn here(&self) -> Position {
        Position { line: self.line, column: self.col }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Reads `[A-Za-z0-9_.-]*`, leaving any trailing dots unread.
    fn name(&mut self) -> String {
        let rest = &self.src[self.pos..];
        let mut len = rest.find(|c: char| !is_name_char(c)).unwrap_or(rest.len());
        while len > 0 && rest[..len].ends_with('.') {
            len -= 1;
        }
        let text = rest[..len].to_owned();
        for _ in text.chars() {
            self.bump();
        }
        text
    }

    fn next_token(&mut self) -> Result<(Tok, Position), QueryError> {
        self.skip_trivia();
        let at = self.here();
        let Some(c) = self.peek() else { return Ok((Tok::Eof, at)) };
        let tok = match c {
            '{' | '}' | '.' | '*' | ';' | ',' => {
                self.bump();
                Tok::Punct(c)
            }
            '?' | '$' => {
                self.bump();
                let name = self.name();
                if name.is_empty() {
                    return Err(syntax(at, "empty variable name"));
                }
                Tok::Var(name)
            }
            '<' => Tok::Iri(self.iri(at)?),
            '"' | '\'' => self.literal(at)?,
            '_' if self.src[self.pos..].starts_with("_:") => {
                self.bump();
                self.bump();
                let label = self.name();
                if label.is_empty() {
                    return Err(syntax(at, "empty blank node label"));
                }
                Tok::Blank(label)
            }
            c if c.is_alphanumeric() || c == ':' || c == '_' => {
                let prefix = self.name();
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.name();
                    Tok::PName { prefix, local }
                } else if prefix.is_empty() {
                    return Err(syntax(at, format!("unexpected character '{c}'")));
                } else {
                    Tok::Word(prefix)
                }
            }
            c => return Err(syntax(at, format!("unexpected character '{c}'"))),
        };
        Ok((tok, at))
    }

    fn iri(&mut self, at: Position) -> Result<String, QueryError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(at, "unterminated IRI")),
                Some('>') => return Ok(out),
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(syntax(at, format!("invalid character {c:?} in IRI")))
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn literal(&mut self, at: Position) -> Result<Tok, QueryError> {
        let quote = self.bump().expect("quote");
        let mut value = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(syntax(at, "unterminated string literal")),
                Some(c) if c == quote => break,
                Some('\\') => {
                    let esc_at = self.here();
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some(u @ ('u' | 'U')) => {
                            let digits = if u == 'u' { 4 } else { 8 };
                            let mut code = 0u32;
                            for _ in 0..digits {
                                let d = self.bump().and_then(|c| c.to_digit(16));
                                code = code * 16 + d.ok_or_else(|| syntax(esc_at, "bad unicode escape"))?;
                            }
                            char::from_u32(code).ok_or_else(|| syntax(esc_at, "bad unicode escape"))?
                        }
                        _ => return Err(syntax(esc_at, "bad escape sequence")),
                    };
                    value.push(c);
                }
                Some(c) => value.push(c),
            }
        }
        let mut lang = None;
        let mut datatype = None;
        if self.peek() == Some('@') {
            self.bump();
            let tag = self.name();
            if tag.is_empty() {
                return Err(syntax(at, "empty language tag"));
            }
            lang = Some(tag);
        } else if self.src[self.pos..].starts_with("^^") {
            self.bump();
            self.bump();
            let dt_at = self.here();
            let (tok, _) = self.next_token()?;
            match tok {
                Tok::Iri(_) | Tok::PName { .. } => datatype = Some(Box::new(tok)),
                other => return Err(syntax(dt_at, format!("expected datatype IRI, found {}", other.describe()))),
            }
        }
        Ok(Tok::Literal { value, lang, datatype })
    }
}

struct Parser<'a, 'i, I: Interner> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: Position,
    prefixes: BTreeMap<String, String>,
    overrides: &'i BTreeMap<String, String>,
    interner: &'i mut I,
    blanks: HashMap<String, Variable>,
}

impl<I: Interner> Parser<'_, '_, I> {
    fn advance(&mut self) -> Result<(), QueryError> {
        let (tok, at) = self.lexer.next_token()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn error_here(&self, expected: &str) -> QueryError {
        syntax(self.at, format!("expected {expected}, found {}", self.tok.describe()))
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.tok, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QueryError> {
        if self.tok == Tok::Punct(c) {
            self.advance()
        } else {
            Err(self.error_here(&format!("'{c}'")))
        }
    }

    fn resolve(&self, prefix: &str, local: &str, at: Position) -> Result<String, QueryError> {
        let ns = self
            .overrides
            .get(prefix)
            .or_else(|| self.prefixes.get(prefix))
            .ok_or_else(|| QueryError::UndeclaredPrefix { at, prefix: prefix.to_owned() })?;
        Ok(format!("{ns}{local}"))
    }

    fn iri_of(&self, tok: &Tok, at: Position) -> Result<String, QueryError> {
        match tok {
            Tok::Iri(i) => Ok(i.clone()),
            Tok::PName { prefix, local } => self.resolve(prefix, local, at),
            _ => unreachable!("caller checked the token kind"),
        }
    }

    fn query(&mut self) -> Result<(Vec<Variable>, bool, Vec<TriplePattern>), QueryError> {
        while self.is_keyword("PREFIX") {
            self.advance()?;
            let Tok::PName { prefix, local } = self.tok.clone() else {
                return Err(self.error_here("prefix name such as 'ub:'"));
            };
            if !local.is_empty() {
                return Err(self.error_here("prefix name such as 'ub:'"));
            }
            self.advance()?;
            let Tok::Iri(ns) = self.tok.clone() else {
                return Err(self.error_here("namespace IRI"));
            };
            self.prefixes.insert(prefix, ns);
            self.advance()?;
        }

        if !self.is_keyword("SELECT") {
            return Err(self.error_here("PREFIX or SELECT"));
        }
        self.advance()?;
        if self.is_keyword("DISTINCT") || self.is_keyword("REDUCED") {
            self.advance()?;
        }
        let mut projection = Vec::new();
        let mut select_all = false;
        if self.tok == Tok::Punct('*') {
            select_all = true;
            self.advance()?;
        } else {
            while let Tok::Var(name) = &self.tok {
                projection.push(Variable::new(name));
                self.advance()?;
            }
            if projection.is_empty() {
                return Err(self.error_here("projection variables or '*'"));
            }
        }

        if self.is_keyword("WHERE") {
            self.advance()?;
        }
        self.expect_punct('{')?;
        let mut patterns = Vec::new();
        while self.tok != Tok::Punct('}') {
            self.triples_block(&mut patterns)?;
            if self.tok == Tok::Punct('.') {
                self.advance()?;
            } else if self.tok != Tok::Punct('}') {
                return Err(self.error_here("'.' or '}'"));
            }
        }
        if patterns.is_empty() {
            return Err(syntax(self.at, "empty group pattern"));
        }
        self.advance()?;
        if self.tok != Tok::Eof {
            return Err(self.error_here("end of query"));
        }
        Ok((projection, select_all, patterns))
    }

    fn triples_block(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term(Role::Subject)?;
        loop {
            let predicate = self.term(Role::Predicate)?;
            loop {
                let object = self.term(Role::Object)?;
                out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                if self.tok != Tok::Punct(',') {
                    break;
                }
                self.advance()?;
            }
            if self.tok != Tok::Punct(';') {
                return Ok(());
            }
            while self.tok == Tok::Punct(';') {
                self.advance()?;
            }
            if matches!(self.tok, Tok::Punct('.') | Tok::Punct('}')) {
                return Ok(());
            }
        }
    }

    fn term(&mut self, role: Role) -> Result<PatternTerm, QueryError> {
        let at = self.at;
        let tok = self.tok.clone();
        let term = match &tok {
            Tok::Var(name) => PatternTerm::Var(Variable::new(name)),
            Tok::Iri(_) | Tok::PName { .. } => {
                let iri = self.iri_of(&tok, at)?;
                PatternTerm::Const(self.interner.intern(Term::iri(iri)))
            }
            Tok::Word(w) if w == "a" && role == Role::Predicate => {
                PatternTerm::Const(self.interner.intern(Term::iri(RDF_TYPE)))
            }
            Tok::Blank(label) if role != Role::Predicate => {
                let next = self.blanks.len();
                let var = self
                    .blanks
                    .entry(label.clone())
                    .or_insert_with(|| Variable::new(&format!("_:b{next}")))
                    .clone();
                PatternTerm::Var(var)
            }
            Tok::Literal { value, lang, datatype } if role != Role::Predicate => {
                let term = match (lang, datatype) {
                    (Some(lang), _) => Term::lang_literal(value.clone(), lang.clone()),
                    (None, Some(dt)) => Term::typed_literal(value.clone(), self.iri_of(dt, at)?),
                    (None, None) => Term::literal(value.clone()),
                };
                PatternTerm::Const(self.interner.intern(term))
            }
            _ => {
                return Err(self.error_here(match role {
                    Role::Subject => "subject (variable, IRI or blank node)",
                    Role::Predicate => "predicate (variable, IRI or 'a')",
                    Role::Object => "object (variable, IRI, literal or blank node)",
                }))
            }
        };
        self.advance()?;
        Ok(term)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Subject,
    Predicate,
    Object,
}

/// Parses a BGP query, interning its constants through `interner`.
pub fn parse_query<I: Interner>(text: &str, interner: &mut I) -> Result<BgpQuery, QueryError> {
    parse_query_with_prefixes(text, &BTreeMap::new(), interner)
}

/// Like [`parse_query`], with `overrides` taking precedence over the
/// query's own `PREFIX` declarations.
pub fn parse_query_with_prefixes<I: Interner>(
    text: &str,
    overrides: &BTreeMap<String, String>,
    interner: &mut I,
) -> Result<BgpQuery, QueryError> {
    let mut lexer = Lexer::new(text);
    let (tok, at) = lexer.next_token()?;
    let mut parser = Parser {
        lexer,
        tok,
        at,
        prefixes: BTreeMap::new(),
        overrides,
        interner,
        blanks: HashMap::new(),
    };
    let (projection, select_all, patterns) = parser.query()?;
    let mut prefixes = parser.prefixes;
    prefixes.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));

    let mut query = BgpQuery { projection, patterns, prefixes };
    if select_all {
        query.projection = query.variables().into_iter().filter(|v| !v.is_blank()).cloned().collect();
    } else {
        let vars = query.variables();
        if let Some(missing) = query.projection.iter().find(|v| !vars.contains(v)) {
            return Err(QueryError::UnboundProjection(missing.clone()));
        }
    }
    if !is_connected(&query.patterns) {
        return Err(QueryError::Disconnected);
    }
    Ok(query)
}
