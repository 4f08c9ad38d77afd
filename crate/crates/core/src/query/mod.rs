//! SPARQL basic graph pattern queries: model, parser and evaluation order.

mod order;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::rdf::TermId;

pub use order::{is_connectivity_preserving, order_bgp};
pub use parser::{parse_query, parse_query_with_prefixes};

/// A query variable, stored without its `?` sigil. Blank nodes in a query
/// become variables whose names start with `_:`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Self {
        let name = name.strip_prefix(['?', '$']).unwrap_or(name);
        assert!(!name.is_empty(), "variable names are non-empty");
        Variable(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Variables introduced for query blank nodes.
    pub fn is_blank(&self) -> bool {
        self.0.starts_with("_:")
    }
}

impl From<&str> for Variable {
    fn from(name: &str) -> Self {
        Variable::new(name)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_blank() {
            f.write_str(&self.0)
        } else {
            write!(f, "?{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(Variable),
    Const(TermId),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Variable::new(name))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<TermId> {
        match self {
            PatternTerm::Const(c) => Some(*c),
            PatternTerm::Var(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, PatternTerm::Var(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub s: PatternTerm,
    pub p: PatternTerm,
    pub o: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> Self {
        TriplePattern { s, p, o }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.s, &self.p, &self.o]
    }

    /// Distinct variables in s, p, o order.
    pub fn variables(&self) -> Vec<&Variable> {
        let mut out: Vec<&Variable> = Vec::with_capacity(3);
        for v in self.positions().into_iter().filter_map(PatternTerm::as_var) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn constant_count(&self) -> usize {
        self.positions().iter().filter(|t| !t.is_var()).count()
    }

    pub fn is_ground(&self) -> bool {
        self.constant_count() == 3
    }

    /// Renders the pattern with `term` supplying the text of constants.
    pub fn render(&self, term: impl Fn(TermId) -> String) -> String {
        let part = |t: &PatternTerm| match t {
            PatternTerm::Var(v) => v.to_string(),
            PatternTerm::Const(c) => term(*c),
        };
        format!("{} {} {}", part(&self.s), part(&self.p), part(&self.o))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgpQuery {
    pub projection: Vec<Variable>,
    pub patterns: Vec<TriplePattern>,
    pub prefixes: BTreeMap<String, String>,
}

impl BgpQuery {
    /// All variables in order of first appearance.
    pub fn variables(&self) -> Vec<&Variable> {
        let mut out: Vec<&Variable> = Vec::new();
        for p in &self.patterns {
            for v in p.variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Position inside a query text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("{at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("{at}: undeclared prefix '{prefix}:'")]
    UndeclaredPrefix { at: Position, prefix: String },
    #[error("projected variable {0} does not occur in any triple pattern")]
    UnboundProjection(Variable),
    #[error("triple patterns do not form a connected graph")]
    Disconnected,
}

impl QueryError {
    pub fn position(&self) -> Option<Position> {
        match self {
            QueryError::Syntax { at, .. } | QueryError::UndeclaredPrefix { at, .. } => Some(*at),
            _ => None,
        }
    }
}

/// Whether the variable-sharing graph over the non-ground patterns is
/// connected. Ground patterns are existence checks and are ignored.
pub fn is_connected(patterns: &[TriplePattern]) -> bool {
    let with_vars: Vec<&TriplePattern> = patterns.iter().filter(|p| !p.is_ground()).collect();
    let Some(first) = with_vars.first() else { return true };
    let mut reached: Vec<&Variable> = first.variables();
    let mut placed = vec![false; with_vars.len()];
    placed[0] = true;
    loop {
        let mut grew = false;
        for (i, p) in with_vars.iter().enumerate() {
            if !placed[i] && p.variables().iter().any(|v| reached.contains(v)) {
                placed[i] = true;
                grew = true;
                for v in p.variables() {
                    if !reached.contains(&v) {
                        reached.push(v);
                    }
                }
            }
        }
        if !grew {
            return placed.iter().all(|&p| p);
        }
    }
}
