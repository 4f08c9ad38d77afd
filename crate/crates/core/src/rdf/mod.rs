//! RDF terms, dictionary encoding, triples and N-Triples I/O.

mod dictionary;
mod ntriples;
mod term;

pub use dictionary::{Dictionary, DictionaryOverlay, Interner};
pub use ntriples::{
    parse_line, parse_ntriples, parse_term, parse_ntriples_into, to_ntriples_string, write_ntriples,
    NTriplesReader, ParseError, SyntaxError,
};
pub use term::{Term, TermId, TermKind};

/// A dictionary-encoded statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub s: TermId,
    pub p: TermId,
    pub o: TermId,
}

#[derive(Debug, thiserror::Error)]
pub enum RdfError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown term id {0}")]
    UnknownTermId(TermId),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
