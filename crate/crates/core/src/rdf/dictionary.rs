use indexmap::IndexSet;

use super::term::{Term, TermId};
use super::RdfError;

/// Bijective mapping between terms and dense ids, assigned in first-seen
/// order starting at 0. Append-only.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    terms: IndexSet<Term>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `term`, returning the existing id if it was seen before.
    pub fn id_of(&mut self, term: Term) -> TermId {
        let (index, _) = self.terms.insert_full(term);
        to_id(index)
    }

    /// Looks up an id without interning.
    pub fn lookup(&self, term: &Term) -> Option<TermId> {
        self.terms.get_index_of(term).map(to_id)
    }

    pub fn term_of(&self, id: TermId) -> Result<&Term, RdfError> {
        self.terms.get_index(id.index()).ok_or(RdfError::UnknownTermId(id))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, &Term)> {
        self.terms.iter().enumerate().map(|(i, t)| (to_id(i), t))
    }
}

fn to_id(index: usize) -> TermId {
    TermId(u32::try_from(index).expect("dictionary exceeds u32 id space"))
}

/// Anything that can hand out term ids for query constants.
pub trait Interner {
    fn intern(&mut self, term: Term) -> TermId;
}

impl Interner for Dictionary {
    fn intern(&mut self, term: Term) -> TermId {
        self.id_of(term)
    }
}

/// Query-local extension of a frozen dataset dictionary. Terms already in the
/// base keep their ids; unseen constants get fresh ids past the end of the
/// base, so they can never collide with a dataset term and simply match
/// nothing.
#[derive(Debug)]
pub struct DictionaryOverlay<'a> {
    base: &'a Dictionary,
    extra: IndexSet<Term>,
}

impl<'a> DictionaryOverlay<'a> {
    pub fn new(base: &'a Dictionary) -> Self {
        DictionaryOverlay { base, extra: IndexSet::new() }
    }

    pub fn term_of(&self, id: TermId) -> Result<&Term, RdfError> {
        let base_len = self.base.len();
        if id.index() < base_len {
            self.base.term_of(id)
        } else {
            self.extra
                .get_index(id.index() - base_len)
                .ok_or(RdfError::UnknownTermId(id))
        }
    }

    /// Number of constants that were not present in the base dictionary.
    pub fn fresh_count(&self) -> usize {
        self.extra.len()
    }
}

impl Interner for DictionaryOverlay<'_> {
    fn intern(&mut self, term: Term) -> TermId {
        if let Some(id) = self.base.lookup(&term) {
            return id;
        }
        let (index, _) = self.extra.insert_full(term);
        to_id(self.base.len() + index)
    }
}
