use std::fmt;

/// Dense integer code of an interned [`Term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(pub u32);

impl TermId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Iri,
    Literal,
    Blank,
}

/// An RDF term. Equality is structural: two literals with the same lexical
/// form but a different datatype or language tag are different terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    kind: TermKind,
    lexical: String,
    datatype: Option<String>,
    lang: Option<String>,
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term { kind: TermKind::Iri, lexical: iri.into(), datatype: None, lang: None }
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term { kind: TermKind::Blank, lexical: label.into(), datatype: None, lang: None }
    }

    /// A plain literal without datatype or language tag.
    pub fn literal(value: impl Into<String>) -> Self {
        Term { kind: TermKind::Literal, lexical: value.into(), datatype: None, lang: None }
    }

    pub fn typed_literal(value: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term {
            kind: TermKind::Literal,
            lexical: value.into(),
            datatype: Some(datatype.into()),
            lang: None,
        }
    }

    pub fn lang_literal(value: impl Into<String>, lang: impl Into<String>) -> Self {
        Term {
            kind: TermKind::Literal,
            lexical: value.into(),
            datatype: None,
            lang: Some(lang.into()),
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    /// IRI text without angle brackets, literal lexical form, or blank label.
    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn is_literal(&self) -> bool {
        self.kind == TermKind::Literal
    }

    pub fn is_blank(&self) -> bool {
        self.kind == TermKind::Blank
    }
}

/// Renders the term in N-Triples syntax.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write_iri(f, &self.lexical),
            TermKind::Blank => write!(f, "_:{}", self.lexical),
            TermKind::Literal => {
                f.write_str("\"")?;
                for c in self.lexical.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => fmt::Write::write_char(f, c)?,
                    }
                }
                f.write_str("\"")?;
                if let Some(lang) = &self.lang {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &self.datatype {
                    f.write_str("^^")?;
                    write_iri(f, dt)?;
                }
                Ok(())
            }
        }
    }
}

fn write_iri(f: &mut fmt::Formatter<'_>, iri: &str) -> fmt::Result {
    f.write_str("<")?;
    for c in iri.chars() {
        // characters the IRIREF production forbids go out as UCHAR escapes
        if matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') || c <= ' ' {
            write!(f, "\\u{:04X}", c as u32)?;
        } else {
            fmt::Write::write_char(f, c)?;
        }
    }
    f.write_str(">")
}
