//! TSV and JSON renderings of a [`SolutionSet`], and readers for both.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::assembly::SolutionSet;
use crate::query::Variable;
use crate::rdf::{parse_term, SyntaxError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ResultsError {
    #[error("line {line}: {reason}")]
    Term { line: usize, reason: SyntaxError },
    #[error("line {line}: expected {expected} columns, found {found}")]
    Width { line: usize, expected: usize, found: usize },
    #[error("bad header: {0}")]
    Header(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
struct JsonResults {
    vars: Vec<String>,
    rows: Vec<Vec<String>>,
}

pub fn write(out: &mut impl Write, solutions: &SolutionSet, format: Format) -> io::Result<()> {
    match format {
        Format::Tsv => write_tsv(out, solutions),
        Format::Json => write_json(out, solutions),
    }
}

/// Header of `?var` names, then one line per row with terms in N-Triples
/// syntax.
pub fn write_tsv(out: &mut impl Write, solutions: &SolutionSet) -> io::Result<()> {
    write!(out, "{solutions}")
}

pub fn write_json(out: &mut impl Write, solutions: &SolutionSet) -> io::Result<()> {
    let doc = JsonResults {
        vars: solutions.vars().iter().map(|v| v.name().to_owned()).collect(),
        rows: solutions.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
    };
    serde_json::to_writer(&mut *out, &doc)?;
    writeln!(out)
}

pub fn to_string(solutions: &SolutionSet, format: Format) -> String {
    let mut buf = Vec::new();
    write(&mut buf, solutions, format).expect("writing to memory");
    String::from_utf8(buf).expect("terms are UTF-8")
}

fn header_var(name: &str) -> Result<Variable, ResultsError> {
    let bare = name.strip_prefix('?').unwrap_or(name);
    if bare.is_empty() {
        return Err(ResultsError::Header(name.to_owned()));
    }
    Ok(Variable::new(bare))
}

pub fn read_tsv(text: &str) -> Result<SolutionSet, ResultsError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ResultsError::Header("missing".into()))?;
    let vars = header.split('\t').map(header_var).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != vars.len() {
            return Err(ResultsError::Width { line: line_no, expected: vars.len(), found: cells.len() });
        }
        let row = cells
            .iter()
            .map(|c| parse_term(c).map_err(|reason| ResultsError::Term { line: line_no, reason }))
            .collect::<Result<Vec<Term>, _>>()?;
        rows.push(row);
    }
    Ok(SolutionSet::new(vars, rows))
}

pub fn read_json(text: &str) -> Result<SolutionSet, ResultsError> {
    let doc: JsonResults = serde_json::from_str(text)?;
    let vars = doc.vars.iter().map(|v| header_var(v)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for (i, r) in doc.rows.iter().enumerate() {
        if r.len() != vars.len() {
            return Err(ResultsError::Width { line: i + 1, expected: vars.len(), found: r.len() });
        }
        let row = r
            .iter()
            .map(|c| parse_term(c).map_err(|reason| ResultsError::Term { line: i + 1, reason }))
            .collect::<Result<Vec<Term>, _>>()?;
        rows.push(row);
    }
    Ok(SolutionSet::new(vars, rows))
}
