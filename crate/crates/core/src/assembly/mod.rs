//! From end-vertex tables to a solution set: grouping, the final natural
//! join and projection. Also home of the reference evaluator.

mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use crate::matcher::{EndTable, MTable, TableError, TrackKey};
use crate::query::Variable;
use crate::rdf::{Term, TermId};

pub use oracle::oracle_evaluate;

/// Merges tables with identical schemas by row-set union. Groups come out
/// ordered by schema.
pub fn union_by_schema(tables: impl IntoIterator<Item = MTable>) -> Vec<MTable> {
    let mut groups: BTreeMap<Vec<Variable>, MTable> = BTreeMap::new();
    for t in tables {
        let key = t.schema().to_vec();
        let merged = match groups.remove(&key) {
            Some(acc) => acc.union(t).expect("same schema"),
            None => t,
        };
        groups.insert(key, merged);
    }
    groups.into_values().collect()
}

/// Reassembles each relation from its per-vertex fragments. Fragments of
/// one relation share a schema, but two relations can have the same schema
/// and must stay apart.
pub fn union_by_track(end_tables: &[EndTable]) -> Vec<(TrackKey, MTable)> {
    let mut groups: BTreeMap<&TrackKey, Vec<MTable>> = BTreeMap::new();
    for e in end_tables {
        groups.entry(&e.key).or_default().push(MTable::clone(&e.m_t));
    }
    groups
        .into_iter()
        .map(|(key, fragments)| {
            let mut merged = union_by_schema(fragments);
            assert_eq!(merged.len(), 1, "fragments of {key} disagree on schema");
            (key.clone(), merged.pop().expect("one group"))
        })
        .collect()
}

/// Natural join of all `tables`. Starts from the widest table and then
/// always takes the table sharing the most variables with what has been
/// joined so far, smaller tables first on ties. Tables sharing nothing are
/// crossed in last. No tables gives the unit table.
pub fn natural_join_all(tables: Vec<MTable>) -> MTable {
    let mut rest: Vec<Option<MTable>> = tables.into_iter().map(Some).collect();
    let first = rest
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.as_ref().map(|t| (i, t)))
        .min_by_key(|(i, t)| (std::cmp::Reverse(t.schema().len()), t.len(), *i))
        .map(|(i, _)| i);
    let Some(first) = first else { return MTable::unit() };
    let mut acc = rest[first].take().expect("present");

    loop {
        let next = rest
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_ref().map(|t| (i, t)))
            .min_by_key(|(i, t)| {
                let shared = t.schema().iter().filter(|v| acc.has_var(v)).count();
                (std::cmp::Reverse(shared), t.len(), *i)
            })
            .map(|(i, _)| i);
        let Some(i) = next else { return acc };
        let t = rest[i].take().expect("present");
        acc = acc.natural_join(&t);
        if acc.is_empty() {
            // the schema still matters to projection
            for t in rest.iter_mut().filter_map(Option::take) {
                acc = acc.natural_join(&t);
            }
            return acc;
        }
    }
}

/// Final query answer: projected rows, deduplicated and sorted by the
/// lexical forms of their terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    vars: Vec<Variable>,
    rows: Vec<Vec<Term>>,
}

fn row_key(row: &[Term]) -> Vec<(&str, &Term)> {
    row.iter().map(|t| (t.lexical(), t)).collect()
}

impl SolutionSet {
    pub fn new(vars: Vec<Variable>, rows: impl IntoIterator<Item = Vec<Term>>) -> Self {
        let mut rows: Vec<Vec<Term>> = rows.into_iter().collect();
        assert!(rows.iter().all(|r| r.len() == vars.len()), "row width must match the projection");
        rows.sort_by(|a, b| row_key(a).cmp(&row_key(b)));
        rows.dedup();
        SolutionSet { vars, rows }
    }

    pub fn empty(vars: Vec<Variable>) -> Self {
        SolutionSet { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows only in `self` and rows only in `other`.
    pub fn difference<'a>(&'a self, other: &'a SolutionSet) -> (Vec<&'a [Term]>, Vec<&'a [Term]>) {
        use std::collections::BTreeSet;
        let a: BTreeSet<&[Term]> = self.rows.iter().map(Vec::as_slice).collect();
        let b: BTreeSet<&[Term]> = other.rows.iter().map(Vec::as_slice).collect();
        (a.difference(&b).copied().collect(), b.difference(&a).copied().collect())
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header: Vec<String> = self.vars.iter().map(ToString::to_string).collect();
        writeln!(f, "{}", header.join("\t"))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// Restricts `t` to `projection` and resolves the ids.
pub fn project(
    t: &MTable,
    projection: &[Variable],
    resolve: impl Fn(TermId) -> Term,
) -> Result<SolutionSet, TableError> {
    let cols = projection
        .iter()
        .map(|v| t.column(v).ok_or_else(|| TableError::MissingVariable(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = t.raw_rows().map(|r| cols.iter().map(|&c| resolve(r[c])).collect());
    Ok(SolutionSet::new(projection.to_vec(), rows))
}
