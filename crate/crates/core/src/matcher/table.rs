use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::query::Variable;
use crate::rdf::TermId;

/// One variable mapping. A variable is bound at most once by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BindingRow(BTreeMap<Variable, TermId>);

impl BindingRow {
    pub fn new() -> Self {
        BindingRow::default()
    }

    /// Binds `var`; returns false, leaving the row unchanged, when it is
    /// already bound to a different term.
    pub fn bind(&mut self, var: Variable, value: TermId) -> bool {
        match self.0.get(&var) {
            Some(&old) => old == value,
            None => {
                self.0.insert(var, value);
                true
            }
        }
    }

    pub fn get(&self, var: &Variable) -> Option<TermId> {
        self.0.get(var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, TermId)> {
        self.0.iter().map(|(k, &v)| (k, v))
    }
}

impl<V: Into<Variable>> FromIterator<(V, TermId)> for BindingRow {
    fn from_iter<I: IntoIterator<Item = (V, TermId)>>(iter: I) -> Self {
        BindingRow(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("cannot union tables over {left:?} and {right:?}")]
    SchemaMismatch { left: Vec<Variable>, right: Vec<Variable> },
    #[error("variable {0} is not in the table schema")]
    MissingVariable(Variable),
}

/// A set of binding rows over one schema. Columns are kept in variable
/// order, so two tables over the same variables have identical layouts.
///
/// A table without rows is treated as schema-less by [`MTable::union`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MTable {
    schema: Vec<Variable>,
    rows: BTreeSet<Box<[TermId]>>,
}

impl MTable {
    /// No schema, no rows.
    pub fn empty() -> Self {
        MTable { schema: Vec::new(), rows: BTreeSet::new() }
    }

    /// No schema and the single empty row: the identity of natural join.
    pub fn unit() -> Self {
        let mut t = MTable::empty();
        t.rows.insert(Box::new([]));
        t
    }

    pub fn with_schema(vars: impl IntoIterator<Item = Variable>) -> Self {
        let mut schema: Vec<Variable> = vars.into_iter().collect();
        schema.sort();
        schema.dedup();
        MTable { schema, rows: BTreeSet::new() }
    }

    /// Table holding exactly `row`.
    pub fn single(row: &BindingRow) -> Self {
        let schema: Vec<Variable> = row.0.keys().cloned().collect();
        let values: Box<[TermId]> = row.0.values().copied().collect();
        MTable { schema, rows: BTreeSet::from([values]) }
    }

    pub fn from_rows(vars: impl IntoIterator<Item = Variable>, rows: impl IntoIterator<Item = BindingRow>) -> Result<Self, TableError> {
        let mut t = MTable::with_schema(vars);
        for row in rows {
            t.insert(&row)?;
        }
        Ok(t)
    }

    /// Inserts `row`, which must bind exactly the schema variables.
    pub fn insert(&mut self, row: &BindingRow) -> Result<bool, TableError> {
        if row.len() != self.schema.len() {
            let missing = self.schema.iter().find(|v| row.get(v).is_none());
            let extra = row.0.keys().find(|v| !self.schema.contains(v));
            let var = missing.or(extra).expect("lengths differ").clone();
            return Err(TableError::MissingVariable(var));
        }
        let values = self
            .schema
            .iter()
            .map(|v| row.get(v).ok_or_else(|| TableError::MissingVariable(v.clone())))
            .collect::<Result<Box<[TermId]>, _>>()?;
        Ok(self.rows.insert(values))
    }

    pub fn schema(&self) -> &[Variable] {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &Variable) -> Option<usize> {
        self.schema.binary_search(var).ok()
    }

    pub fn has_var(&self, var: &Variable) -> bool {
        self.column(var).is_some()
    }

    /// Raw rows, values in schema order.
    pub fn raw_rows(&self) -> impl Iterator<Item = &[TermId]> {
        self.rows.iter().map(|r| &r[..])
    }

    pub fn rows(&self) -> impl Iterator<Item = BindingRow> + '_ {
        self.rows.iter().map(|r| BindingRow(self.schema.iter().cloned().zip(r.iter().copied()).collect()))
    }

    /// Distinct values bound to `var`.
    pub fn values<'a>(&'a self, var: &Variable) -> impl Iterator<Item = TermId> + 'a {
        let col = self.column(var);
        self.rows.iter().filter_map(move |r| col.map(|c| r[c]))
    }

    /// Row-set union. Tables with rows must share a schema.
    pub fn union(mut self, mut other: MTable) -> Result<MTable, TableError> {
        if other.is_empty() {
            return Ok(self);
        }
        if self.is_empty() {
            return Ok(other);
        }
        if self.schema != other.schema {
            return Err(TableError::SchemaMismatch { left: self.schema, right: other.schema });
        }
        if self.rows.len() < other.rows.len() {
            std::mem::swap(&mut self.rows, &mut other.rows);
        }
        self.rows.append(&mut other.rows);
        Ok(self)
    }

    /// Relational natural join; a cross product when no variable is shared.
    pub fn natural_join(&self, other: &MTable) -> MTable {
        let (build, probe) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut schema: Vec<Variable> = build.schema.iter().chain(&probe.schema).cloned().collect();
        schema.sort();
        schema.dedup();

        let shared: Vec<(usize, usize)> = build
            .schema
            .iter()
            .enumerate()
            .filter_map(|(i, v)| probe.column(v).map(|j| (i, j)))
            .collect();
        // where each output column comes from: build side first
        let sources: Vec<Source> = schema
            .iter()
            .map(|v| match build.column(v) {
                Some(i) => Source::Build(i),
                None => Source::Probe(probe.column(v).expect("column from one side")),
            })
            .collect();

        let mut index: HashMap<Vec<TermId>, Vec<&[TermId]>> = HashMap::new();
        for row in build.raw_rows() {
            let key = shared.iter().map(|&(i, _)| row[i]).collect();
            index.entry(key).or_default().push(row);
        }

        let mut rows = BTreeSet::new();
        let mut key = Vec::with_capacity(shared.len());
        for p in probe.raw_rows() {
            key.clear();
            key.extend(shared.iter().map(|&(_, j)| p[j]));
            let Some(matches) = index.get(&key) else { continue };
            for b in matches {
                let row: Box<[TermId]> = sources
                    .iter()
                    .map(|s| match *s {
                        Source::Build(i) => b[i],
                        Source::Probe(j) => p[j],
                    })
                    .collect();
                rows.insert(row);
            }
        }
        MTable { schema, rows }
    }

    /// Restriction to `vars` (which need not be sorted) with deduplication.
    pub fn project(&self, vars: &[Variable]) -> Result<MTable, TableError> {
        let mut schema = vars.to_vec();
        schema.sort();
        schema.dedup();
        let cols = schema
            .iter()
            .map(|v| self.column(v).ok_or_else(|| TableError::MissingVariable(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = self.rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        Ok(MTable { schema, rows })
    }

    /// Keeps the rows that bind `var` to `value`.
    pub fn select_eq(&self, var: &Variable, value: TermId) -> MTable {
        let rows = match self.column(var) {
            Some(c) => self.rows.iter().filter(|r| r[c] == value).cloned().collect(),
            None => BTreeSet::new(),
        };
        MTable { schema: self.schema.clone(), rows }
    }
}

#[derive(Clone, Copy)]
enum Source {
    Build(usize),
    Probe(usize),
}

impl fmt::Debug for MTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.schema.iter().map(|v| v.to_string()).collect();
        write!(f, "MTable[{}]{{", vars.join(" "))?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let vals: Vec<String> = r.iter().map(|t| t.0.to_string()).collect();
            write!(f, "({})", vals.join(","))?;
        }
        f.write_str("}")
    }
}
