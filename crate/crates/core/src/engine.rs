//! Loading a dataset and answering queries against it.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::time::Instant;

use crate::assembly::{natural_join_all, oracle_evaluate, project, union_by_track, SolutionSet};
use crate::graph::PropertyGraph;
use crate::matcher::{do_match, MatchOutcome};
use crate::query::{order_bgp, parse_query_with_prefixes, BgpQuery, QueryError, TriplePattern};
use crate::rdf::{parse_ntriples, Dictionary, DictionaryOverlay, RdfError, Term, TermId, Triple};
use crate::stats::{millis, IterationStats, RunStats};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Data(#[from] RdfError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("cannot start thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// An in-memory dataset: dictionary, statements and the graph built over
/// them. Read-only once loaded.
pub struct Store {
    dict: Dictionary,
    triples: Vec<Triple>,
    graph: PropertyGraph<()>,
}

/// A parsed query with its evaluation order and display forms.
#[derive(Debug, Clone)]
pub struct PreparedQuery {
    pub query: BgpQuery,
    pub ordered: Vec<TriplePattern>,
    /// `ordered`, rendered with N-Triples constants.
    pub rendered: Vec<String>,
    pub parse_ms: f64,
}

/// Result of one query run.
#[derive(Debug, Clone)]
pub struct Execution {
    pub solutions: SolutionSet,
    pub stats: RunStats,
    pub outcome: MatchOutcome,
}

impl Store {
    pub fn new(triples: Vec<Triple>, dict: Dictionary) -> Self {
        let graph = PropertyGraph::build(&triples, |_| ());
        Store { dict, triples, graph }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RdfError> {
        let file = File::open(path)?;
        let (triples, dict) = parse_ntriples(BufReader::new(file))?;
        Ok(Store::new(triples, dict))
    }

    pub fn from_ntriples(text: &str) -> Result<Self, RdfError> {
        let (triples, dict) = parse_ntriples(text.as_bytes())?;
        Ok(Store::new(triples, dict))
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    /// Statements as read, duplicates included.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn graph(&self) -> &PropertyGraph<()> {
        &self.graph
    }

    fn term(&self, id: TermId) -> Term {
        self.dict.term_of(id).expect("solutions only bind dataset terms").clone()
    }

    pub fn prepare(&self, text: &str) -> Result<PreparedQuery, QueryError> {
        self.prepare_with_prefixes(text, &BTreeMap::new())
    }

    /// Parses and orders a query. Constants missing from the dataset get
    /// query-local ids and match nothing.
    pub fn prepare_with_prefixes(&self, text: &str, prefixes: &BTreeMap<String, String>) -> Result<PreparedQuery, QueryError> {
        let start = Instant::now();
        let mut overlay = DictionaryOverlay::new(&self.dict);
        let query = parse_query_with_prefixes(text, prefixes, &mut overlay)?;
        let ordered = order_bgp(&query.patterns)?;
        let rendered = ordered
            .iter()
            .map(|p| p.render(|id| overlay.term_of(id).map_or_else(|_| id.to_string(), ToString::to_string)))
            .collect();
        Ok(PreparedQuery { query, ordered, rendered, parse_ms: millis(start.elapsed()) })
    }

    /// Runs the matcher and the final join on the current rayon pool.
    pub fn execute(&self, prepared: &PreparedQuery) -> Execution {
        let start = Instant::now();
        let outcome = do_match(&self.graph, &prepared.ordered);
        let match_ms = millis(start.elapsed());

        let start = Instant::now();
        let projection = &prepared.query.projection;
        let solutions = if outcome.end_tables.is_empty() {
            SolutionSet::empty(projection.clone())
        } else {
            let tables = union_by_track(&outcome.end_tables).into_iter().map(|(_, t)| t).collect();
            let joined = natural_join_all(tables);
            if joined.is_empty() {
                SolutionSet::empty(projection.clone())
            } else {
                project(&joined, projection, |id| self.term(id)).expect("every projected variable is matched")
            }
        };
        let join_ms = millis(start.elapsed());

        let iterations = outcome
            .iterations
            .iter()
            .zip(&prepared.rendered)
            .map(|(r, text)| IterationStats {
                pattern: text.clone(),
                subject_candidates: r.candidates.subject.size(),
                object_candidates: r.candidates.object.size(),
                messages_sent: r.messages_sent,
                end_vertices: r.end_vertices,
                mt_rows: r.mt_rows,
            })
            .collect();
        let stats = RunStats { iterations, parse_ms: prepared.parse_ms, match_ms, join_ms, solutions: solutions.len() };
        Execution { solutions, stats, outcome }
    }

    /// `execute` on a dedicated pool of `threads` workers (`None`: rayon's
    /// default pool).
    pub fn execute_with_threads(&self, prepared: &PreparedQuery, threads: Option<usize>) -> Result<Execution, EngineError> {
        match threads {
            None => Ok(self.execute(prepared)),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
                Ok(pool.install(|| self.execute(prepared)))
            }
        }
    }

    pub fn query(&self, text: &str) -> Result<SolutionSet, EngineError> {
        Ok(self.execute(&self.prepare(text)?).solutions)
    }

    /// Answers the query with the reference evaluator instead of the matcher.
    pub fn oracle(&self, query: &BgpQuery) -> SolutionSet {
        oracle_evaluate(&self.triples, query, |id| self.term(id))
    }
}
