//! Iterative subgraph matching: one superstep per triple pattern.
//!
//! Every superstep computes candidate vertices for the pattern's subject and
//! object, lets each triplet match itself against the pattern and send its
//! partial results to the edge's destination, merges the messages per
//! vertex and installs them as the vertices' new Match_Track tables.
//!
//! Partial results are kept per relation ([`TrackKey`]). When a pattern's
//! subject variable names a live relation, the matched triplet extends that
//! relation's fragment on the source vertex; when its object variable does,
//! the result is joined with the fragment already on the destination. The
//! natural join of all live relations is, after every superstep, exactly
//! the solution set of the patterns evaluated so far.

mod state;
mod table;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::graph::{Accumulator, EdgeScope, PropertyGraph, Triplet, VertexId};
use crate::query::{PatternTerm, TriplePattern, Variable};

pub use state::{apply_inbox, join_mapper, merge_msg, Inbox, Track, TrackKey, VertexMessage, VertexState};
pub use table::{BindingRow, MTable, TableError};

/// Vertices a pattern position may bind to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidates {
    All,
    Only(HashSet<VertexId>),
}

impl Candidates {
    pub fn contains(&self, v: VertexId) -> bool {
        match self {
            Candidates::All => true,
            Candidates::Only(set) => set.contains(&v),
        }
    }

    /// `None` stands for all vertices.
    pub fn size(&self) -> Option<usize> {
        match self {
            Candidates::All => None,
            Candidates::Only(set) => Some(set.len()),
        }
    }

    fn none() -> Self {
        Candidates::Only(HashSet::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets {
    pub subject: Candidates,
    pub object: Candidates,
    pub predicate: PatternTerm,
}

/// Distinct values of `var` over the live tables of all vertices.
pub fn bindings_of(graph: &PropertyGraph<VertexState>, var: &Variable) -> HashSet<VertexId> {
    use rayon::prelude::*;
    let acc = Accumulator::new();
    graph.par_vertices().for_each(|(_, state)| {
        let mut local = Vec::new();
        for (_, m_t) in state.live_tracks() {
            local.extend(m_t.values(var));
        }
        if !local.is_empty() {
            acc.extend(local);
        }
    });
    acc.into_set()
}

fn position_candidates(graph: &PropertyGraph<VertexState>, term: &PatternTerm, bound: &HashSet<Variable>) -> Candidates {
    match term {
        PatternTerm::Const(c) if graph.contains_vertex(*c) => Candidates::Only(HashSet::from([*c])),
        PatternTerm::Const(_) => Candidates::none(),
        PatternTerm::Var(v) if bound.contains(v) => Candidates::Only(bindings_of(graph, v)),
        PatternTerm::Var(_) => Candidates::All,
    }
}

pub fn find_candidate_vertices(
    graph: &PropertyGraph<VertexState>,
    pattern: &TriplePattern,
    bound: &HashSet<Variable>,
) -> CandidateSets {
    let subject = position_candidates(graph, &pattern.s, bound);
    let object = if pattern.o == pattern.s {
        subject.clone()
    } else {
        position_candidates(graph, &pattern.o, bound)
    };
    CandidateSets { subject, object, predicate: pattern.p.clone() }
}

/// Whether some vertex holds a live table under `Var(var)`.
fn is_homed(graph: &PropertyGraph<VertexState>, var: &Variable) -> bool {
    use rayon::prelude::*;
    let key = TrackKey::Var(var.clone());
    graph.par_vertices().any(|(_, s)| s.live(&key).is_some())
}

/// Everything `send_msg` needs to know about the current superstep.
#[derive(Debug, Clone)]
pub struct Plan {
    pub iteration: usize,
    pub pattern: TriplePattern,
    pub candidates: CandidateSets,
    /// The subject variable names a live relation that must be extended.
    pub subject_homed: bool,
    /// The object variable names a live relation that must be joined.
    pub object_homed: bool,
}

impl Plan {
    pub fn new(graph: &PropertyGraph<VertexState>, iteration: usize, pattern: &TriplePattern, bound: &HashSet<Variable>) -> Self {
        let candidates = find_candidate_vertices(graph, pattern, bound);
        let homed = |t: &PatternTerm| t.as_var().is_some_and(|v| bound.contains(v) && is_homed(graph, v));
        let subject_homed = homed(&pattern.s);
        let object_homed = pattern.o != pattern.s && homed(&pattern.o);
        Plan { iteration, pattern: pattern.clone(), candidates, subject_homed, object_homed }
    }

    /// A plan that matches nothing, used once an earlier superstep came up
    /// empty.
    fn exhausted(iteration: usize, pattern: &TriplePattern) -> Self {
        let candidates =
            CandidateSets { subject: Candidates::none(), object: Candidates::none(), predicate: pattern.p.clone() };
        Plan { iteration, pattern: pattern.clone(), candidates, subject_homed: false, object_homed: false }
    }

    pub fn dst_key(&self) -> TrackKey {
        match &self.pattern.o {
            PatternTerm::Var(v) => TrackKey::Var(v.clone()),
            PatternTerm::Const(_) => TrackKey::Anchor(self.iteration),
        }
    }

    pub fn src_key(&self) -> Option<TrackKey> {
        self.pattern.s.as_var().map(|v| TrackKey::Var(v.clone()))
    }

    pub fn scope(&self) -> EdgeScope {
        match self.pattern.p {
            PatternTerm::Const(c) => EdgeScope::Label(c),
            PatternTerm::Var(_) => EdgeScope::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Src,
    Dst,
}

pub type Outgoing = Vec<(Endpoint, TrackKey, VertexMessage)>;

/// Matches one triplet against the current pattern.
pub fn send_msg(t: &Triplet<'_, VertexState>, plan: &Plan) -> Outgoing {
    let mut out = Outgoing::new();
    let cands = &plan.candidates;
    if !cands.subject.contains(t.src_id) || !cands.object.contains(t.dst_id) {
        return out;
    }
    let reject = |mut out: Outgoing| {
        if let Some(key) = plan.src_key() {
            out.push((Endpoint::Src, key, VertexMessage::to_src()));
        }
        out
    };

    let p = &plan.pattern;
    let mut row = BindingRow::new();
    for (term, value) in [(&p.s, t.src_id), (&p.p, t.edge_label), (&p.o, t.dst_id)] {
        let ok = match term {
            PatternTerm::Const(c) => *c == value,
            PatternTerm::Var(v) => row.bind(v.clone(), value),
        };
        if !ok {
            return reject(out);
        }
    }

    let mut m_t = MTable::single(&row);
    if plan.subject_homed {
        let key = plan.src_key().expect("homed subject is a variable");
        match t.src_prop.live(&key) {
            Some(fragment) => m_t = fragment.natural_join(&m_t),
            None => return reject(out),
        }
    }
    if plan.object_homed {
        match t.dst_prop.live(&plan.dst_key()) {
            Some(fragment) => m_t = m_t.natural_join(fragment),
            None => return reject(out),
        }
    }
    if m_t.is_empty() {
        return reject(out);
    }
    out.push((Endpoint::Dst, plan.dst_key(), VertexMessage::to_dst(m_t)));
    reject(out)
}

/// Retires the live tables of bound subject/object variables on candidate
/// vertices that were not refreshed under the same key in this superstep.
/// Their rows were either extended into the new relation or had no
/// continuation.
pub fn end_flag_sweep(
    graph: &PropertyGraph<VertexState>,
    pattern: &TriplePattern,
    candidates: &CandidateSets,
    refreshed: &HashSet<(VertexId, TrackKey)>,
) -> Vec<(VertexId, TrackKey)> {
    let mut out = Vec::new();
    for (term, cands) in [(&pattern.s, &candidates.subject), (&pattern.o, &candidates.object)] {
        let (PatternTerm::Var(v), Candidates::Only(set)) = (term, cands) else { continue };
        let key = TrackKey::Var(v.clone());
        for &u in set {
            let live = graph.vertex(u).is_some_and(|s| s.live(&key).is_some());
            if live && !refreshed.contains(&(u, key.clone())) {
                out.push((u, key.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// What happened in one superstep.
#[derive(Debug, Clone)]
pub struct IterationReport {
    pub iteration: usize,
    pub pattern: TriplePattern,
    pub candidates: CandidateSets,
    pub messages_sent: usize,
    /// Vertices that received a nonempty table, with the track it went to.
    pub refreshed: Vec<(VertexId, TrackKey)>,
    /// Live tables retired by the sweep.
    pub swept: Vec<(VertexId, TrackKey)>,
    pub end_vertices: usize,
    pub mt_rows: usize,
}

/// A live table at the end of matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndTable {
    pub vertex: VertexId,
    pub key: TrackKey,
    pub m_t: Arc<MTable>,
}

#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub end_tables: Vec<EndTable>,
    pub iterations: Vec<IterationReport>,
    /// Some superstep produced no partial result, so there are no solutions.
    pub exhausted: bool,
}

/// Step-by-step driver over patterns already in evaluation order.
pub struct Matcher {
    graph: PropertyGraph<VertexState>,
    patterns: Vec<TriplePattern>,
    next: usize,
    bound: HashSet<Variable>,
    exhausted: bool,
    sweep: bool,
}

impl Matcher {
    pub fn new<V>(graph: &PropertyGraph<V>, patterns: Vec<TriplePattern>) -> Self {
        Matcher {
            graph: graph.map_vertices(|_, _| VertexState::default()),
            patterns,
            next: 0,
            bound: HashSet::new(),
            exhausted: false,
            sweep: true,
        }
    }

    /// Turns the end-flag sweep off. Only useful to observe what goes wrong
    /// without it.
    pub fn without_sweep(mut self) -> Self {
        self.sweep = false;
        self
    }

    pub fn state(&self) -> &PropertyGraph<VertexState> {
        &self.graph
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn is_done(&self) -> bool {
        self.next == self.patterns.len()
    }

    /// Runs the next superstep; `None` once every pattern has been evaluated.
    pub fn step(&mut self) -> Option<IterationReport> {
        let iteration = self.next;
        let pattern = self.patterns.get(iteration)?.clone();
        self.next += 1;

        let plan = if self.exhausted {
            Plan::exhausted(iteration, &pattern)
        } else {
            Plan::new(&self.graph, iteration, &pattern, &self.bound)
        };

        let messages = self.graph.aggregate_messages(
            plan.scope(),
            |t, outbox| {
                for (endpoint, key, msg) in send_msg(t, &plan) {
                    let inbox = Inbox::single(key, msg);
                    match endpoint {
                        Endpoint::Src => outbox.send_to_src(inbox),
                        Endpoint::Dst => outbox.send_to_dst(inbox),
                    }
                }
            },
            Inbox::merge,
        );
        let messages_sent = messages.sent();

        let mut refreshed: Vec<(VertexId, TrackKey)> = messages
            .iter()
            .flat_map(|(v, inbox)| {
                inbox.0.iter().filter(|(_, m)| m.end_flag && !m.m_t.is_empty()).map(move |(k, _)| (v, k.clone()))
            })
            .collect();
        refreshed.sort();

        self.graph = self
            .graph
            .join_vertices(messages.into_table(), |_, old, inbox| apply_inbox(old, inbox))
            .expect("messages only address graph vertices");

        let refreshed_set: HashSet<(VertexId, TrackKey)> = refreshed.iter().cloned().collect();
        let swept = if self.sweep {
            end_flag_sweep(&self.graph, &pattern, &plan.candidates, &refreshed_set)
        } else {
            Vec::new()
        };
        if !swept.is_empty() {
            let mut per_vertex: HashMap<VertexId, Vec<&TrackKey>> = HashMap::new();
            for (v, key) in &swept {
                per_vertex.entry(*v).or_default().push(key);
            }
            self.graph = self
                .graph
                .join_vertices(per_vertex, |_, old, keys| {
                    let mut next = old.clone();
                    for key in keys {
                        next.kill(key);
                    }
                    next
                })
                .expect("swept vertices exist");
        }

        if refreshed.is_empty() {
            self.exhausted = true;
        }
        self.bound.extend(pattern.variables().into_iter().cloned());

        let (end_vertices, mt_rows) = self
            .graph
            .vertices()
            .map(|(_, s)| (usize::from(s.is_end()), s.live_tracks().map(|(_, t)| t.len()).sum::<usize>()))
            .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

        Some(IterationReport {
            iteration,
            pattern,
            candidates: plan.candidates,
            messages_sent,
            refreshed,
            swept,
            end_vertices,
            mt_rows,
        })
    }

    /// Live tables, ordered by track and vertex. Empty once exhausted.
    pub fn end_tables(&self) -> Vec<EndTable> {
        if self.exhausted {
            return Vec::new();
        }
        let mut out: Vec<EndTable> = self
            .graph
            .vertices()
            .flat_map(|(vertex, s)| {
                s.live_tracks()
                    .filter(|(_, t)| !t.is_empty())
                    .map(move |(key, m_t)| EndTable { vertex, key: key.clone(), m_t: Arc::clone(m_t) })
            })
            .collect();
        out.sort_by(|a, b| (&a.key, a.vertex).cmp(&(&b.key, b.vertex)));
        out
    }

    pub fn run(mut self) -> MatchOutcome {
        let mut iterations = Vec::with_capacity(self.patterns.len());
        while let Some(report) = self.step() {
            iterations.push(report);
        }
        MatchOutcome { end_tables: self.end_tables(), iterations, exhausted: self.exhausted }
    }
}

/// Runs every superstep and returns the live end tables.
pub fn do_match<V>(graph: &PropertyGraph<V>, ordered: &[TriplePattern]) -> MatchOutcome {
    Matcher::new(graph, ordered.to_vec()).run()
}
