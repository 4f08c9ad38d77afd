//! In-memory vertex-centric graph with the operator set the matcher needs:
//! a vertex table, a shared edge store, a triplet view, message aggregation
//! over triplets and a functional vertex join.
//!
//! Vertex properties are replaced wholesale between supersteps; the edge
//! store and its indexes are shared by every version of a graph.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::rdf::{TermId, Triple};

/// A vertex is identified by the id of the term it represents.
pub type VertexId = TermId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: TermId,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
}

const NO_SLOT: u32 = u32::MAX;

#[derive(Debug)]
struct Topology {
    edges: Vec<Edge>,
    /// (src slot, dst slot) per edge, parallel to `edges`.
    endpoints: Vec<(u32, u32)>,
    /// slot -> vertex id
    vertex_ids: Vec<VertexId>,
    /// term id -> slot, `NO_SLOT` for terms that are not vertices
    slot_of: Vec<u32>,
    by_label: HashMap<TermId, Vec<u32>>,
}

impl Topology {
    fn slot(&self, id: VertexId) -> Option<usize> {
        match self.slot_of.get(id.index()) {
            Some(&s) if s != NO_SLOT => Some(s as usize),
            _ => None,
        }
    }
}

/// Which edges a superstep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeScope {
    All,
    /// Only edges carrying this predicate label.
    Label(TermId),
}

#[derive(Debug)]
pub struct PropertyGraph<V> {
    topology: Arc<Topology>,
    props: Vec<V>,
}

impl<V: Clone> Clone for PropertyGraph<V> {
    fn clone(&self) -> Self {
        PropertyGraph { topology: Arc::clone(&self.topology), props: self.props.clone() }
    }
}

/// An edge together with the properties of both endpoints.
#[derive(Debug, Clone, Copy)]
pub struct Triplet<'a, V> {
    pub src_id: VertexId,
    pub dst_id: VertexId,
    pub src_prop: &'a V,
    pub dst_prop: &'a V,
    pub edge_label: TermId,
}

/// Collects the messages one `send` invocation emits.
pub struct Outbox<M> {
    src: VertexId,
    dst: VertexId,
    buf: Vec<(VertexId, M)>,
}

impl<M> Outbox<M> {
    pub fn send_to_src(&mut self, msg: M) {
        self.buf.push((self.src, msg));
    }

    pub fn send_to_dst(&mut self, msg: M) {
        self.buf.push((self.dst, msg));
    }
}

/// Result of [`PropertyGraph::aggregate_messages`]: one merged message per
/// vertex that received anything.
#[derive(Debug, Clone)]
pub struct Messages<M> {
    table: HashMap<VertexId, M>,
    sent: usize,
}

impl<M> Messages<M> {
    pub fn get(&self, v: VertexId) -> Option<&M> {
        self.table.get(&v)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Total messages emitted before merging.
    pub fn sent(&self) -> usize {
        self.sent
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &M)> {
        self.table.iter().map(|(&k, v)| (k, v))
    }

    pub fn into_table(self) -> HashMap<VertexId, M> {
        self.table
    }
}

impl<V> PropertyGraph<V> {
    /// Builds the graph of `triples`: one vertex per distinct subject or
    /// object, one edge per distinct statement. Terms that only ever occur as
    /// predicates do not become vertices.
    pub fn build(triples: &[Triple], init: impl Fn(VertexId) -> V) -> Self {
        let max_id = triples.iter().map(|t| t.s.0.max(t.p.0).max(t.o.0) as usize + 1).max();
        let mut slot_of = vec![NO_SLOT; max_id.unwrap_or(0)];
        let mut vertex_ids = Vec::new();
        let mut edges = Vec::with_capacity(triples.len());
        let mut endpoints = Vec::with_capacity(triples.len());
        let mut seen = HashSet::with_capacity(triples.len());
        let mut by_label: HashMap<TermId, Vec<u32>> = HashMap::new();

        let mut slot = |id: VertexId, vertex_ids: &mut Vec<VertexId>| {
            let s = &mut slot_of[id.index()];
            if *s == NO_SLOT {
                *s = vertex_ids.len() as u32;
                vertex_ids.push(id);
            }
            *s
        };

        for t in triples {
            let edge = Edge { src: t.s, dst: t.o, label: t.p };
            let s = slot(t.s, &mut vertex_ids);
            let o = slot(t.o, &mut vertex_ids);
            if seen.insert(edge) {
                by_label.entry(t.p).or_default().push(edges.len() as u32);
                edges.push(edge);
                endpoints.push((s, o));
            }
        }

        let props = vertex_ids.iter().map(|&v| init(v)).collect();
        PropertyGraph {
            topology: Arc::new(Topology { edges, endpoints, vertex_ids, slot_of, by_label }),
            props,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.props.len()
    }

    pub fn num_edges(&self) -> usize {
        self.topology.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.topology.edges
    }

    pub fn contains_vertex(&self, id: VertexId) -> bool {
        self.topology.slot(id).is_some()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&V> {
        self.topology.slot(id).map(|s| &self.props[s])
    }

    /// Label of a vertex: the term it was created from.
    pub fn label_of(&self, id: VertexId) -> Option<TermId> {
        self.topology.slot(id).map(|_| id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &V)> {
        self.topology.vertex_ids.iter().copied().zip(self.props.iter())
    }

    pub fn par_vertices(&self) -> impl IndexedParallelIterator<Item = (VertexId, &V)>
    where
        V: Sync,
    {
        self.topology.vertex_ids.par_iter().copied().zip(self.props.par_iter())
    }

    /// True when both graphs were derived from the same `build` call.
    pub fn shares_edges_with<W>(&self, other: &PropertyGraph<W>) -> bool {
        Arc::ptr_eq(&self.topology, &other.topology)
    }

    fn triplet_at(&self, edge_index: usize) -> Triplet<'_, V> {
        let e = self.topology.edges[edge_index];
        let (s, d) = self.topology.endpoints[edge_index];
        Triplet {
            src_id: e.src,
            dst_id: e.dst,
            src_prop: &self.props[s as usize],
            dst_prop: &self.props[d as usize],
            edge_label: e.label,
        }
    }

    /// One triplet per edge, in edge-store order.
    pub fn triplets(&self) -> impl Iterator<Item = Triplet<'_, V>> {
        (0..self.num_edges()).map(move |i| self.triplet_at(i))
    }

    /// Edge indexes a scope covers, or `None` for all edges.
    fn scoped_edges(&self, scope: EdgeScope) -> Option<&[u32]> {
        match scope {
            EdgeScope::All => None,
            EdgeScope::Label(l) => Some(self.topology.by_label.get(&l).map_or(&[], Vec::as_slice)),
        }
    }

    pub fn num_edges_in(&self, scope: EdgeScope) -> usize {
        self.scoped_edges(scope).map_or(self.num_edges(), <[u32]>::len)
    }

    /// Runs `send` over every triplet in `scope` (in parallel) and folds the
    /// messages addressed to each vertex with `merge`. `merge` must be
    /// associative and commutative; the fold order is unspecified. All sends
    /// observe the same snapshot of vertex properties.
    pub fn aggregate_messages<M, S, F>(&self, scope: EdgeScope, send: S, merge: F) -> Messages<M>
    where
        V: Sync,
        M: Send,
        S: Fn(&Triplet<'_, V>, &mut Outbox<M>) + Sync,
        F: Fn(M, M) -> M + Sync,
    {
        let visit = |mut acc: (HashMap<VertexId, M>, usize), edge_index: usize| {
            let triplet = self.triplet_at(edge_index);
            let mut outbox = Outbox { src: triplet.src_id, dst: triplet.dst_id, buf: Vec::new() };
            send(&triplet, &mut outbox);
            acc.1 += outbox.buf.len();
            for (v, msg) in outbox.buf {
                merge_into(&mut acc.0, v, msg, &merge);
            }
            acc
        };
        let combine = |mut a: (HashMap<VertexId, M>, usize), mut b: (HashMap<VertexId, M>, usize)| {
            if a.0.len() < b.0.len() {
                std::mem::swap(&mut a, &mut b);
            }
            for (v, msg) in b.0 {
                merge_into(&mut a.0, v, msg, &merge);
            }
            (a.0, a.1 + b.1)
        };
        let empty = || (HashMap::new(), 0usize);

        let (table, sent) = match self.scoped_edges(scope) {
            None => (0..self.num_edges())
                .into_par_iter()
                .fold(empty, visit)
                .reduce(empty, combine),
            Some(indexes) => indexes
                .par_iter()
                .map(|&i| i as usize)
                .fold(empty, visit)
                .reduce(empty, combine),
        };
        Messages { table, sent }
    }

    /// Returns a new graph in which every vertex named in `updates` carries
    /// `mapper(id, old, update)`; all other vertices keep their property.
    /// `mapper` always sees the property from before the join, so a vertex
    /// named twice ends up with the result of its last update only.
    pub fn join_vertices<U>(
        &self,
        updates: impl IntoIterator<Item = (VertexId, U)>,
        mut mapper: impl FnMut(VertexId, &V, U) -> V,
    ) -> Result<PropertyGraph<V>, GraphError>
    where
        V: Clone,
    {
        let mut next = self.clone();
        for (id, update) in updates {
            let slot = self.topology.slot(id).ok_or(GraphError::UnknownVertex(id))?;
            next.props[slot] = mapper(id, &self.props[slot], update);
        }
        Ok(next)
    }

    /// Same vertex and edge sets with new vertex properties.
    pub fn map_vertices<W>(&self, f: impl Fn(VertexId, &V) -> W) -> PropertyGraph<W> {
        let props = self.vertices().map(|(id, p)| f(id, p)).collect();
        PropertyGraph { topology: Arc::clone(&self.topology), props }
    }
}

fn merge_into<M>(table: &mut HashMap<VertexId, M>, v: VertexId, msg: M, merge: &impl Fn(M, M) -> M) {
    let merged = match table.remove(&v) {
        Some(old) => merge(old, msg),
        None => msg,
    };
    table.insert(v, merged);
}

/// Set-union channel that tasks running inside a superstep may add to
/// concurrently. The final set does not depend on the schedule.
#[derive(Debug, Default)]
pub struct Accumulator<T: Eq + Hash> {
    inner: Mutex<HashSet<T>>,
}

impl<T: Eq + Hash> Accumulator<T> {
    pub fn new() -> Self {
        Accumulator { inner: Mutex::new(HashSet::new()) }
    }

    pub fn add(&self, item: T) {
        self.inner.lock().expect("accumulator poisoned").insert(item);
    }

    /// Adds a batch under a single lock acquisition.
    pub fn extend(&self, items: impl IntoIterator<Item = T>) {
        self.inner.lock().expect("accumulator poisoned").extend(items);
    }

    pub fn into_set(self) -> HashSet<T> {
        self.inner.into_inner().expect("accumulator poisoned")
    }
}
