//! The artist/museum example traced superstep by superstep.

use std::collections::HashSet;

use bgpmatch::bundled::{ARTISTS_NT, ARTISTS_RQ};
use bgpmatch::matcher::{Candidates, Matcher, TrackKey};
use bgpmatch::query::is_connectivity_preserving;
use bgpmatch::{Store, Term, TermId, Variable};

fn iri(local: &str) -> Term {
    Term::iri(format!("http://example.org/{local}"))
}

fn id(store: &Store, term: &Term) -> TermId {
    store.dictionary().lookup(term).unwrap()
}

fn var(name: &str) -> TrackKey {
    TrackKey::Var(Variable::new(name))
}

#[test]
fn one_solution() {
    let store = Store::from_ntriples(ARTISTS_NT).unwrap();
    assert_eq!(store.triples().len(), 8);
    let s = store.query(ARTISTS_RQ).unwrap();
    assert_eq!(s.rows(), [vec![iri("rodin"), iri("thinker"), iri("rodinmuseum")]]);
    let prepared = store.prepare(ARTISTS_RQ).unwrap();
    assert_eq!(store.oracle(&prepared.query), s);
}

#[test]
fn intermediate_states() {
    let store = Store::from_ntriples(ARTISTS_NT).unwrap();
    let prepared = store.prepare(ARTISTS_RQ).unwrap();
    assert_eq!(prepared.ordered, prepared.query.patterns, "textual order is already the evaluation order");
    let [artist, picasso, rodin, guernica, thinker, rodinmuseum, paris] =
        ["artist", "picasso", "rodin", "guernica", "thinker", "rodinmuseum"]
            .map(|n| id(&store, &iri(n)))
            .into_iter()
            .chain([id(&store, &Term::literal("paris"))])
            .collect::<Vec<_>>()
            .try_into()
            .unwrap();

    let mut m = Matcher::new(store.graph(), prepared.ordered.clone());

    // ?x type artist: every vertex may be ?x, only "artist" may be the object
    let r1 = m.step().unwrap();
    assert_eq!(r1.candidates.subject, Candidates::All);
    assert_eq!(r1.candidates.object, Candidates::Only(HashSet::from([artist])));
    let ends: Vec<TermId> = m.state().vertices().filter(|(_, s)| s.is_end()).map(|(v, _)| v).collect();
    assert_eq!(ends, [artist]);
    let t = m.state().vertex(artist).unwrap().live(&TrackKey::Anchor(0)).unwrap().clone();
    let xs: HashSet<TermId> = t.values(&Variable::new("x")).collect();
    assert_eq!(xs, HashSet::from([picasso, rodin]));

    // ?x creates ?y: ?x restricted to the two artists
    let r2 = m.step().unwrap();
    assert_eq!(r2.candidates.subject, Candidates::Only(HashSet::from([picasso, rodin])));
    assert_eq!(r2.refreshed, [(thinker, var("y"))]);
    assert!(m.state().vertex(artist).unwrap().live(&TrackKey::Anchor(0)).is_some(), "artist keeps its table");

    // ?y exhibited ?z: guernica is not a ?y candidate, so its edge is skipped
    let r3 = m.step().unwrap();
    assert_eq!(r3.candidates.subject, Candidates::Only(HashSet::from([thinker])));
    assert!(!r3.candidates.subject.contains(guernica));
    let reinasofia = id(&store, &iri("reinasofia"));
    assert!(store.graph().edges().iter().any(|e| e.src == guernica && e.dst == reinasofia));
    assert!(r3.refreshed.iter().all(|(v, _)| *v != reinasofia));
    assert_eq!(r3.refreshed, [(rodinmuseum, var("z"))]);
    assert!(m.state().vertex(thinker).unwrap().live(&var("y")).is_none(), "thinker's table was extended");

    // ?z located "paris"
    let r4 = m.step().unwrap();
    assert_eq!(r4.refreshed, [(paris, TrackKey::Anchor(3))]);
    assert!(m.step().is_none());

    // final join: exactly the "artist" and "paris" tables
    let ends = m.end_tables();
    let holders: Vec<TermId> = ends.iter().map(|e| e.vertex).collect();
    assert_eq!(holders, [artist, paris]);
    assert_eq!(ends[0].m_t.len(), 2);
    assert_eq!(ends[1].m_t.len(), 1);
    assert_eq!(ends[1].m_t.schema().len(), 3);
}

#[test]
fn every_connected_order_gives_the_same_answer() {
    let store = Store::from_ntriples(ARTISTS_NT).unwrap();
    let prepared = store.prepare(ARTISTS_RQ).unwrap();
    let expected = store.execute(&prepared).solutions;
    let patterns = prepared.query.patterns.clone();
    let mut tried = 0;
    for perm in permutations(patterns.len()) {
        let order: Vec<_> = perm.iter().map(|&i| patterns[i].clone()).collect();
        if !is_connectivity_preserving(&order) {
            continue;
        }
        let mut p = prepared.clone();
        p.ordered = order;
        assert_eq!(store.execute(&p).solutions, expected, "order {perm:?}");
        tried += 1;
    }
    // the query is a path a-b-c-d; orders that stay connected: 8
    assert_eq!(tried, 8);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
