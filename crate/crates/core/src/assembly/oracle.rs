//! Reference evaluator: backtracking over patterns with per-position
//! indexes. Shares nothing with the matcher beyond the query model.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::SolutionSet;
use crate::query::{BgpQuery, PatternTerm, TriplePattern, Variable};
use crate::rdf::{Term, TermId, Triple};

type Key = [Option<TermId>; 3];

struct Index {
    /// One map per mask of bound positions (bit 0 = s, 1 = p, 2 = o).
    by_mask: Vec<HashMap<Key, Vec<Triple>>>,
}

fn mask_key(t: &Triple, mask: usize) -> Key {
    let parts = [t.s, t.p, t.o];
    std::array::from_fn(|i| (mask & (1 << i) != 0).then_some(parts[i]))
}

impl Index {
    fn new(triples: &[Triple]) -> Self {
        let distinct: HashSet<Triple> = triples.iter().copied().collect();
        let mut by_mask: Vec<HashMap<Key, Vec<Triple>>> = vec![HashMap::new(); 8];
        for t in distinct {
            for (mask, map) in by_mask.iter_mut().enumerate() {
                map.entry(mask_key(&t, mask)).or_default().push(t);
            }
        }
        Index { by_mask }
    }

    fn lookup(&self, key: Key) -> &[Triple] {
        let mask = key.iter().enumerate().filter(|(_, k)| k.is_some()).fold(0, |m, (i, _)| m | (1 << i));
        self.by_mask[mask].get(&key).map_or(&[], Vec::as_slice)
    }
}

type Binding = BTreeMap<Variable, TermId>;

fn resolve(term: &PatternTerm, b: &Binding) -> Option<TermId> {
    match term {
        PatternTerm::Const(c) => Some(*c),
        PatternTerm::Var(v) => b.get(v).copied(),
    }
}

fn bound_count(p: &TriplePattern, b: &Binding) -> usize {
    p.positions().iter().filter(|t| resolve(t, b).is_some()).count()
}

fn search(index: &Index, todo: &mut Vec<&TriplePattern>, b: &mut Binding, out: &mut Vec<Binding>) {
    if todo.is_empty() {
        out.push(b.clone());
        return;
    }
    let pick = (0..todo.len()).max_by_key(|&i| (bound_count(todo[i], b), std::cmp::Reverse(i))).expect("nonempty");
    let p = todo.swap_remove(pick);
    let key = [resolve(&p.s, b), resolve(&p.p, b), resolve(&p.o, b)];
    for t in index.lookup(key) {
        let mut added = Vec::new();
        let mut ok = true;
        for (term, value) in [(&p.s, t.s), (&p.p, t.p), (&p.o, t.o)] {
            if let PatternTerm::Var(v) = term {
                match b.get(v) {
                    Some(&old) if old != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        b.insert(v.clone(), value);
                        added.push(v.clone());
                    }
                }
            }
        }
        if ok {
            search(index, todo, b, out);
        }
        for v in added {
            b.remove(&v);
        }
    }
    todo.push(p);
    let last = todo.len() - 1;
    todo.swap(pick, last);
}

/// All mappings under which every pattern of `query` is a triple of
/// `triples`, projected onto the query's projection.
pub fn oracle_evaluate(triples: &[Triple], query: &BgpQuery, resolve_term: impl Fn(TermId) -> Term) -> SolutionSet {
    let index = Index::new(triples);
    let mut todo: Vec<&TriplePattern> = query.patterns.iter().collect();
    let mut found = Vec::new();
    search(&index, &mut todo, &mut Binding::new(), &mut found);
    let rows = found
        .into_iter()
        .map(|b| query.projection.iter().map(|v| resolve_term(b[v])).collect::<Vec<_>>());
    SolutionSet::new(query.projection.clone(), rows)
}
