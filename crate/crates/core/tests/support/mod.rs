//! Shared generators for the integration tests.
#![allow(dead_code)]

use std::fmt::Write as _;

use bgpmatch::bundled::LUBM_NS;
use rand::seq::SliceRandom;
use rand::Rng;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

pub fn vertex(i: usize) -> String {
    format!("<http://t/v{i}>")
}

pub fn predicate(i: usize) -> String {
    format!("<http://t/p{i}>")
}

/// A random graph as N-Triples text: up to `max_vertices` vertices (a few
/// of them literals), up to `max_edges` edges over `predicates` labels.
pub struct RandomGraph {
    pub triples: Vec<(usize, usize, usize)>,
    pub vertices: usize,
    pub predicates: usize,
}

impl RandomGraph {
    pub fn generate(rng: &mut impl Rng, max_vertices: usize, max_edges: usize, max_predicates: usize) -> Self {
        let vertices = rng.gen_range(2..=max_vertices);
        let predicates = rng.gen_range(1..=max_predicates);
        let edges = rng.gen_range(1..=max_edges);
        let triples = (0..edges)
            .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..predicates), rng.gen_range(0..vertices)))
            .collect();
        RandomGraph { triples, vertices, predicates }
    }

    /// Vertices at index >= `vertices - vertices / 8` are literals and
    /// never subjects.
    fn is_literal(&self, v: usize) -> bool {
        self.vertices >= 8 && v >= self.vertices - self.vertices / 8
    }

    pub fn term(&self, v: usize) -> String {
        if self.is_literal(v) {
            format!("\"lit{v}\"")
        } else {
            vertex(v)
        }
    }

    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for &(s, p, o) in &self.triples {
            if self.is_literal(s) {
                continue;
            }
            writeln!(out, "{} {} {} .", self.term(s), predicate(p), self.term(o)).unwrap();
        }
        out
    }
}

#[derive(Clone)]
enum QTerm {
    Var(String),
    Term(String),
}

impl QTerm {
    fn text(&self) -> String {
        match self {
            QTerm::Var(v) => format!("?{v}"),
            QTerm::Term(t) => t.clone(),
        }
    }
}

/// A connected query of 2..=4 patterns, mostly grown along real edges so
/// that many queries have answers.
pub fn random_query(rng: &mut impl Rng, g: &RandomGraph) -> String {
    let n = rng.gen_range(2..=4);
    let mut var_of: Vec<Option<String>> = vec![None; g.vertices];
    let mut var_names: Vec<String> = Vec::new();
    let mut patterns: Vec<[QTerm; 3]> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    let mut pred_var: Option<String> = None;

    let fresh = |names: &mut Vec<String>| {
        let v = format!("v{}", names.len());
        names.push(v.clone());
        v
    };

    while patterns.len() < n {
        // an edge next to the part of the graph already in the query
        let edge = if touched.is_empty() || rng.gen_bool(0.1) {
            *g.triples.choose(rng).unwrap()
        } else {
            let around: Vec<&(usize, usize, usize)> =
                g.triples.iter().filter(|(s, _, o)| touched.contains(s) || touched.contains(o)).collect();
            match around.choose(rng) {
                Some(e) => **e,
                None => *g.triples.choose(rng).unwrap(),
            }
        };
        let (s, p, o) = edge;
        let s = if rng.gen_bool(0.05) { rng.gen_range(0..g.vertices) } else { s };
        let o = if rng.gen_bool(0.05) { rng.gen_range(0..g.vertices) } else { o };

        let mut term_for = |v: usize, rng: &mut dyn rand::RngCore, names: &mut Vec<String>| -> QTerm {
            if rng.gen_bool(0.2) && var_of[v].is_none() {
                return QTerm::Term(g.term(v));
            }
            if var_of[v].is_none() {
                // occasionally reuse an existing variable for a new vertex
                let name = if !names.is_empty() && rng.gen_bool(0.1) {
                    names.choose(rng).unwrap().clone()
                } else {
                    fresh(names)
                };
                var_of[v] = Some(name);
            }
            QTerm::Var(var_of[v].clone().unwrap())
        };
        let st = term_for(s, rng, &mut var_names);
        let ot = term_for(o, rng, &mut var_names);
        let pt = if rng.gen_bool(0.15) {
            let name = match &pred_var {
                Some(v) if rng.gen_bool(0.5) => v.clone(),
                _ => {
                    let v = fresh(&mut var_names);
                    pred_var = Some(v.clone());
                    v
                }
            };
            QTerm::Var(name)
        } else {
            QTerm::Term(predicate(if rng.gen_bool(0.05) { g.predicates } else { p }))
        };
        touched.push(s);
        touched.push(o);
        patterns.push([st, pt, ot]);
    }

    // repair connectivity by turning constants into the matching variable
    loop {
        let vars = |p: &[QTerm; 3]| -> Vec<String> {
            p.iter().filter_map(|t| if let QTerm::Var(v) = t { Some(v.clone()) } else { None }).collect()
        };
        let mut reached: Vec<String> = Vec::new();
        let mut placed = vec![false; patterns.len()];
        let first = patterns.iter().position(|p| !vars(p).is_empty());
        let Some(first) = first else {
            patterns[0][0] = QTerm::Var(fresh(&mut var_names));
            continue;
        };
        placed[first] = true;
        reached.extend(vars(&patterns[first]));
        let mut grew = true;
        while grew {
            grew = false;
            for (i, p) in patterns.iter().enumerate() {
                if !placed[i] && vars(p).iter().any(|v| reached.contains(v)) {
                    placed[i] = true;
                    reached.extend(vars(p));
                    grew = true;
                }
            }
        }
        let Some(stray) = placed.iter().position(|&x| !x) else { break };
        let anchor = reached.choose(rng).unwrap().clone();
        let slot = if rng.gen_bool(0.5) { 0 } else { 2 };
        patterns[stray][slot] = QTerm::Var(anchor);
    }

    let mut all_vars: Vec<String> = Vec::new();
    for p in &patterns {
        for t in p {
            if let QTerm::Var(v) = t {
                if !all_vars.contains(v) {
                    all_vars.push(v.clone());
                }
            }
        }
    }
    let projection = if rng.gen_bool(0.3) {
        "*".to_owned()
    } else {
        let k = rng.gen_range(1..=all_vars.len());
        let chosen: Vec<String> = all_vars.choose_multiple(rng, k).map(|v| format!("?{v}")).collect();
        chosen.join(" ")
    };
    let body: Vec<String> =
        patterns.iter().map(|p| format!("{} {} {} .", p[0].text(), p[1].text(), p[2].text())).collect();
    format!("SELECT {projection} WHERE {{ {} }}", body.join(" "))
}

/// A small university dataset with the LUBM vocabulary and IRI scheme, big
/// enough that every bundled LUBM query has answers.
pub fn synthetic_lubm(rng: &mut impl Rng, universities: usize, departments: usize) -> String {
    let mut out = String::new();
    let ub = |local: &str| format!("<{LUBM_NS}{local}>");
    let ty = format!("<{RDF_TYPE}>");
    let mut emit = |s: &str, p: &str, o: &str| writeln!(out, "{s} {p} {o} .").unwrap();

    let univ = |u: usize| format!("<http://www.University{u}.edu>");
    for u in 0..universities {
        emit(&univ(u), &ty, &ub("University"));
        emit(&univ(u), &ub("name"), &format!("\"University{u}\""));
    }
    for u in 0..universities {
        for d in 0..departments {
            let dept = format!("<http://www.Department{d}.University{u}.edu>");
            let base = format!("http://www.Department{d}.University{u}.edu");
            emit(&dept, &ty, &ub("Department"));
            emit(&dept, &ub("subOrganizationOf"), &univ(u));
            for g in 0..2 {
                let group = format!("<{base}/ResearchGroup{g}>");
                emit(&group, &ty, &ub("ResearchGroup"));
                emit(&group, &ub("subOrganizationOf"), &dept);
            }
            let courses: Vec<String> = (0..6).map(|c| format!("<{base}/Course{c}>")).collect();
            for (c, course) in courses.iter().enumerate() {
                emit(course, &ty, &ub("Course"));
                emit(course, &ub("name"), &format!("\"Course{c}\""));
            }
            let mut profs = Vec::new();
            for f in 0..3 {
                let prof = format!("<{base}/FullProfessor{f}>");
                emit(&prof, &ty, &ub("FullProfessor"));
                emit(&prof, &ub("worksFor"), &dept);
                emit(&prof, &ub("name"), &format!("\"FullProfessor{f}\""));
                emit(&prof, &ub("emailAddress"), &format!("\"FullProfessor{f}@Department{d}.University{u}.edu\""));
                emit(&prof, &ub("telephone"), &format!("\"xxx-{u}{d}{f}\""));
                emit(&prof, &ub("undergraduateDegreeFrom"), &univ(rng.gen_range(0..universities)));
                for course in courses.choose_multiple(rng, 2) {
                    emit(&prof, &ub("teacherOf"), course);
                }
                profs.push(prof);
            }
            for a in 0..2 {
                let prof = format!("<{base}/AssociateProfessor{a}>");
                emit(&prof, &ty, &ub("AssociateProfessor"));
                emit(&prof, &ub("worksFor"), &dept);
                emit(&prof, &ub("teacherOf"), courses.choose(rng).unwrap());
                profs.push(prof);
            }
            for s in 0..6 {
                let st = format!("<{base}/GraduateStudent{s}>");
                emit(&st, &ty, &ub("GraduateStudent"));
                emit(&st, &ub("memberOf"), &dept);
                emit(&st, &ub("undergraduateDegreeFrom"), &univ(rng.gen_range(0..universities)));
                emit(&st, &ub("advisor"), profs.choose(rng).unwrap());
                emit(&st, &ub("takesCourse"), courses.choose(rng).unwrap());
            }
            for s in 0..12 {
                let st = format!("<{base}/UndergraduateStudent{s}>");
                emit(&st, &ty, &ub("UndergraduateStudent"));
                emit(&st, &ub("memberOf"), &dept);
                emit(&st, &ub("name"), &format!("\"UndergraduateStudent{s}\""));
                if rng.gen_bool(0.3) {
                    emit(&st, &ub("undergraduateDegreeFrom"), &univ(rng.gen_range(0..universities)));
                }
                if rng.gen_bool(0.5) {
                    emit(&st, &ub("advisor"), profs.choose(rng).unwrap());
                }
                for course in courses.choose_multiple(rng, 2) {
                    emit(&st, &ub("takesCourse"), course);
                }
            }
        }
    }
    out
}

/// x -p-> y1, x -p-> y2, y2 -p-> z: y1 is a binding of ?y with no way to
/// continue along `?y p ?z`.
pub const DEAD_END_NT: &str = "\
<http://t/x> <http://t/p> <http://t/y1> .
<http://t/x> <http://t/p> <http://t/y2> .
<http://t/y2> <http://t/p> <http://t/z> .
";

pub const DEAD_END_RQ: &str = "SELECT ?x ?y ?z WHERE { ?x <http://t/p> ?y . ?y <http://t/p> ?z . }";

/// Patterns drawn from a pool of three variables, a predicate variable,
/// a blank node and constants: self-loops, cycles, ground patterns and
/// repeated predicates are common. Retries until the query is connected.
pub fn dense_query(rng: &mut impl Rng, g: &RandomGraph) -> String {
    loop {
        let n = rng.gen_range(2..=4);
        let node = |rng: &mut dyn rand::RngCore| -> String {
            match rng.gen_range(0..10) {
                0..=6 => ["?a", "?b", "?c"].choose(rng).unwrap().to_string(),
                7 => "_:n".to_owned(),
                _ => {
                    let &(s, _, o) = g.triples.choose(rng).unwrap();
                    g.term(if rng.gen_bool(0.5) { s } else { o })
                }
            }
        };
        let mut patterns = Vec::new();
        for _ in 0..n {
            let s = node(rng);
            let o = node(rng);
            let p = if rng.gen_bool(0.2) { "?p".to_owned() } else { predicate(rng.gen_range(0..g.predicates)) };
            patterns.push(format!("{s} {p} {o} ."));
        }
        let text = format!("SELECT * WHERE {{ {} }}", patterns.join(" "));
        let mut dict = bgpmatch::Dictionary::new();
        match bgpmatch::query::parse_query(&text, &mut dict) {
            Ok(q) if !q.projection.is_empty() => return text,
            _ => continue,
        }
    }
}
