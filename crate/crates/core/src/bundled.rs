//! Query texts and data shipped with the crate.

/// The seven LUBM benchmark queries, keyed `q1`..`q7`.
pub const LUBM_QUERIES: [(&str, &str); 7] = [
    ("q1", include_str!("../queries/lubm/q1.rq")),
    ("q2", include_str!("../queries/lubm/q2.rq")),
    ("q3", include_str!("../queries/lubm/q3.rq")),
    ("q4", include_str!("../queries/lubm/q4.rq")),
    ("q5", include_str!("../queries/lubm/q5.rq")),
    ("q6", include_str!("../queries/lubm/q6.rq")),
    ("q7", include_str!("../queries/lubm/q7.rq")),
];

pub const LUBM_NS: &str = "http://swat.cse.lehigh.edu/onto/univ-bench.owl#";

/// Eight-statement artist/museum graph.
pub const ARTISTS_NT: &str = include_str!("../fixtures/artists.nt");

/// Artists who created something exhibited in a museum located in "paris".
pub const ARTISTS_RQ: &str = include_str!("../fixtures/artists.rq");
