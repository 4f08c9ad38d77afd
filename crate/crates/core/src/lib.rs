//! Answers SPARQL basic graph pattern queries over RDF data by iterative,
//! vertex-centric subgraph matching.
//!
//! ```
//! use bgpmatch::{bundled, Store};
//!
//! let store = Store::from_ntriples(bundled::ARTISTS_NT).unwrap();
//! let solutions = store.query(bundled::ARTISTS_RQ).unwrap();
//! assert_eq!(solutions.len(), 1);
//! ```

pub mod assembly;
pub mod bundled;
pub mod cli;
pub mod engine;
pub mod graph;
pub mod matcher;
pub mod query;
pub mod rdf;
pub mod results;
pub mod stats;

pub use assembly::SolutionSet;
pub use engine::{EngineError, Execution, PreparedQuery, Store};
pub use query::{BgpQuery, QueryError, TriplePattern, Variable};
pub use rdf::{Dictionary, Term, TermId, Triple};
pub use stats::RunStats;
