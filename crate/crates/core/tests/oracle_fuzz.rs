//! Matcher against the reference evaluator on random graphs and queries.

mod support;

use bgpmatch::Store;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{dense_query, random_query, RandomGraph};

fn check(seed: u64) -> Result<usize, String> {
    check_with(seed, random_query)
}

fn check_with(seed: u64, gen: fn(&mut ChaCha8Rng, &RandomGraph) -> String) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = RandomGraph::generate(&mut rng, 50, 200, 5);
    let data = g.to_ntriples();
    let query = gen(&mut rng, &g);
    let store = Store::from_ntriples(&data).map_err(|e| e.to_string())?;
    let prepared = store.prepare(&query).map_err(|e| format!("{query}: {e}"))?;
    let engine = store.execute(&prepared).solutions;
    let oracle = store.oracle(&prepared.query);
    if engine != oracle {
        return Err(format!("seed {seed}\n{query}\nengine {} rows, oracle {} rows", engine.len(), oracle.len()));
    }
    Ok(engine.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn engine_equals_oracle(seed in any::<u64>()) {
        check(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn engine_equals_oracle_on_dense_queries(seed in any::<u64>()) {
        check_with(seed, dense_query).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn fixed_seeds_cover_nonempty_answers() {
    let mut nonempty = 0;
    for seed in 0..300 {
        if check(seed).unwrap() > 0 {
            nonempty += 1;
        }
    }
    assert!(nonempty > 100, "only {nonempty} of 300 queries had answers");
}
