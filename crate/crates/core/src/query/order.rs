use super::{is_connected, QueryError, TriplePattern, Variable};

/// Sort key: more constants first, then fewer distinct variables.
fn rank(p: &TriplePattern) -> (std::cmp::Reverse<usize>, usize) {
    (std::cmp::Reverse(p.constant_count()), p.variables().len())
}

/// Evaluation order that keeps the patterns connected: every pattern after
/// the first shares a variable with the ones placed before it. Among the
/// eligible patterns the one with the most constants wins, then the one with
/// the fewest variables, then the earliest in the text. Ground patterns
/// come first.
pub fn order_bgp(patterns: &[TriplePattern]) -> Result<Vec<TriplePattern>, QueryError> {
    if !is_connected(patterns) {
        return Err(QueryError::Disconnected);
    }
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut bound: Vec<&Variable> = Vec::new();
    let mut out = Vec::with_capacity(patterns.len());

    while !remaining.is_empty() {
        let eligible = remaining
            .iter()
            .enumerate()
            .filter(|(_, &i)| {
                let p = &patterns[i];
                bound.is_empty() || p.is_ground() || p.variables().iter().any(|v| bound.contains(v))
            })
            .min_by_key(|(_, &i)| (rank(&patterns[i]), i));
        let Some((slot, &chosen)) = eligible else {
            return Err(QueryError::Disconnected);
        };
        remaining.remove(slot);
        let p = &patterns[chosen];
        for v in p.variables() {
            if !bound.contains(&v) {
                bound.push(v);
            }
        }
        out.push(p.clone());
    }
    Ok(out)
}

/// For every pattern after the first non-ground one, some variable already
/// occurred in an earlier pattern.
pub fn is_connectivity_preserving(order: &[TriplePattern]) -> bool {
    let mut seen: Vec<&Variable> = Vec::new();
    for p in order {
        let vars = p.variables();
        if !seen.is_empty() && !vars.is_empty() && !vars.iter().any(|v| seen.contains(v)) {
            return false;
        }
        seen.extend(vars);
    }
    true
}
