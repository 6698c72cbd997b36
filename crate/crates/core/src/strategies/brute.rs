//! Exhaustive `sn_k` for tiny graphs, used as a test oracle.
//!
//! Every round tries every legal protection set of size `0..=k` over all
//! unburned, unprotected vertices. Positions are cached by their full
//! `(burning, protected)` pair, which changes nothing about the result.
//! None of the exact solver's reductions are used here.

use std::collections::HashMap;

use itertools::Itertools;

use crate::engine::GameState;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const BRUTE_MAX_N: usize = 10;

pub fn brute_sn(g: &Graph, v: usize, k: usize) -> Result<usize> {
    if g.n() > BRUTE_MAX_N {
        return Err(Error::GraphTooLarge {
            n: g.n(),
            limit: BRUTE_MAX_N,
        });
    }
    let state = GameState::ignite(g, v, k)?;
    let mut cache = HashMap::new();
    Ok(best_saved(&state, &mut cache))
}

fn best_saved(
    state: &GameState<'_>,
    cache: &mut HashMap<(Vec<usize>, Vec<usize>), usize>,
) -> usize {
    if state.is_terminal() {
        return state.saved();
    }
    let key = (
        state.burning().ones().collect(),
        state.protected().ones().collect(),
    );
    if let Some(&v) = cache.get(&key) {
        return v;
    }
    let n = state.graph().n();
    let legal: Vec<usize> = (0..n)
        .filter(|&v| !state.is_burning(v) && !state.is_protected(v))
        .collect();
    let mut best = 0;
    for size in 0..=state.k().min(legal.len()) {
        for set in legal.iter().copied().combinations(size) {
            let mut next = state.clone();
            next.protect(&set).expect("enumerated sets are legal");
            next.spread();
            best = best.max(best_saved(&next, cache));
        }
    }
    cache.insert(key, best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(brute_sn(&Graph::path(2), 0, 1).unwrap(), 1);
        for v in 0..4 {
            assert_eq!(brute_sn(&Graph::empty(4), v, 1).unwrap(), 3);
        }
        assert_eq!(brute_sn(&Graph::cycle(4), 0, 1).unwrap(), 2);
        assert_eq!(brute_sn(&Graph::path(5), 2, 1).unwrap(), 3);
    }

    #[test]
    fn size_limit() {
        assert_eq!(
            brute_sn(&Graph::path(11), 0, 1),
            Err(Error::GraphTooLarge {
                n: 11,
                limit: BRUTE_MAX_N
            })
        );
    }
}
