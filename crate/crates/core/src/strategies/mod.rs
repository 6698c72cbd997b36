//! Protection policies and solvers.

mod brute;
mod exact;

pub use brute::{brute_sn, BRUTE_MAX_N};
pub use exact::{
    exact_sn, solve, solve_from, ExactStrategy, SolveResult, SolverOptions, DEFAULT_NODE_BUDGET,
};

use crate::discharging::{classify_vertex, VertexClass};
use crate::engine::{GameState, Strategy};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Protects up to `k` vertices adjacent to the fire, preferring higher
/// degree and then lower index.
#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy;

impl Strategy for Greedy {
    fn choose(&self, state: &GameState<'_>) -> Vec<usize> {
        greedy_choice(state)
    }
}

pub fn greedy_choice(state: &GameState<'_>) -> Vec<usize> {
    let g = state.graph();
    let mut cand = state.frontier();
    cand.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    cand.truncate(state.k());
    cand
}

/// Protection schedule that confines a fire started at `v` to one, two or
/// three vertices according to the class of `v`.
///
/// * `V1` (degree at most `k`): protect every neighbour.
/// * `V2`: let the fire take one low-degree neighbour `u`, then seal `u`.
/// * `V3`: route the fire through a degree-`(k+2)` neighbour `w` into a
///   second degree-`(k+1)` neighbour `u` of `w`, sealing each frontier.
pub fn surround_strategy(
    g: &Graph,
    v: usize,
    k: usize,
    class: VertexClass,
) -> Result<Vec<Vec<usize>>> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    if k == 0 {
        return Err(Error::NoFirefighters);
    }
    if classify_vertex(g, v, k) != Some(class) {
        return Err(Error::NotInClass {
            vertex: v,
            class: class.to_string(),
        });
    }
    let deg = |x: usize| g.degree(x);
    let without = |x: usize, skip: &[usize], done: &[usize]| -> Vec<usize> {
        g.neighbors(x)
            .iter()
            .copied()
            .filter(|y| !skip.contains(y) && !done.contains(y))
            .collect()
    };
    let schedule = match class {
        VertexClass::V1 => vec![g.neighbors(v).to_vec()],
        VertexClass::V2 => {
            let u = *g
                .neighbors(v)
                .iter()
                .find(|&&u| deg(u) <= k + 1)
                .expect("V2 witness");
            let first = without(v, &[u], &[]);
            let second = without(u, &[v], &first);
            vec![first, second]
        }
        VertexClass::V3 => {
            let (w, u) = v3_route(g, v, k).expect("V3 witness");
            let first = without(v, &[w], &[]);
            let second = without(w, &[v, u], &first);
            let done: Vec<usize> = first.iter().chain(&second).copied().collect();
            let third = without(u, &[w], &done);
            vec![first, second, third]
        }
    };
    Ok(schedule)
}

/// `(w, u)`: the lowest-index neighbour `w` of degree `k+2` with another
/// degree-`(k+1)` neighbour `u != v`.
fn v3_route(g: &Graph, v: usize, k: usize) -> Option<(usize, usize)> {
    g.neighbors(v).iter().find_map(|&w| {
        if g.degree(w) != k + 2 {
            return None;
        }
        g.neighbors(w)
            .iter()
            .find(|&&u| u != v && g.degree(u) == k + 1)
            .map(|&u| (w, u))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, replay};

    #[test]
    fn greedy_examples() {
        let p5 = Graph::path(5);
        let s = GameState::ignite(&p5, 2, 1).unwrap();
        assert_eq!(greedy_choice(&s), vec![1]);

        let star = Graph::star(5);
        let s = GameState::ignite(&star, 0, 2).unwrap();
        assert_eq!(greedy_choice(&s).len(), 2);

        let k2 = Graph::path(2);
        let mut s = GameState::ignite(&k2, 0, 1).unwrap();
        s.protect(&[1]).unwrap();
        assert!(greedy_choice(&s).is_empty());
    }

    #[test]
    fn greedy_prefers_degree() {
        // 0 - 1, 0 - 2, 2 - 3: vertex 2 has the larger degree.
        let g = Graph::new(4, &[(0, 1), (0, 2), (2, 3)], None).unwrap();
        let s = GameState::ignite(&g, 0, 1).unwrap();
        assert_eq!(greedy_choice(&s), vec![2]);
        assert_eq!(play(&g, 0, 1, &Greedy).unwrap().saved, 2);
    }

    #[test]
    fn surround_v1_center_of_path() {
        let g = Graph::star(2);
        let sched = surround_strategy(&g, 0, 2, VertexClass::V1).unwrap();
        let out = replay(&g, 0, 2, &sched).unwrap();
        assert_eq!((out.burned, out.saved), (1, 2));
    }

    #[test]
    fn surround_v2_two_cubic_neighbours() {
        // v = 0 has degree 3, u = 1 has degree 3; everything else is a leaf
        // hanging off a degree-4 hub so that only the V2 rule applies to 0.
        let edges = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
        let g = Graph::new(6, &edges, None).unwrap();
        let sched = surround_strategy(&g, 0, 2, VertexClass::V2).unwrap();
        let out = replay(&g, 0, 2, &sched).unwrap();
        assert_eq!(out.burned, 2);
    }

    #[test]
    fn surround_v3_gadget() {
        let g = crate::discharging::tests::v3_gadget();
        assert_eq!(classify_vertex(&g, 0, 2), Some(VertexClass::V3));
        let sched = surround_strategy(&g, 0, 2, VertexClass::V3).unwrap();
        let out = replay(&g, 0, 2, &sched).unwrap();
        assert_eq!(out.burned, 3);
        assert_eq!(out.saved, g.n() - 3);
    }

    #[test]
    fn surround_rejects_wrong_class() {
        let g = Graph::complete(5);
        assert!(matches!(
            surround_strategy(&g, 0, 2, VertexClass::V1),
            Err(Error::NotInClass { .. })
        ));
    }
}
