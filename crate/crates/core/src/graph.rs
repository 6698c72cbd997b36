//! Simple undirected graphs with optional bipartition labels.
//!
//! Vertices are dense indices `0..n`. Neighbor lists are kept sorted so that
//! every traversal in the crate is deterministic.

use std::collections::VecDeque;
use std::fmt;

use num::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::X => f.write_str("X"),
            Side::Y => f.write_str("Y"),
        }
    }
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    side: Option<Vec<Side>>,
    m: usize,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges, out-of-range
    /// endpoints and edges that violate the side labels.
    pub fn new(n: usize, edges: &[(usize, usize)], side: Option<Vec<Side>>) -> Result<Self> {
        if let Some(s) = &side {
            if s.len() != n {
                return Err(Error::SideLength {
                    got: s.len(),
                    expected: n,
                });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            if let Some(s) = &side {
                if s[u] == s[v] {
                    return Err(Error::SideViolation(u, v));
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph {
            adj,
            side,
            m: edges.len(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            side: None,
            m: 0,
        }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges, None).expect("path edges are simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges, None).expect("cycle edges are simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &edges, None).expect("clique edges are simple")
    }

    /// `K_{a,b}`: vertices `0..a` form side X, `a..a+b` side Y.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<_> = (0..a)
            .flat_map(|u| (a..a + b).map(move |v| (u, v)))
            .collect();
        let side = (0..a + b)
            .map(|i| if i < a { Side::X } else { Side::Y })
            .collect();
        Graph::new(a + b, &edges, Some(side)).expect("complete bipartite edges are simple")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &edges, None).expect("star edges are simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn sides(&self) -> Option<&[Side]> {
        self.side.as_deref()
    }

    pub fn side(&self, v: usize) -> Option<Side> {
        self.side.as_ref().map(|s| s[v])
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sum(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    /// Side labels survive only if both operands carry them.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + shift, v + shift)));
        let side = match (&self.side, &other.side) {
            (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
            _ => None,
        };
        Graph::new(shift + other.n(), &edges, side).expect("union of simple graphs is simple")
    }

    /// Component label per vertex, labels assigned in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// BFS distances from `src`; unreachable vertices get `None`.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True iff every X vertex has degree `d` and every Y vertex degree `d + 2`.
    pub fn validate_biregular(&self, d: usize) -> Result<bool> {
        let side = self.side.as_ref().ok_or(Error::MissingSides)?;
        Ok(side.iter().enumerate().all(|(v, s)| match s {
            Side::X => self.degree(v) == d,
            Side::Y => self.degree(v) == d + 2,
        }))
    }

    /// Marks every vertex lying on a cycle of length at most `cutoff`.
    ///
    /// From each root a BFS truncated at depth `ceil(cutoff / 2)` labels
    /// vertices with the root-neighbor they descend from. A non-tree edge
    /// `(a, b)` between different branches closes a cycle through the root
    /// of length `dist(a) + dist(b) + 1`, and the shortest cycle through the
    /// root always produces such an edge with all its vertices inside the
    /// truncated ball.
    pub fn short_cycle_census(&self, cutoff: usize) -> Result<CycleCensus> {
        if cutoff < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle cutoff must be at least 3, got {cutoff}"
            )));
        }
        let on_short_cycle: Vec<bool> = (0..self.n())
            .into_par_iter()
            .map(|r| self.shortest_cycle_through_within(r, cutoff).is_some())
            .collect();
        let count = on_short_cycle.iter().filter(|&&b| b).count();
        Ok(CycleCensus {
            cutoff,
            on_short_cycle,
            count,
        })
    }

    fn shortest_cycle_through_within(&self, root: usize, cutoff: usize) -> Option<usize> {
        let depth = cutoff.div_ceil(2);
        let n = self.n();
        let mut dist = vec![usize::MAX; n];
        let mut branch = vec![usize::MAX; n];
        let mut order = vec![root];
        dist[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            if dist[u] == depth {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    branch[w] = if u == root { w } else { branch[u] };
                    order.push(w);
                }
            }
        }
        let mut best: Option<usize> = None;
        for &a in &order[1..] {
            for &b in &self.adj[a] {
                if b == root || dist[b] == usize::MAX || b < a || branch[a] == branch[b] {
                    continue;
                }
                let len = dist[a] + dist[b] + 1;
                if len <= cutoff && best.is_none_or(|x| len < x) {
                    best = Some(len);
                }
            }
        }
        best
    }
}

/// Which vertices lie on a cycle of length at most `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub cutoff: usize,
    pub on_short_cycle: Vec<bool>,
    pub count: usize,
}

/// Vertex count of a balanced `(d, d+2)`-biregular tree with `levels` levels
/// grown from a degree-`d` root: level sizes are `1, d, d(d+1), d(d+1)(d-1), ...`.
pub fn balanced_tree_size(d: u32, levels: u32) -> BigUint {
    assert!(d >= 3, "balanced tree size is defined for d >= 3");
    let mut total = BigUint::from(1u32);
    for j in 0..levels {
        let term = BigUint::from(d)
            * BigUint::from(d - 1).pow(j / 2)
            * BigUint::from(d + 1).pow(j.div_ceil(2));
        total += term;
    }
    total
}

/// `floor(log_{d^2-1} ln(n_total))`, the integer short-cycle cutoff. Returns 0
/// when the real value is not positive.
pub fn short_cycle_cutoff(d: usize, n_total: usize) -> usize {
    let inner = (n_total as f64).ln();
    if inner <= 1.0 {
        return 0;
    }
    let l = inner.ln() / ((d * d - 1) as f64).ln();
    if l <= 0.0 {
        0
    } else {
        l.floor() as usize
    }
}
