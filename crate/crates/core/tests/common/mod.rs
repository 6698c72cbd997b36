#![allow(dead_code)]

use firefighter_core::graph::Graph;
use rand::Rng;

/// G(n, p) with edges drawn in lexicographic order.
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges, None).unwrap()
}

/// Graph on `n` vertices from an edge mask over the pairs `u < v` in
/// lexicographic order.
pub fn from_mask(n: usize, mask: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask.get(i).copied().unwrap_or(false) {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::new(n, &edges, None).unwrap()
}

/// Random graph with exactly `m` edges.
pub fn gnm<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = m.min(pairs.len());
    for i in 0..m {
        let j = rng.random_range(i..pairs.len());
        pairs.swap(i, j);
    }
    pairs.truncate(m);
    Graph::new(n, &pairs, None).unwrap()
}
