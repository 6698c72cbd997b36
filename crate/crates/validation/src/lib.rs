//! Seeded random graph corpora for end-to-end checks of `firefighter-core`.

use firefighter_core::discharging::tau;
use firefighter_core::graph::Graph;
use firefighter_core::rational::{q, Q};
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
    Graph::new(n, &edges, None).expect("distinct pairs form a simple graph")
}

/// Uniform graph with exactly `min(m, n(n-1)/2)` edges.
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
    Graph::new(n, &pairs, None).expect("distinct pairs form a simple graph")
}

/// A graph on `2..=max_n` vertices with `2m/n <= tau_k - eps`, together with
/// `eps`. `eps` is a multiple of 1/16 below `tau_k`; half the time the edge
/// count sits right at the density limit.
pub fn sparse_instance<R: Rng>(rng: &mut R, k: usize, max_n: usize) -> (Graph, Q) {
    let t = tau(k);
    loop {
        let n = rng.random_range(2..=max_n);
        let eps = q(rng.random_range(1..=24), 16);
        if eps >= t {
            continue;
        }
        let limit = (t - eps) * q(n as i64, 2);
        let max_m = (limit.to_integer() as usize).min(n * (n - 1) / 2);
        let m = if rng.random_bool(0.5) {
            max_m
        } else {
            rng.random_range(0..=max_m)
        };
        return (gnm(n, m, rng), eps);
    }
}
