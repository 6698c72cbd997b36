//! Density threshold `tau_k = k + 2 - 1/(k+2)` and the discharging argument
//! behind it.
//!
//! Vertices where a fire is easy to contain fall into three classes:
//!
//! * `V1`: degree at most `k`.
//! * `V2`: degree `k+1` with some neighbour of degree at most `k+1`.
//! * `V3`: degree `k+1`, not in `V2`, with a neighbour `w` of degree `k+2`
//!   that has at least two neighbours of degree `k+1`.
//!
//! Every other vertex starts with weight equal to its degree; each vertex of
//! degree at least `k+2` then sends `1/(k+2)` to each of its degree-`(k+1)`
//! neighbours outside the three classes. Afterwards every vertex outside the
//! classes carries at least `tau_k`, which turns a density bound into a lower
//! bound on the number of easy vertices. All arithmetic here is exact.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, fmt_q, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexClass {
    V1,
    V2,
    V3,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexClass::V1 => "V1",
            VertexClass::V2 => "V2",
            VertexClass::V3 => "V3",
        };
        f.write_str(s)
    }
}

pub fn tau(k: usize) -> Q {
    let t = k as i64 + 2;
    q(t, 1) - q(1, t)
}

/// `2 eps / (5 tau_k)`.
pub fn rho_lower_bound(k: usize, eps: Q) -> Result<Q> {
    if eps <= q(0, 1) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {}",
            fmt_q(&eps)
        )));
    }
    Ok(q(2, 5) * eps / tau(k))
}

pub fn classify_vertex(g: &Graph, v: usize, k: usize) -> Option<VertexClass> {
    let deg = g.degree(v);
    if deg <= k {
        return Some(VertexClass::V1);
    }
    if deg != k + 1 {
        return None;
    }
    let nbrs = g.neighbors(v);
    if nbrs.iter().any(|&u| g.degree(u) <= k + 1) {
        return Some(VertexClass::V2);
    }
    let hub = |w: usize| {
        g.degree(w) == k + 2
            && g.neighbors(w)
                .iter()
                .filter(|&&x| g.degree(x) == k + 1)
                .count()
                >= 2
    };
    nbrs.iter().any(|&w| hub(w)).then_some(VertexClass::V3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classes {
    pub k: usize,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.v1.len() + self.v2.len() + self.v3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn class_of(&self, v: usize) -> Option<VertexClass> {
        if self.v1.binary_search(&v).is_ok() {
            Some(VertexClass::V1)
        } else if self.v2.binary_search(&v).is_ok() {
            Some(VertexClass::V2)
        } else if self.v3.binary_search(&v).is_ok() {
            Some(VertexClass::V3)
        } else {
            None
        }
    }
}

pub fn classify(g: &Graph, k: usize) -> Classes {
    let mut c = Classes {
        k,
        v1: Vec::new(),
        v2: Vec::new(),
        v3: Vec::new(),
    };
    for v in 0..g.n() {
        match classify_vertex(g, v, k) {
            Some(VertexClass::V1) => c.v1.push(v),
            Some(VertexClass::V2) => c.v2.push(v),
            Some(VertexClass::V3) => c.v3.push(v),
            None => {}
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub k: usize,
    #[serde(serialize_with = "rational::ser_q")]
    pub tau: Q,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    /// Initial weight, the degree, for every vertex.
    #[serde(serialize_with = "rational::ser_vec_q")]
    pub omega: Vec<Q>,
    /// Weight after discharging. Vertices in a class keep their degree;
    /// no transfer ever involves them.
    #[serde(serialize_with = "rational::ser_vec_q")]
    pub omega_prime: Vec<Q>,
    /// Vertices outside the classes whose final weight is below `tau_k`.
    pub weight_violations: Vec<usize>,
    /// Sum of all transfers.
    #[serde(serialize_with = "rational::ser_q")]
    pub transferred: Q,
    pub bound_lhs: usize,
    #[serde(serialize_with = "rational::ser_opt_q")]
    pub bound_rhs: Option<Q>,
}

impl ClassificationReport {
    pub fn classes(&self) -> Classes {
        Classes {
            k: self.k,
            v1: self.v1.clone(),
            v2: self.v2.clone(),
            v3: self.v3.clone(),
        }
    }

    pub fn in_class(&self, v: usize) -> bool {
        self.classes().class_of(v).is_some()
    }

    /// `(sum of omega, sum of omega_prime)` over vertices outside the classes.
    pub fn outside_totals(&self) -> (Q, Q) {
        let classes = self.classes();
        (0..self.omega.len())
            .filter(|&v| classes.class_of(v).is_none())
            .fold((q(0, 1), q(0, 1)), |(a, b), v| {
                (a + self.omega[v], b + self.omega_prime[v])
            })
    }
}

pub fn discharge(g: &Graph, k: usize) -> ClassificationReport {
    let classes = classify(g, k);
    let t = tau(k);
    let share = q(1, k as i64 + 2);
    let outside: Vec<bool> = (0..g.n()).map(|v| classes.class_of(v).is_none()).collect();
    let omega: Vec<Q> = (0..g.n()).map(|v| q(g.degree(v) as i64, 1)).collect();
    let mut omega_prime = omega.clone();
    let mut transferred = q(0, 1);
    for giver in (0..g.n()).filter(|&v| g.degree(v) >= k + 2) {
        for &r in g.neighbors(giver) {
            if g.degree(r) == k + 1 && outside[r] {
                omega_prime[giver] -= share;
                omega_prime[r] += share;
                transferred += share;
            }
        }
    }
    let weight_violations = (0..g.n())
        .filter(|&v| outside[v] && omega_prime[v] < t)
        .collect();
    ClassificationReport {
        k,
        tau: t,
        bound_lhs: classes.len(),
        v1: classes.v1,
        v2: classes.v2,
        v3: classes.v3,
        omega,
        omega_prime,
        weight_violations,
        transferred,
        bound_rhs: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "rational::ser_q")]
    pub density: Q,
    #[serde(serialize_with = "rational::ser_q")]
    pub eps: Q,
    #[serde(serialize_with = "rational::ser_q")]
    pub lhs: Q,
    #[serde(serialize_with = "rational::ser_q")]
    pub rhs: Q,
    pub holds: bool,
}

pub fn density(g: &Graph) -> Q {
    q(2 * g.m() as i64, g.n() as i64)
}

/// Checks `|V1| + |V2| + |V3| >= eps n / tau_k` under `2m/n <= tau_k - eps`.
pub fn verify_bound(g: &Graph, k: usize, eps: Q) -> Result<BoundVerdict> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    if eps <= q(0, 1) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {}",
            fmt_q(&eps)
        )));
    }
    let dens = density(g);
    let limit = tau(k) - eps;
    if dens > limit {
        return Err(Error::DensityPrecondition {
            density: fmt_q(&dens),
            limit: fmt_q(&limit),
        });
    }
    let lhs = q(classify(g, k).len() as i64, 1);
    let rhs = eps * q(g.n() as i64, 1) / tau(k);
    Ok(BoundVerdict {
        k,
        n: g.n(),
        m: g.m(),
        density: dens,
        eps,
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// Discharge plus the density verdict in one report.
pub fn report_with_bound(g: &Graph, k: usize, eps: Q) -> Result<ClassificationReport> {
    let verdict = verify_bound(g, k, eps)?;
    let mut rep = discharge(g, k);
    rep.bound_rhs = Some(verdict.rhs);
    Ok(rep)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// k = 2: v = 0 (degree 3) next to hub w = 1 (degree 4) whose other
    /// degree-3 neighbour is u = 4. Every other neighbour of 0 has degree 4.
    pub(crate) fn v3_gadget() -> Graph {
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 4),
            (1, 5),
            (1, 6),
            (4, 7),
            (4, 8),
            (2, 9),
            (2, 10),
            (2, 11),
            (3, 12),
            (3, 13),
            (3, 14),
        ];
        Graph::new(15, &edges, None).unwrap()
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(1), q(8, 3));
        assert_eq!(tau(2), q(15, 4));
        assert_eq!(tau(3), q(24, 5));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(rho_lower_bound(2, q(1, 1)).unwrap(), q(8, 75));
        assert_eq!(rho_lower_bound(1, q(1, 2)).unwrap(), q(3, 40));
        assert!(rho_lower_bound(1, q(1, 1_000_000)).unwrap() < q(1, 100_000));
        assert!(rho_lower_bound(1, q(0, 1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&Graph::path(4), 1);
        assert_eq!((c.v1, c.v2, c.v3), (vec![0, 3], vec![1, 2], vec![]));

        let c = classify(&Graph::star(3), 2);
        assert_eq!((c.v1, c.v2), (vec![1, 2, 3], vec![0]));

        // K_4 is 3-regular: with k = 2 every vertex is in V2.
        let c = classify(&Graph::complete(4), 2);
        assert!(c.v1.is_empty());
        assert_eq!(c.v2, vec![0, 1, 2, 3]);

        let c = classify(&v3_gadget(), 2);
        assert!(c.v3.contains(&0));
    }

    #[test]
    fn discharge_weights() {
        let g = v3_gadget();
        let rep = discharge(&g, 2);
        // Vertex 1 (degree 4) sends nothing: its degree-3 neighbours 0 and 4 are
        // classified. Degree-4 vertices 2, 3 keep 4 >= 15/4.
        assert!(rep.weight_violations.is_empty());
        let (a, b) = rep.outside_totals();
        assert_eq!(a, b);

        // K_{3,4} with k = 2: the four degree-3 vertices all see degree-4
        // hubs with four degree-3 neighbours each.
        let g = Graph::complete_bipartite(3, 4);
        let rep = discharge(&g, 2);
        assert_eq!(rep.v3, vec![3, 4, 5, 6]);
        assert!(rep.weight_violations.is_empty());
    }

    #[test]
    fn degree_k_plus_one_outside_gets_exactly_tau() {
        // k = 2: vertex 0 has degree 3 and three neighbours of degree 5.
        // Each neighbour has no other degree-3 neighbour, so 0 stays outside.
        let mut edges = vec![(0, 1), (0, 2), (0, 3)];
        let mut next = 4;
        for hub in 1..=3 {
            for _ in 0..4 {
                edges.push((hub, next));
                next += 1;
            }
        }
        let g = Graph::new(next, &edges, None).unwrap();
        let rep = discharge(&g, 2);
        assert!(!rep.in_class(0));
        assert_eq!(rep.omega_prime[0], tau(2));
        for hub in 1..=3 {
            assert_eq!(rep.omega_prime[hub], q(5, 1) - q(1, 4));
            assert!(rep.omega_prime[hub] >= q(5 * 3, 4));
        }
    }

    #[test]
    fn bound_examples() {
        let v = verify_bound(&Graph::star(3), 2, q(9, 4)).unwrap();
        assert_eq!(v.lhs, q(4, 1));
        assert_eq!(v.rhs, q(12, 5));
        assert!(v.holds);
        assert!(matches!(
            verify_bound(&Graph::complete(4), 1, q(1, 100)),
            Err(Error::DensityPrecondition { .. })
        ));
        assert!(verify_bound(&Graph::star(3), 2, q(0, 1)).is_err());
    }

    #[test]
    fn report_serializes_rationals() {
        let rep = report_with_bound(&Graph::star(3), 2, q(9, 4)).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["tau"], "15/4");
        assert_eq!(json["bound_rhs"], "12/5");
        assert_eq!(json["omega"][0], "3/1");
    }
}
