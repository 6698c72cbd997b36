//! Surviving rates, the fire-growth recurrence on biregular trees, and the
//! growth-phase timeline.

use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::discharging::tau;
use crate::engine::{play, Strategy};
use crate::error::{Error, Result};
use crate::graph::{Graph, Side};
use crate::rational::{self, q, Q};
use crate::strategies::{solve, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub n: usize,
    pub k: usize,
    pub mode: RateMode,
    pub rho: f64,
    /// `sum sn / n^2` as `"p/q"`; exact mode only.
    #[serde(serialize_with = "rational::ser_opt_q")]
    pub rho_exact: Option<Q>,
    /// Whether every per-vertex value is optimal.
    pub exact: bool,
    pub per_vertex: Option<Vec<usize>>,
    pub samples: usize,
    pub stderr: Option<f64>,
    pub strategy: String,
}

/// `rho_k(G)` from the exact solver at every ignition vertex.
///
/// If the budget runs out at some vertex the report carries `exact = false`
/// and its values are witnessed lower bounds.
pub fn rho_exact(g: &Graph, k: usize, opts: SolverOptions) -> Result<RateReport> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if k == 0 {
        return Err(Error::NoFirefighters);
    }
    let results = (0..n)
        .into_par_iter()
        .map(|v| solve(g, v, k, opts))
        .collect::<Result<Vec<_>>>()?;
    let per_vertex: Vec<usize> = results.iter().map(|r| r.sn).collect();
    let total: usize = per_vertex.iter().sum();
    let exact_rho = q(total as i64, (n * n) as i64);
    Ok(RateReport {
        n,
        k,
        mode: RateMode::Exact,
        rho: rational::to_f64(&exact_rho),
        rho_exact: Some(exact_rho),
        exact: results.iter().all(|r| r.exact),
        per_vertex: Some(per_vertex),
        samples: n,
        stderr: None,
        strategy: "exact".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Every vertex once, in order.
    All,
    /// This many ignition vertices drawn uniformly with replacement.
    Random(usize),
}

/// Mean of `saved / n` over sampled ignition vertices under `strategy`.
///
/// A lower-bound estimate of `rho_k` unless the strategy is optimal. Plays
/// run in parallel but the vertices are drawn up front and the sum is taken
/// in order, so the result depends only on `seed`.
pub fn rho_monte_carlo<S: Strategy + ?Sized>(
    g: &Graph,
    k: usize,
    strategy: &S,
    label: &str,
    sampling: Sampling,
    seed: u64,
) -> Result<RateReport> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if k == 0 {
        return Err(Error::NoFirefighters);
    }
    let starts: Vec<usize> = match sampling {
        Sampling::All => (0..n).collect(),
        Sampling::Random(0) => {
            return Err(Error::InvalidParameter("samples must be at least 1".into()))
        }
        Sampling::Random(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..s).map(|_| rng.random_range(0..n)).collect()
        }
    };
    let saved = starts
        .par_iter()
        .map(|&v| play(g, v, k, strategy).map(|o| o.saved))
        .collect::<Result<Vec<_>>>()?;
    let fractions: Vec<f64> = saved.iter().map(|&s| s as f64 / n as f64).collect();
    let m = fractions.len() as f64;
    let mean = fractions.iter().sum::<f64>() / m;
    let stderr = if fractions.len() > 1 {
        let var = fractions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    Ok(RateReport {
        n,
        k,
        mode: RateMode::MonteCarlo,
        rho: mean,
        rho_exact: None,
        exact: false,
        per_vertex: matches!(sampling, Sampling::All).then_some(saved),
        samples: starts.len(),
        stderr: Some(stderr),
        strategy: label.into(),
    })
}

fn ser_bigs<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_opt_bigs<S: Serializer>(
    v: &Option<Vec<BigInt>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_bigs(v, s),
        None => s.serialize_none(),
    }
}

/// Per-step fire counts for the containment strategy on a biregular tree
/// with degrees `k+1` (X) and `k+3` (Y), where `k` frontier vertices are
/// protected every round. Index `t - 1` holds `s_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceTrace {
    pub k: usize,
    /// Side of the ignition vertex. Only the X-side trace is normative.
    pub ignition: Side,
    #[serde(serialize_with = "ser_bigs")]
    pub s: Vec<BigInt>,
    /// Running totals `q_t = s_1 + ... + s_t`.
    #[serde(serialize_with = "ser_bigs")]
    pub q: Vec<BigInt>,
    /// `p_t = n - q_t`, once `n` is supplied.
    #[serde(serialize_with = "ser_opt_bigs")]
    pub p: Option<Vec<BigInt>>,
}

impl RecurrenceTrace {
    /// `s_t` for 1-based `t`.
    pub fn at(&self, t: usize) -> &BigInt {
        &self.s[t - 1]
    }

    pub fn with_n(mut self, n: &BigInt) -> Self {
        self.p = Some(self.q.iter().map(|q| n - q).collect());
        self
    }
}

fn check_k(k: usize) -> Result<()> {
    match k {
        0 => Err(Error::NoFirefighters),
        1 => Err(Error::InvalidParameter(
            "k = 1 is not supported: on the (2,4)-biregular tree the fire settles into the pattern 1, 2, 1, 2 and never grows".into(),
        )),
        _ => Ok(()),
    }
}

fn trace(
    k: usize,
    ignition: Side,
    r_max: usize,
    s1: BigInt,
    s2: BigInt,
) -> Result<RecurrenceTrace> {
    check_k(k)?;
    if r_max == 0 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    let kb = BigInt::from(k);
    let grow_y = BigInt::from(k + 2);
    let mut s = vec![s1, s2];
    // After a Y layer burns, each Y vertex has k+2 fresh X neighbours; after an
    // X layer, k fresh Y neighbours. k of the new frontier are protected.
    let mut y_burning = ignition == Side::X;
    while s.len() < 2 * r_max {
        let last = s.last().unwrap();
        let next = if y_burning {
            last * &grow_y - &kb
        } else {
            last * &kb - &kb
        };
        s.push(next);
        y_burning = !y_burning;
    }
    s.truncate(2 * r_max);
    let mut q = Vec::with_capacity(s.len());
    let mut acc = BigInt::zero();
    for x in &s {
        acc += x;
        q.push(acc.clone());
    }
    Ok(RecurrenceTrace {
        k,
        ignition,
        s,
        q,
        p: None,
    })
}

/// `s_1, ..., s_{2 r_max}` for an X-side ignition: `s_1 = s_2 = 1`,
/// `s_{2r+1} = s_{2r}(k+2) - k`, `s_{2r+2} = s_{2r+1} k - k`.
pub fn s_recurrence(k: usize, r_max: usize) -> Result<RecurrenceTrace> {
    trace(k, Side::X, r_max, BigInt::one(), BigInt::one())
}

/// The same process started at a Y vertex: `s_1 = 1`, `s_2 = 3`,
/// `s_3 = 2k`, and so on. Not covered by the growth argument.
pub fn s_recurrence_y_side(k: usize, r_max: usize) -> Result<RecurrenceTrace> {
    trace(k, Side::Y, r_max, BigInt::one(), BigInt::from(3))
}

/// `s_{2r} = (k-1)/(k(k+2)(k^2+2k-1)) (k(k+2))^r + k(k+1)/(k^2+2k-1)`.
pub fn s_closed(k: usize, r: usize) -> Result<BigRational> {
    check_k(k)?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let kb = BigInt::from(k);
    let base = &kb * (&kb + 2);
    let denom = &base - 1;
    let lead = BigRational::new(&kb - 1, &base * &denom);
    let tail = BigRational::new(&kb * (&kb + 1), denom);
    let value = lead * BigRational::from_integer(num::pow(base, r)) + tail;
    if !rational::is_positive_integer(&value) {
        return Err(Error::NonInteger(format!(
            "s_closed({k}, {r}) = {}",
            rational::fmt_big(&value)
        )));
    }
    Ok(value)
}

/// Complete tree of the given depth around a root on side `root`, with X
/// vertices of degree `k+1` and Y vertices of degree `k+3` (except leaves).
/// Vertex 0 is the root; vertices are numbered level by level.
pub fn biregular_tree(k: usize, root: Side, depth: usize) -> Graph {
    let mut edges = Vec::new();
    let mut side = vec![root];
    let mut layer = vec![0usize];
    for level in 0..depth {
        let mut next = Vec::new();
        for &u in &layer {
            let full = match side[u] {
                Side::X => k + 1,
                Side::Y => k + 3,
            };
            let children = if level == 0 { full } else { full - 1 };
            let child_side = match side[u] {
                Side::X => Side::Y,
                Side::Y => Side::X,
            };
            for _ in 0..children {
                let c = side.len();
                side.push(child_side);
                edges.push((u, c));
                next.push(c);
            }
        }
        layer = next;
    }
    Graph::new(side.len(), &edges, Some(side)).expect("tree edges are simple")
}

/// Timeline markers of the growth argument, with every additive `O(1)`
/// term set to zero. A projection, not a certified bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProjection {
    pub k: usize,
    pub eps_prime: f64,
    pub n: f64,
    pub q_start: f64,
    /// End of the tree phase, `(1/2) log_{k^2+2k} ln n`.
    pub t_tree: f64,
    /// Half of the graph burning, `log_{1+eps'/2} n`.
    pub t_half: f64,
    /// Same marker started from `q_start` burning vertices at `t_tree`:
    /// `t_tree + log_{1+eps'/2}(n / (2 q_start))`, floored at `t_tree`.
    pub t_half_from_start: f64,
    /// `t_half + log_{1/(1-eps'/(2(k+3)))} n`.
    pub t_bar: f64,
    /// `2(k+3)/eps' * t_bar`.
    pub saved_bound: f64,
    pub o1_terms_zeroed: bool,
}

pub fn growth_projection(
    k: usize,
    eps_prime: f64,
    n: f64,
    q_start: f64,
) -> Result<GrowthProjection> {
    check_k(k)?;
    if !(eps_prime > 0.0 && eps_prime < 1.0) {
        return Err(Error::Domain(format!(
            "eps' must lie in (0, 1), got {eps_prime}"
        )));
    }
    if !(q_start >= 1.0) {
        return Err(Error::Domain(format!(
            "q_start must be at least 1, got {q_start}"
        )));
    }
    if !(n > std::f64::consts::E) {
        return Err(Error::Domain(format!("n must exceed e, got {n}")));
    }
    let kf = k as f64;
    let t_tree = 0.5 * n.ln().ln() / (kf * kf + 2.0 * kf).ln();
    let grow = (1.0 + eps_prime / 2.0).ln();
    let t_half = n.ln() / grow;
    let t_half_from_start = t_tree + ((n / (2.0 * q_start)).ln() / grow).max(0.0);
    let shrink = -(1.0 - eps_prime / (2.0 * (kf + 3.0))).ln();
    let t_bar = t_half + n.ln() / shrink;
    Ok(GrowthProjection {
        k,
        eps_prime,
        n,
        q_start,
        t_tree,
        t_half,
        t_half_from_start,
        t_bar,
        saved_bound: 2.0 * (kf + 3.0) / eps_prime * t_bar,
        o1_terms_zeroed: true,
    })
}

/// Average degree of a `(k+1, k+3)`-biregular graph, which equals `tau_k`.
pub fn average_degree_check(k: usize) -> Result<Q> {
    if k == 0 {
        return Err(Error::NoFirefighters);
    }
    let (a, b) = (k as i64 + 1, k as i64 + 3);
    // (k+3)n vertices of degree k+1 and (k+1)n of degree k+3, per unit n.
    let avg = q(b * a + a * b, b + a);
    assert_eq!(avg, tau(k), "biregular average degree must equal tau");
    Ok(avg)
}

/// `2m / n` of a concrete graph as an exact rational.
pub fn average_degree(g: &Graph) -> Result<Q> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    Ok(q(g.degree_sum() as i64, g.n() as i64))
}

/// Fits `y = c x` by least squares and returns `c` and the relative
/// residuals `(y - c x) / (c x)`.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> (f64, Vec<f64>) {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let c = sxy / sxx;
    let res = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - c * x) / (c * x))
        .collect();
    (c, res)
}

/// `(1/2) log_{k^2+2k} n` rounded down, times `k`: saves achievable by
/// containing the fire in the tree phase.
pub fn tree_phase_saves(k: usize, n_total: usize) -> usize {
    let base = (k * k + 2 * k) as f64;
    let t = (0.5 * (n_total as f64).ln() / base.ln()).floor();
    t.to_usize().unwrap_or(0) * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::NoProtection;
    use crate::strategies::{ExactStrategy, Greedy};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exact_rates() {
        let r = rho_exact(&Graph::path(5), 1, SolverOptions::default()).unwrap();
        assert_eq!(r.rho_exact, Some(q(17, 25)));
        assert!(r.exact);
        assert_eq!(r.per_vertex.as_deref(), Some(&[4, 3, 3, 3, 4][..]));
        assert_eq!(
            rho_exact(&Graph::complete(6), 1, SolverOptions::default())
                .unwrap()
                .rho_exact,
            Some(q(1, 6))
        );
        let k25 = Graph::complete_bipartite(2, 5);
        assert_eq!(
            rho_exact(&k25, 1, SolverOptions::default())
                .unwrap()
                .rho_exact,
            Some(q(2, 7))
        );
    }

    #[test]
    fn exact_rate_json() {
        let r = rho_exact(&Graph::path(5), 1, SolverOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["rho_exact"], "17/25");
        assert_eq!(v["mode"], "exact");
    }

    #[test]
    fn monte_carlo_rates() {
        let p = Graph::path(30);
        let none = rho_monte_carlo(&p, 1, &NoProtection, "none", Sampling::Random(50), 3).unwrap();
        assert_eq!(none.rho, 0.0);
        let greedy = rho_monte_carlo(&p, 1, &Greedy, "greedy", Sampling::All, 0).unwrap();
        let n = 30.0;
        assert!((greedy.rho - (1.0 - 2.0 / n + 2.0 / (n * n))).abs() < 1e-12);
        let g = Graph::complete_bipartite(2, 4);
        let ex =
            rho_monte_carlo(&g, 1, &ExactStrategy::default(), "exact", Sampling::All, 0).unwrap();
        let exact = rho_exact(&g, 1, SolverOptions::default()).unwrap();
        assert_eq!(ex.per_vertex, exact.per_vertex);
        assert!(rho_monte_carlo(&p, 1, &Greedy, "greedy", Sampling::Random(0), 0).is_err());
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let g = Graph::cycle(40).disjoint_union(&Graph::star(9));
        let a = rho_monte_carlo(&g, 1, &Greedy, "greedy", Sampling::Random(64), 11).unwrap();
        let b = rho_monte_carlo(&g, 1, &Greedy, "greedy", Sampling::Random(64), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recurrence_values() {
        let t = s_recurrence(2, 3).unwrap();
        assert_eq!(t.s, big(&[1, 1, 2, 2, 6, 10]));
        assert_eq!(t.q, big(&[1, 2, 4, 6, 12, 22]));
        assert_eq!(s_recurrence(3, 2).unwrap().at(4), &BigInt::from(3));
        assert!(s_recurrence(1, 3).is_err());
        assert!(s_recurrence(2, 0).is_err());
        let p = t.with_n(&BigInt::from(100)).p.unwrap();
        assert_eq!(p[5], BigInt::from(78));
        let y = s_recurrence_y_side(2, 2).unwrap();
        assert_eq!(y.s, big(&[1, 3, 4, 14]));
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(s_closed(2, 1).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(s_closed(2, 2).unwrap(), BigRational::from_integer(2.into()));
        let t = s_recurrence(4, 3).unwrap();
        assert_eq!(
            s_closed(4, 3).unwrap(),
            BigRational::from_integer(t.at(6).clone())
        );
        assert!(s_closed(1, 2).is_err());
        assert!(s_closed(2, 0).is_err());
    }

    fn tree_fire(k: usize, root: Side, rounds: usize) -> Vec<usize> {
        let g = biregular_tree(k, root, rounds + 2);
        let out = play(&g, 0, k, &Greedy).unwrap();
        out.new_fire[..rounds].to_vec()
    }

    #[test]
    fn tree_simulation_matches_recurrence() {
        for k in 2..=3 {
            let sim = tree_fire(k, Side::X, 6);
            let rec = s_recurrence(k, 3).unwrap();
            let rec: Vec<usize> = rec.s.iter().map(|x| x.to_usize().unwrap()).collect();
            assert_eq!(sim, rec, "k = {k}");
        }
        let sim = tree_fire(2, Side::Y, 4);
        let rec: Vec<usize> = s_recurrence_y_side(2, 2)
            .unwrap()
            .s
            .iter()
            .map(|x| x.to_usize().unwrap())
            .collect();
        assert_eq!(sim, rec);
    }

    #[test]
    fn k1_tree_is_periodic() {
        let sim = tree_fire(1, Side::X, 12);
        assert_eq!(sim, vec![1, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn biregular_tree_degrees() {
        let t = biregular_tree(2, Side::X, 3);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.n(), 1 + 3 + 12 + 24);
        assert!(t.neighbors(0).iter().all(|&y| t.degree(y) == 5));
    }

    #[test]
    fn growth_timeline() {
        for k in 2..=6 {
            for e in [4u32, 10, 20] {
                let n = 2f64.powi(e as i32);
                let p = growth_projection(k, 0.088, n, 1.0).unwrap();
                assert!(p.t_tree < p.t_half && p.t_half < p.t_bar);
                assert!(p.t_half_from_start <= p.t_tree + p.t_half);
                assert!(p.o1_terms_zeroed);
            }
        }
        let a = growth_projection(2, 0.088, 2f64.powi(10), 1.0).unwrap();
        let b = growth_projection(2, 0.088, 2f64.powi(20), 1.0).unwrap();
        let ra = a.t_bar / 2f64.powi(10).ln();
        let rb = b.t_bar / 2f64.powi(20).ln();
        assert!((ra - rb).abs() / ra < 1e-9);
        assert!(b.saved_bound / a.saved_bound < 2.0 + 1e-9);
        assert!(growth_projection(2, 1.0, 100.0, 1.0).is_err());
        assert!(growth_projection(2, 0.088, 100.0, 0.0).is_err());
    }

    #[test]
    fn average_degrees() {
        assert_eq!(average_degree_check(2).unwrap(), q(15, 4));
        assert_eq!(average_degree_check(1).unwrap(), q(8, 3));
        let g = crate::pairing::sample_simple(
            &crate::pairing::PairingConfig::new(6, 3, 1).unwrap(),
            &mut crate::pairing::PairingConfig::new(6, 3, 1).unwrap().rng(),
        )
        .unwrap();
        assert_eq!(average_degree(&g).unwrap(), q(15, 4));
    }

    #[test]
    fn tree_saves() {
        assert_eq!(tree_phase_saves(2, 160), 2);
        assert_eq!(tree_phase_saves(2, 1280), 2);
        assert_eq!(tree_phase_saves(2, 5000), 2 * 2);
    }

    #[test]
    fn origin_fit() {
        let (c, res) = fit_through_origin(&[1.0, 2.0], &[2.0, 4.0]);
        assert!((c - 2.0).abs() < 1e-12);
        assert!(res.iter().all(|r| r.abs() < 1e-12));
    }
}
