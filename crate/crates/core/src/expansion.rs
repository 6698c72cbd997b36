//! Vertex expansion of `(d, d+2)`-biregular graphs.
//!
//! Two pieces live here. The first is the pair of first-moment rate
//! functions `f` (subsets of `Y`) and `g` (subsets of `X`): when the rate is
//! below one for every `c` in `(0, 1/2]`, the expected number of badly
//! expanding sets decays exponentially. [`scan_eps`] searches a grid for the
//! largest admissible expansion constant. The second piece is a set of
//! checkers that test expansion on a concrete graph, exhaustively for small
//! sets and by sampling for large ones.
//!
//! Here `N(K)` is the set of vertices outside `K` with a neighbour in `K`.

use itertools::Itertools;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Side};
use crate::rational::{q, Q};

/// One-side expansion constant that the rate functions are built around.
pub const EPS_ONE_SIDE: f64 = 0.237;
/// Larger constant quoted for the X-side rate `g`.
pub const EPS_X_SIDE: f64 = 0.310;
/// Joint expansion constant.
pub const EPS_JOINT: f64 = 0.088;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RateFn {
    /// Subsets of `Y` (degree `d+2` side).
    F,
    /// Subsets of `X` (degree `d` side).
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionParams {
    pub d: usize,
    pub eps: f64,
    pub eps_prime: f64,
    pub c: f64,
}

impl ExpansionParams {
    pub fn new(d: usize, eps: f64, eps_prime: f64, c: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        if !(eps_prime > 0.0 && eps_prime < 0.375 * eps) {
            return Err(Error::Domain(format!(
                "eps' must lie in (0, 3 eps / 8), got {eps_prime}"
            )));
        }
        if !(c > 0.0 && c <= 0.5) {
            return Err(Error::Domain(format!("c must lie in (0, 1/2], got {c}")));
        }
        Ok(ExpansionParams {
            d,
            eps,
            eps_prime,
            c,
        })
    }
}

fn check_domain(c: f64, eps: f64, d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Domain(format!("d must be at least 3, got {d}")));
    }
    if !(c > 0.0 && c <= 0.5) {
        return Err(Error::Domain(format!("c must lie in (0, 1/2], got {c}")));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if c * (1.0 + eps) >= 1.0 {
        return Err(Error::Domain(format!(
            "c(1+eps) = {} must be below 1",
            c * (1.0 + eps)
        )));
    }
    Ok(())
}

/// Exponents of the five factors of `f`, paired with their bases.
fn f_factors(c: f64, eps: f64, d: usize) -> [(f64, f64); 5] {
    let d = d as f64;
    let e1 = 1.0 + eps;
    [
        (c, c * d * (d + 1.0 - (d + 2.0) / d * e1)),
        (e1, e1 * c * d * (d + 2.0) * (1.0 - 1.0 / d)),
        (eps, -eps * c * d * (d + 2.0)),
        (1.0 - c, d * (d + 1.0) * (1.0 - c)),
        (1.0 - c * e1, -(d + 2.0) * (1.0 - c * e1)),
    ]
}

fn g_factors(c: f64, eps: f64, d: usize) -> [(f64, f64); 5] {
    let d = d as f64;
    let e1 = 1.0 + eps;
    [
        (c, c * (d + 2.0) * (d - 1.0 - d / (d + 2.0) * e1)),
        (e1, e1 * c * d * (d + 2.0) * (1.0 - 1.0 / (d + 2.0))),
        (eps, -eps * c * d * (d + 2.0)),
        (1.0 - c, (d - 1.0) * (d + 2.0) * (1.0 - c)),
        (1.0 - c * e1, -d * (1.0 - c * e1)),
    ]
}

fn factors(which: RateFn, c: f64, eps: f64, d: usize) -> [(f64, f64); 5] {
    match which {
        RateFn::F => f_factors(c, eps, d),
        RateFn::G => g_factors(c, eps, d),
    }
}

/// Rate evaluated as `exp(sum exponent * ln base)`.
pub fn rate(which: RateFn, c: f64, eps: f64, d: usize) -> Result<f64> {
    check_domain(c, eps, d)?;
    Ok(factors(which, c, eps, d)
        .iter()
        .map(|(b, e)| e * b.ln())
        .sum::<f64>()
        .exp())
}

/// Rate evaluated as a plain product of powers.
pub fn rate_direct(which: RateFn, c: f64, eps: f64, d: usize) -> Result<f64> {
    check_domain(c, eps, d)?;
    Ok(factors(which, c, eps, d)
        .iter()
        .map(|(b, e)| b.powf(*e))
        .product())
}

pub fn f_rate(c: f64, eps: f64, d: usize) -> Result<f64> {
    rate(RateFn::F, c, eps, d)
}

pub fn g_rate(c: f64, eps: f64, d: usize) -> Result<f64> {
    rate(RateFn::G, c, eps, d)
}

/// `(sup, argmax)` of the rate over `c = j / (2 c_grid)`, `j = 1..=c_grid`.
pub fn sup_over_c(which: RateFn, eps: f64, d: usize, c_grid: usize) -> Result<(f64, f64)> {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 1..=c_grid {
        let c = j as f64 / (2 * c_grid) as f64;
        let r = rate(which, c, eps, d)?;
        if r > best.0 {
            best = (r, c);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub eps: f64,
    pub sup_rate: f64,
    pub argmax_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsScan {
    pub d: usize,
    pub which: RateFn,
    pub c_grid: usize,
    pub eps_grid: usize,
    /// Largest grid `eps` such that it and every smaller grid value keep
    /// the sup of the rate below one. `None` if the first grid point fails.
    pub admissible_eps: Option<f64>,
    /// The grid point right after `admissible_eps`, if any.
    pub first_inadmissible: Option<f64>,
    pub argmax_c: Option<f64>,
    pub rows: Vec<ScanRow>,
}

/// Scans `eps = i / eps_grid` for `i = 1..eps_grid`.
pub fn scan_eps(d: usize, which: RateFn, c_grid: usize, eps_grid: usize) -> Result<EpsScan> {
    if c_grid < 1000 || eps_grid < 1000 {
        return Err(Error::InvalidParameter(
            "scan grids need at least 1000 points".into(),
        ));
    }
    let rows: Vec<ScanRow> = (1..eps_grid)
        .into_par_iter()
        .map(|i| {
            let eps = i as f64 / eps_grid as f64;
            sup_over_c(which, eps, d, c_grid).map(|(sup_rate, argmax_c)| ScanRow {
                eps,
                sup_rate,
                argmax_c,
            })
        })
        .collect::<Result<_>>()?;
    let ok = rows.iter().take_while(|r| r.sup_rate < 1.0).count();
    Ok(EpsScan {
        d,
        which,
        c_grid,
        eps_grid,
        admissible_eps: ok.checked_sub(1).map(|i| rows[i].eps),
        first_inadmissible: rows.get(ok).map(|r| r.eps),
        argmax_c: ok.checked_sub(1).map(|i| rows[i].argmax_c),
        rows,
    })
}

/// Lower bounds on `|N[K]| / |K|` from the four cases of the joint
/// expansion argument, for one-side constant `eps`:
///
/// 1. `(1 + (1+eps) d/(d+2)) / (1 + d/(d+2))`
/// 2. `((1 + eps/2) d + 1) / (d + 1)`
/// 3. `(1 + (1+eps)(d+2)/d) / (1 + (d+2)/d)`
/// 4. `((1 + eps/2) d + 1 + eps) / (d + 1)`
pub fn joint_case_ratios(d: usize, eps: Q) -> [Q; 4] {
    let one = q(1, 1);
    let d = q(d as i64, 1);
    let two = q(2, 1);
    let x = d / (d + two);
    let y = (d + two) / d;
    [
        (one + (one + eps) * x) / (one + x),
        ((one + eps / two) * d + one) / (d + one),
        (one + (one + eps) * y) / (one + y),
        ((one + eps / two) * d + one + eps) / (d + one),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpansionKind {
    /// `K` inside `Y`, requirement `|N(K)| >= |K| (d+2)/d (1+eps)`.
    YSide,
    /// `K` inside `X`, requirement `|N(K)| >= |K| d/(d+2) (1+eps)`.
    XSide,
    /// `K` anywhere, requirement `|N(K)| >= eps' |K|`.
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    /// Sizes up to this are enumerated exhaustively, subject to `enum_cap`.
    pub exact_max: usize,
    /// Random subsets per sampled size class.
    pub samples: usize,
    /// Number of log-spaced sampled size classes.
    pub size_classes: usize,
    /// A size is enumerated only if it has at most this many subsets;
    /// otherwise it is sampled.
    pub enum_cap: u64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            exact_max: 8,
            samples: 10_000,
            size_classes: 12,
            enum_cap: 2_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub set: Vec<usize>,
    pub neighborhood: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub kind: ExpansionKind,
    pub constant: f64,
    pub pool_size: usize,
    pub max_size: usize,
    pub checked_sizes: Vec<usize>,
    pub sampled_sizes: Vec<usize>,
    pub subsets_checked: u64,
    pub subsets_sampled: u64,
    pub violation_count: u64,
    /// At most [`MAX_REPORTED`] violations, ordered by size then set.
    pub violations: Vec<Violation>,
}

pub const MAX_REPORTED: usize = 64;

impl ExpansionReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }
}

/// Number of vertices outside `set` adjacent to it.
pub fn open_neighborhood_size(g: &Graph, set: &[usize]) -> usize {
    let mut mark = vec![0u8; g.n()];
    neighborhood_with(g, set, &mut mark)
}

fn neighborhood_with(g: &Graph, set: &[usize], mark: &mut [u8]) -> usize {
    for &v in set {
        mark[v] = 1;
    }
    let mut count = 0;
    for &v in set {
        for &w in g.neighbors(v) {
            if mark[w] == 0 {
                mark[w] = 2;
                count += 1;
            }
        }
    }
    for &v in set {
        mark[v] = 0;
        for &w in g.neighbors(v) {
            mark[w] = 0;
        }
    }
    count
}

fn ceil_threshold(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Required `|N(K)|` for a set of `size` vertices.
pub fn required(kind: ExpansionKind, d: usize, constant: f64, size: usize) -> usize {
    let (d, k) = (d as f64, size as f64);
    let x = match kind {
        ExpansionKind::YSide => k * (d + 2.0) / d * (1.0 + constant),
        ExpansionKind::XSide => k * d / (d + 2.0) * (1.0 + constant),
        ExpansionKind::Joint => constant * k,
    };
    ceil_threshold(x)
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// One-side check on a biregular graph: `Side::Y` tests subsets of `Y`,
/// `Side::X` subsets of `X`.
pub fn check_side_expansion(
    g: &Graph,
    d: usize,
    side: Side,
    eps: f64,
    opts: &CheckOptions,
) -> Result<ExpansionReport> {
    if !g.validate_biregular(d)? {
        return Err(Error::InvalidParameter(format!(
            "graph is not ({d},{})-biregular",
            d + 2
        )));
    }
    let sides = g.sides().expect("validated above");
    let pool: Vec<usize> = (0..g.n()).filter(|&v| sides[v] == side).collect();
    let kind = match side {
        Side::Y => ExpansionKind::YSide,
        Side::X => ExpansionKind::XSide,
    };
    Ok(run_check(g, d, kind, eps, pool, opts))
}

pub fn check_joint_expansion(g: &Graph, eps_prime: f64, opts: &CheckOptions) -> ExpansionReport {
    let pool: Vec<usize> = (0..g.n()).collect();
    run_check(g, 0, ExpansionKind::Joint, eps_prime, pool, opts)
}

/// Size classes `(exhaustive, sampled)` for a pool of `pool` vertices and
/// sets of size up to `max_size`.
fn plan_sizes(pool: usize, max_size: usize, opts: &CheckOptions) -> (Vec<usize>, Vec<usize>) {
    let mut exact = Vec::new();
    let mut s = 1;
    while s <= max_size.min(opts.exact_max) && binomial(pool, s) <= opts.enum_cap {
        exact.push(s);
        s += 1;
    }
    let lo = s;
    let mut sampled = Vec::new();
    if lo <= max_size && opts.samples > 0 && opts.size_classes > 0 {
        let classes = opts.size_classes.max(1);
        for i in 0..classes {
            let t = if classes == 1 {
                1.0
            } else {
                i as f64 / (classes - 1) as f64
            };
            let size = ((lo as f64).ln() + t * ((max_size as f64).ln() - (lo as f64).ln()))
                .exp()
                .round() as usize;
            let size = size.clamp(lo, max_size);
            if sampled.last() != Some(&size) {
                sampled.push(size);
            }
        }
    }
    (exact, sampled)
}

struct SizeOutcome {
    count: u64,
    violations: u64,
    examples: Vec<Violation>,
}

fn run_check(
    g: &Graph,
    d: usize,
    kind: ExpansionKind,
    constant: f64,
    pool: Vec<usize>,
    opts: &CheckOptions,
) -> ExpansionReport {
    let max_size = pool.len() / 2;
    let (exact, sampled) = plan_sizes(pool.len(), max_size, opts);

    let exact_out: Vec<SizeOutcome> = exact
        .par_iter()
        .map(|&s| {
            let need = required(kind, d, constant, s);
            let mut mark = vec![0u8; g.n()];
            let mut out = SizeOutcome {
                count: 0,
                violations: 0,
                examples: Vec::new(),
            };
            for set in pool.iter().copied().combinations(s) {
                out.count += 1;
                let nb = neighborhood_with(g, &set, &mut mark);
                if nb < need {
                    out.violations += 1;
                    if out.examples.len() < MAX_REPORTED {
                        out.examples.push(Violation {
                            set,
                            neighborhood: nb,
                            required: need,
                        });
                    }
                }
            }
            out
        })
        .collect();

    let sampled_out: Vec<SizeOutcome> = sampled
        .par_iter()
        .enumerate()
        .map(|(class, &s)| {
            let need = required(kind, d, constant, s);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(class as u64 + 1);
            let mut mark = vec![0u8; g.n()];
            let mut out = SizeOutcome {
                count: 0,
                violations: 0,
                examples: Vec::new(),
            };
            for i in 0..opts.samples {
                let mut set = if i % 2 == 0 {
                    pool.choose_multiple(&mut rng, s)
                        .copied()
                        .collect::<Vec<_>>()
                } else {
                    grow_set(g, &pool, kind, s, &mut rng)
                };
                out.count += 1;
                let nb = neighborhood_with(g, &set, &mut mark);
                if nb < need {
                    out.violations += 1;
                    if out.examples.len() < MAX_REPORTED {
                        set.sort_unstable();
                        out.examples.push(Violation {
                            set,
                            neighborhood: nb,
                            required: need,
                        });
                    }
                }
            }
            out
        })
        .collect();

    let mut violations: Vec<Violation> = exact_out
        .iter()
        .chain(&sampled_out)
        .flat_map(|o| o.examples.iter().cloned())
        .collect();
    violations.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
    violations.dedup();
    violations.truncate(MAX_REPORTED);

    ExpansionReport {
        kind,
        constant,
        pool_size: pool.len(),
        max_size,
        subsets_checked: exact_out.iter().map(|o| o.count).sum(),
        subsets_sampled: sampled_out.iter().map(|o| o.count).sum(),
        violation_count: exact_out
            .iter()
            .chain(&sampled_out)
            .map(|o| o.violations)
            .sum(),
        checked_sizes: exact,
        sampled_sizes: sampled,
        violations,
    }
}

/// A compact random set: start from a random pool vertex and keep adding
/// random pool vertices close to the set (adjacent for joint checks, at
/// distance two for one-side checks). Such sets have small neighbourhoods
/// and are the likeliest to violate expansion.
fn grow_set<R: Rng>(
    g: &Graph,
    pool: &[usize],
    kind: ExpansionKind,
    size: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut in_pool = vec![false; g.n()];
    for &v in pool {
        in_pool[v] = true;
    }
    let mut in_set = vec![false; g.n()];
    let mut set = Vec::with_capacity(size);
    let mut boundary: Vec<usize> = Vec::new();
    let add =
        |v: usize, set: &mut Vec<usize>, in_set: &mut Vec<bool>, boundary: &mut Vec<usize>| {
            in_set[v] = true;
            set.push(v);
            let step = |u: usize, boundary: &mut Vec<usize>| {
                if in_pool[u] && !in_set[u] {
                    boundary.push(u);
                }
            };
            for &w in g.neighbors(v) {
                match kind {
                    ExpansionKind::Joint => step(w, boundary),
                    _ => {
                        for &x in g.neighbors(w) {
                            step(x, boundary);
                        }
                    }
                }
            }
        };
    let start = *pool.choose(rng).expect("non-empty pool");
    add(start, &mut set, &mut in_set, &mut boundary);
    while set.len() < size {
        boundary.retain(|&u| !in_set[u]);
        let next = if boundary.is_empty() {
            let rest: Vec<usize> = pool.iter().copied().filter(|&u| !in_set[u]).collect();
            *rest.choose(rng).expect("pool larger than size")
        } else {
            boundary[rng.random_range(0..boundary.len())]
        };
        add(next, &mut set, &mut in_set, &mut boundary);
    }
    set.shuffle(rng);
    set
}
