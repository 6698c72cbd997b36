//! Pairing model for random `(d, d+2)`-biregular bipartite graphs.
//!
//! `P_X` holds `d(d+2)n` points in `(d+2)n` buckets of `d` points; `P_Y`
//! holds the same number of points in `dn` buckets of `d+2` points. A
//! pairing is a perfect matching `P_X -> P_Y`; projecting buckets to
//! vertices gives a bipartite multigraph. Conditioned on being simple the
//! projection is uniform over simple biregular graphs, so rejection
//! sampling is exact.
//!
//! Randomness comes from [`ChaCha8Rng`]. Batched drivers seed every batch
//! with the config seed and select the ChaCha stream by batch index, so
//! results do not depend on the number of worker threads.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Side};

pub const DEFAULT_MAX_TRIES: usize = 10_000;
const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingConfig {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub max_tries: usize,
}

impl PairingConfig {
    pub fn new(n: usize, d: usize, seed: u64) -> Result<Self> {
        let cfg = PairingConfig {
            n,
            d,
            seed,
            max_tries: DEFAULT_MAX_TRIES,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_tries(mut self, max_tries: usize) -> Result<Self> {
        self.max_tries = max_tries;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::InvalidParameter(format!(
                "d must be at least 3, got {}",
                self.d
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.max_tries < 1 {
            return Err(Error::InvalidParameter(
                "max_tries must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Points on each side, `d(d+2)n`.
    pub fn points(&self) -> usize {
        self.d * (self.d + 2) * self.n
    }

    /// `|X| = (d+2)n`.
    pub fn x_buckets(&self) -> usize {
        (self.d + 2) * self.n
    }

    /// `|Y| = dn`.
    pub fn y_buckets(&self) -> usize {
        self.d * self.n
    }

    pub fn total_vertices(&self) -> usize {
        self.x_buckets() + self.y_buckets()
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Perfect matching: X point `i` is paired with Y point `partner[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub partner: Vec<u32>,
}

impl Pairing {
    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.partner.len()];
        self.partner.iter().all(|&j| {
            let j = j as usize;
            j < seen.len() && !std::mem::replace(&mut seen[j], true)
        })
    }
}

/// Bipartite multigraph on buckets. Edge keys are `(x_bucket, y_bucket)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub d: usize,
    pub x_buckets: usize,
    pub y_buckets: usize,
    pub edges: BTreeMap<(usize, usize), usize>,
}

impl Multigraph {
    pub fn total_multiplicity(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    /// Degrees counted with multiplicity: `(x_degrees, y_degrees)`.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut dx = vec![0; self.x_buckets];
        let mut dy = vec![0; self.y_buckets];
        for (&(x, y), &m) in &self.edges {
            dx[x] += m;
            dy[y] += m;
        }
        (dx, dy)
    }

    /// Simple graph with X buckets as vertices `0..|X|` and Y buckets after
    /// them. Fails if any edge has multiplicity above one.
    pub fn to_graph(&self) -> Result<Graph> {
        if let Some((&(x, y), _)) = self.edges.iter().find(|(_, &m)| m > 1) {
            return Err(Error::DuplicateEdge(x, self.x_buckets + y));
        }
        let edges: Vec<_> = self
            .edges
            .keys()
            .map(|&(x, y)| (x, self.x_buckets + y))
            .collect();
        let side = (0..self.x_buckets + self.y_buckets)
            .map(|v| if v < self.x_buckets { Side::X } else { Side::Y })
            .collect();
        Graph::new(self.x_buckets + self.y_buckets, &edges, Some(side))
    }
}

/// Uniformly random pairing: a shuffle of the Y points, which is the same
/// distribution as choosing pairs one at a time uniformly among the
/// remaining points.
pub fn generate_pairing<R: Rng + ?Sized>(cfg: &PairingConfig, rng: &mut R) -> Pairing {
    let mut partner: Vec<u32> = (0..cfg.points() as u32).collect();
    partner.shuffle(rng);
    Pairing { partner }
}

pub fn project(p: &Pairing, cfg: &PairingConfig) -> Result<Multigraph> {
    if p.partner.len() != cfg.points() {
        return Err(Error::SizeMismatch {
            expected: cfg.points(),
            got: p.partner.len(),
        });
    }
    let mut edges = BTreeMap::new();
    for (i, &j) in p.partner.iter().enumerate() {
        let key = (i / cfg.d, j as usize / (cfg.d + 2));
        *edges.entry(key).or_insert(0) += 1;
    }
    Ok(Multigraph {
        d: cfg.d,
        x_buckets: cfg.x_buckets(),
        y_buckets: cfg.y_buckets(),
        edges,
    })
}

/// Simplicity test straight from the pairing: the projection has a multiple
/// edge iff two points of one X bucket land in the same Y bucket.
pub fn pairing_is_simple(p: &Pairing, d: usize) -> bool {
    p.partner.chunks_exact(d).all(|bucket| {
        bucket.iter().enumerate().all(|(a, &pa)| {
            bucket[a + 1..]
                .iter()
                .all(|&pb| pa as usize / (d + 2) != pb as usize / (d + 2))
        })
    })
}

/// Rejection-samples a simple biregular graph. Returns the graph and the
/// number of pairings drawn.
pub fn sample_simple_counted<R: Rng + ?Sized>(
    cfg: &PairingConfig,
    rng: &mut R,
) -> Result<(Graph, usize)> {
    cfg.validate()?;
    for tries in 1..=cfg.max_tries {
        let p = generate_pairing(cfg, rng);
        if pairing_is_simple(&p, cfg.d) {
            let g = project(&p, cfg)?.to_graph()?;
            return Ok((g, tries));
        }
    }
    Err(Error::RejectionCapExceeded {
        tries: cfg.max_tries,
    })
}

pub fn sample_simple<R: Rng + ?Sized>(cfg: &PairingConfig, rng: &mut R) -> Result<Graph> {
    sample_simple_counted(cfg, rng).map(|(g, _)| g)
}

/// Multigraph mode: one pairing projected without filtering. Not uniform
/// over simple graphs; intended for large `d` where rejection is hopeless.
pub fn sample_multigraph<R: Rng + ?Sized>(cfg: &PairingConfig, rng: &mut R) -> Result<Multigraph> {
    cfg.validate()?;
    project(&generate_pairing(cfg, rng), cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplicityStats {
    pub d: usize,
    pub n: usize,
    pub trials: usize,
    pub simple_count: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub lambda: f64,
    pub predicted: f64,
}

pub fn simplicity_lambda(d: usize) -> f64 {
    ((d * d - 1) as f64) / 2.0
}

/// Monte Carlo estimate of `P(G(P) simple)` next to the limit `exp(-(d^2-1)/2)`.
pub fn simplicity_rate(cfg: &PairingConfig, trials: usize) -> Result<SimplicityStats> {
    cfg.validate()?;
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let batches = trials.div_ceil(BATCH);
    let simple_count: usize = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = cfg.rng();
            rng.set_stream(b as u64);
            let len = BATCH.min(trials - b * BATCH);
            (0..len)
                .filter(|_| pairing_is_simple(&generate_pairing(cfg, &mut rng), cfg.d))
                .count()
        })
        .sum();
    let estimate = simple_count as f64 / trials as f64;
    let lambda = simplicity_lambda(cfg.d);
    Ok(SimplicityStats {
        d: cfg.d,
        n: cfg.n,
        trials,
        simple_count,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        lambda,
        predicted: (-lambda).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, d: usize, seed: u64) -> PairingConfig {
        PairingConfig::new(n, d, seed).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PairingConfig::new(1, 2, 0).is_err());
        assert!(PairingConfig::new(0, 3, 0).is_err());
        assert!(cfg(1, 3, 0).with_max_tries(0).is_err());
    }

    #[test]
    fn pairing_is_bijection_of_right_size() {
        let c = cfg(1, 3, 11);
        let p = generate_pairing(&c, &mut c.rng());
        assert_eq!(p.partner.len(), 15);
        assert!(p.is_bijection());
        assert_eq!(p, generate_pairing(&c, &mut c.rng()));
    }

    #[test]
    fn identity_projection_has_triple_edge() {
        let c = cfg(1, 3, 0);
        let p = Pairing {
            partner: (0..15).collect(),
        };
        let m = project(&p, &c).unwrap();
        assert_eq!(m.edges[&(0, 0)], 3);
        assert_eq!(m.total_multiplicity(), 15);
        assert!(!m.is_simple());
        assert!(!pairing_is_simple(&p, 3));
        assert!(m.to_graph().is_err());
        let bad = Pairing {
            partner: vec![0; 3],
        };
        assert!(matches!(project(&bad, &c), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn spread_projection_is_simple() {
        // X bucket i sends its three points to Y buckets 0, 1, 2 in turn.
        let c = cfg(1, 3, 0);
        let mut next = [0u32, 5, 10];
        let partner = (0..15)
            .map(|i| {
                let y = i % 3;
                let j = next[y];
                next[y] += 1;
                j
            })
            .collect();
        let p = Pairing { partner };
        assert!(p.is_bijection());
        let m = project(&p, &c).unwrap();
        assert!(m.is_simple());
        assert!(pairing_is_simple(&p, 3));
        let g = m.to_graph().unwrap();
        assert!(g.validate_biregular(3).unwrap());
        assert_eq!((g.n(), g.m()), (8, 15));
    }

    #[test]
    fn fast_simplicity_matches_projection() {
        let c = cfg(2, 3, 5);
        let mut rng = c.rng();
        for _ in 0..500 {
            let p = generate_pairing(&c, &mut rng);
            let m = project(&p, &c).unwrap();
            assert_eq!(pairing_is_simple(&p, 3), m.is_simple());
            let (dx, dy) = m.degrees();
            assert!(dx.iter().all(|&x| x == 3));
            assert!(dy.iter().all(|&y| y == 5));
        }
    }

    #[test]
    fn sample_simple_sizes() {
        let c = cfg(10, 3, 7);
        let g = sample_simple(&c, &mut c.rng()).unwrap();
        let sides = g.sides().unwrap();
        assert_eq!(sides.iter().filter(|&&s| s == Side::X).count(), 50);
        assert_eq!(sides.iter().filter(|&&s| s == Side::Y).count(), 30);
        assert!(g.validate_biregular(3).unwrap());
    }

    #[test]
    fn rejection_cap() {
        let c = cfg(20, 5, 1).with_max_tries(1).unwrap();
        assert_eq!(
            sample_simple(&c, &mut c.rng()),
            Err(Error::RejectionCapExceeded { tries: 1 })
        );
    }

    #[test]
    fn lambda_and_prediction() {
        assert_eq!(simplicity_lambda(3), 4.0);
        let s = simplicity_rate(&cfg(5, 4, 0), 10).unwrap();
        assert_eq!(s.lambda, 7.5);
        assert!((s.predicted - (-7.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn simplicity_rate_is_deterministic() {
        let c = cfg(20, 3, 99);
        let a = simplicity_rate(&c, 3000).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simplicity_rate(&c, 3000).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn multigraph_mode_degrees() {
        let c = cfg(4, 5, 3);
        let m = sample_multigraph(&c, &mut c.rng()).unwrap();
        let (dx, dy) = m.degrees();
        assert!(dx.iter().all(|&x| x == 5) && dy.iter().all(|&y| y == 7));
        assert_eq!(m.total_multiplicity(), c.points());
    }
}
