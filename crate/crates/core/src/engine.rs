//! The k-firefighter process: ignite one vertex, then each round protect up
//! to `k` vertices that are neither burning nor protected, and let the fire
//! spread to every unprotected neighbour of the burning set. The process
//! stops once the fire has no unprotected neighbour left.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct GameState<'g> {
    graph: &'g Graph,
    k: usize,
    burning: FixedBitSet,
    protected: FixedBitSet,
    round: usize,
}

impl<'g> GameState<'g> {
    pub fn ignite(graph: &'g Graph, v: usize, k: usize) -> Result<Self> {
        if v >= graph.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: graph.n(),
            });
        }
        if k == 0 {
            return Err(Error::NoFirefighters);
        }
        let mut burning = FixedBitSet::with_capacity(graph.n());
        burning.insert(v);
        Ok(GameState {
            graph,
            k,
            burning,
            protected: FixedBitSet::with_capacity(graph.n()),
            round: 0,
        })
    }

    /// Builds a state from explicit sets. Used by solvers that resume from
    /// an arbitrary position.
    pub fn from_parts(
        graph: &'g Graph,
        k: usize,
        burning: FixedBitSet,
        protected: FixedBitSet,
        round: usize,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoFirefighters);
        }
        if burning.len() != graph.n() || protected.len() != graph.n() {
            return Err(Error::InvalidParameter(
                "vertex set width differs from n".into(),
            ));
        }
        if !burning.is_disjoint(&protected) {
            return Err(Error::IllegalProtection(
                "burning and protected sets overlap".into(),
            ));
        }
        Ok(GameState {
            graph,
            k,
            burning,
            protected,
            round,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn burning(&self) -> &FixedBitSet {
        &self.burning
    }

    pub fn protected(&self) -> &FixedBitSet {
        &self.protected
    }

    pub fn is_burning(&self, v: usize) -> bool {
        self.burning.contains(v)
    }

    pub fn is_protected(&self, v: usize) -> bool {
        self.protected.contains(v)
    }

    pub fn burned(&self) -> usize {
        self.burning.count_ones(..)
    }

    pub fn saved(&self) -> usize {
        self.graph.n() - self.burned()
    }

    /// Unburned, unprotected neighbours of the fire, ascending.
    pub fn frontier(&self) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.graph.n());
        for b in self.burning.ones() {
            for &w in self.graph.neighbors(b) {
                if !self.burning.contains(w) && !self.protected.contains(w) {
                    seen.insert(w);
                }
            }
        }
        seen.ones().collect()
    }

    pub fn is_terminal(&self) -> bool {
        self.burning.ones().all(|b| {
            self.graph
                .neighbors(b)
                .iter()
                .all(|&w| self.burning.contains(w) || self.protected.contains(w))
        })
    }

    /// Protects up to `k` vertices. Fewer than `k` (including none) is legal.
    pub fn protect(&mut self, set: &[usize]) -> Result<()> {
        if set.len() > self.k {
            return Err(Error::IllegalProtection(format!(
                "{} vertices requested but k = {}",
                set.len(),
                self.k
            )));
        }
        for (i, &v) in set.iter().enumerate() {
            if v >= self.graph.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.graph.n(),
                });
            }
            if self.burning.contains(v) {
                return Err(Error::IllegalProtection(format!("vertex {v} is burning")));
            }
            if self.protected.contains(v) || set[..i].contains(&v) {
                return Err(Error::IllegalProtection(format!(
                    "vertex {v} is already protected"
                )));
            }
        }
        for &v in set {
            self.protected.insert(v);
        }
        Ok(())
    }

    /// Spreads the fire one step and advances the round. Returns the number
    /// of newly burning vertices.
    pub fn spread(&mut self) -> usize {
        let new = self.frontier();
        for &v in &new {
            self.burning.insert(v);
        }
        self.round += 1;
        new.len()
    }
}

/// Per-round protection policy.
pub trait Strategy: Sync {
    fn choose(&self, state: &GameState<'_>) -> Vec<usize>;
}

impl<F> Strategy for F
where
    F: Fn(&GameState<'_>) -> Vec<usize> + Sync,
{
    fn choose(&self, state: &GameState<'_>) -> Vec<usize> {
        self(state)
    }
}

/// Protects nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoProtection;

impl Strategy for NoProtection {
    fn choose(&self, _: &GameState<'_>) -> Vec<usize> {
        Vec::new()
    }
}

/// Replays a fixed schedule; rounds past its end protect nothing.
#[derive(Debug, Clone, Default)]
pub struct ScheduleStrategy {
    pub schedule: Vec<Vec<usize>>,
}

impl Strategy for ScheduleStrategy {
    fn choose(&self, state: &GameState<'_>) -> Vec<usize> {
        self.schedule
            .get(state.round())
            .cloned()
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayOutcome {
    pub v: usize,
    pub k: usize,
    pub rounds: usize,
    pub saved: usize,
    pub burned: usize,
    pub schedule: Vec<Vec<usize>>,
    /// Newly burning vertices per time step, starting with the ignition (1).
    pub new_fire: Vec<usize>,
}

/// Runs the process from `v` until it is terminal.
pub fn play<S: Strategy + ?Sized>(
    g: &Graph,
    v: usize,
    k: usize,
    strategy: &S,
) -> Result<PlayOutcome> {
    let state = GameState::ignite(g, v, k)?;
    play_from(state, v, strategy)
}

pub(crate) fn play_from<S: Strategy + ?Sized>(
    mut state: GameState<'_>,
    v: usize,
    strategy: &S,
) -> Result<PlayOutcome> {
    let mut schedule = Vec::new();
    let mut new_fire = vec![state.burned()];
    while !state.is_terminal() {
        let set = strategy.choose(&state);
        state.protect(&set)?;
        new_fire.push(state.spread());
        schedule.push(set);
    }
    Ok(PlayOutcome {
        v,
        k: state.k(),
        rounds: state.round(),
        saved: state.saved(),
        burned: state.burned(),
        schedule,
        new_fire,
    })
}

pub fn replay(g: &Graph, v: usize, k: usize, schedule: &[Vec<usize>]) -> Result<PlayOutcome> {
    play(
        g,
        v,
        k,
        &ScheduleStrategy {
            schedule: schedule.to_vec(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ignite_contract() {
        let g = Graph::path(4);
        let s = GameState::ignite(&g, 0, 1).unwrap();
        assert_eq!(s.burning().ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(s.round(), 0);
        assert_eq!(
            GameState::ignite(&g, 0, 0).unwrap_err(),
            Error::NoFirefighters
        );
        assert!(matches!(
            GameState::ignite(&g, 4, 1),
            Err(Error::VertexOutOfRange { .. })
        ));
        let lone = Graph::empty(3);
        assert!(GameState::ignite(&lone, 1, 1).unwrap().is_terminal());
    }

    #[test]
    fn protect_rules() {
        let g = Graph::path(5);
        let mut s = GameState::ignite(&g, 2, 1).unwrap();
        s.protect(&[]).unwrap();
        assert_eq!(s.protected().count_ones(..), 0);
        assert!(s.protect(&[2]).is_err());
        assert!(s.protect(&[1, 3]).is_err());
        s.protect(&[1]).unwrap();
        assert!(s.protect(&[1]).is_err());
        let mut s2 = GameState::ignite(&g, 2, 2).unwrap();
        assert!(s2.protect(&[1, 1]).is_err());
    }

    #[test]
    fn spread_examples() {
        let p3 = Graph::path(3);
        let mut s = GameState::ignite(&p3, 1, 1).unwrap();
        s.protect(&[0]).unwrap();
        assert_eq!(s.spread(), 1);
        assert_eq!(s.burning().ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(s.round(), 1);
        assert!(s.is_terminal());

        let star = Graph::star(4);
        let mut s = GameState::ignite(&star, 0, 1).unwrap();
        assert_eq!(s.spread(), 4);
        assert!(s.is_terminal());
    }

    #[test]
    fn terminal_examples() {
        let k2 = Graph::path(2);
        let mut s = GameState::ignite(&k2, 0, 1).unwrap();
        assert!(!s.is_terminal());
        s.protect(&[1]).unwrap();
        assert!(s.is_terminal());
        let mut s = GameState::ignite(&k2, 0, 1).unwrap();
        s.spread();
        assert!(s.is_terminal());
    }

    #[test]
    fn paths_and_cliques() {
        let p5 = Graph::path(5);
        let out = play(&p5, 0, 1, &|_: &GameState<'_>| vec![1]).unwrap();
        assert_eq!((out.saved, out.burned), (4, 1));

        let protect_left = |s: &GameState<'_>| s.frontier().into_iter().take(1).collect::<Vec<_>>();
        let out = play(&p5, 2, 1, &protect_left).unwrap();
        assert_eq!((out.saved, out.burned), (3, 2));

        let k4 = Graph::complete(4);
        for v in 0..4 {
            for strat in [&protect_left as &dyn Strategy, &NoProtection] {
                let out = play(&k4, v, 1, strat).unwrap();
                assert!(out.saved <= 1);
            }
            assert_eq!(play(&k4, v, 1, &protect_left).unwrap().saved, 1);
        }
    }

    #[test]
    fn illegal_strategy_is_reported() {
        let g = Graph::path(3);
        let bad = |_: &GameState<'_>| vec![0];
        assert!(play(&g, 0, 1, &bad).is_err());
    }

    #[test]
    fn replay_reproduces() {
        let g = Graph::cycle(6);
        let out = play(&g, 0, 1, &|s: &GameState<'_>| {
            s.frontier().into_iter().take(1).collect::<Vec<_>>()
        })
        .unwrap();
        let again = replay(&g, 0, 1, &out.schedule).unwrap();
        assert_eq!(out, again);
        assert_eq!(out.new_fire.iter().sum::<usize>(), out.burned);
    }
}
