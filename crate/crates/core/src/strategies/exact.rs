//! Exact `sn_k(G, v)` by depth-first branch and bound.
//!
//! The search minimises the final number of burning vertices. Three
//! reductions keep it small while staying exact:
//!
//! * Only vertices the fire can still reach (through unburned, unprotected
//!   vertices) are worth protecting. Call this set the *region*.
//! * Protecting more never hurts, so when the region has more than `k`
//!   vertices only `k`-subsets of it are tried. When the frontier has at
//!   most `k` vertices, protecting all of it ends the game optimally.
//! * States with equal burning set and region have equal futures; they
//!   share one memo entry.
//!
//! `|burning| + |frontier| - k` is a lower bound on the final burn count and
//! prunes any node that cannot beat the incumbent. Candidate subsets are
//! tried frontier-first, ordered by distance from the fire, so good
//! incumbents appear early.
//!
//! When the node budget runs out the remaining subtrees are finished with
//! greedy play. The result is then still a witnessed lower bound on
//! `sn_k`, reported with `exact = false`.

use std::collections::HashMap;
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::Serialize;

use crate::engine::{GameState, Strategy};
use crate::error::Result;
use crate::graph::Graph;

use super::greedy_choice;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub node_budget: u64,
    pub memo: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            memo: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub v: usize,
    pub k: usize,
    pub sn: usize,
    pub exact: bool,
    /// Search nodes visited, pruned ones included.
    pub nodes_expanded: u64,
    pub schedule: Vec<Vec<usize>>,
}

pub fn exact_sn(g: &Graph, v: usize, k: usize, node_budget: u64) -> Result<SolveResult> {
    solve(
        g,
        v,
        k,
        SolverOptions {
            node_budget,
            ..Default::default()
        },
    )
}

pub fn solve(g: &Graph, v: usize, k: usize, opts: SolverOptions) -> Result<SolveResult> {
    let state = GameState::ignite(g, v, k)?;
    let mut res = solve_from(&state, opts)?;
    res.v = v;
    Ok(res)
}

/// Solves from an arbitrary position. `sn` counts all unburned vertices at
/// the end, and the schedule starts at the current round. `v` is reported
/// as the lowest burning vertex.
pub fn solve_from(state: &GameState<'_>, opts: SolverOptions) -> Result<SolveResult> {
    let g = state.graph();
    let mut solver = Solver {
        g,
        k: state.k(),
        opts,
        memo: HashMap::new(),
        nodes: 0,
        aborted: false,
    };
    let (burned, plan) = solver.search(
        state.burning().clone(),
        state.protected().clone(),
        g.n() + 1,
    );
    let mut schedule = Vec::new();
    let mut cur = plan;
    while let Some(node) = cur {
        schedule.push(node.action.clone());
        cur = node.next.clone();
    }
    Ok(SolveResult {
        v: state.burning().minimum().unwrap_or(0),
        k: state.k(),
        sn: g.n() - burned,
        exact: !solver.aborted,
        nodes_expanded: solver.nodes,
        schedule,
    })
}

type Plan = Option<Rc<PlanNode>>;

struct PlanNode {
    action: Vec<usize>,
    next: Plan,
}

fn cons(action: Vec<usize>, next: Plan) -> Plan {
    Some(Rc::new(PlanNode { action, next }))
}

enum Entry {
    /// Optimal final burn count with a witness.
    Exact(usize, Plan),
    /// The optimum is at least this.
    AtLeast(usize),
}

struct Solver<'g> {
    g: &'g Graph,
    k: usize,
    opts: SolverOptions,
    memo: HashMap<(FixedBitSet, FixedBitSet), Entry>,
    nodes: u64,
    aborted: bool,
}

impl Solver<'_> {
    /// Returns the final burn count. A value below `upper` comes with a
    /// witness plan; a value at or above `upper` is only a lower bound.
    fn search(
        &mut self,
        burning: FixedBitSet,
        protected: FixedBitSet,
        upper: usize,
    ) -> (usize, Plan) {
        let g = self.g;
        self.nodes += 1;
        let burned = burning.count_ones(..);

        let mut frontier = FixedBitSet::with_capacity(g.n());
        for b in burning.ones() {
            for &w in g.neighbors(b) {
                if !burning.contains(w) && !protected.contains(w) {
                    frontier.insert(w);
                }
            }
        }
        let front_len = frontier.count_ones(..);
        if front_len == 0 {
            return (burned, None);
        }
        if front_len <= self.k {
            return (burned, cons(frontier.ones().collect(), None));
        }
        let lower = burned + front_len - self.k;
        if lower >= upper {
            return (lower, None);
        }

        // Region: unburned, unprotected vertices reachable from the fire,
        // with BFS distance from the burning set.
        let mut region = frontier.clone();
        let mut layer: Vec<usize> = frontier.ones().collect();
        let mut order: Vec<(usize, usize)> = layer.iter().map(|&v| (1, v)).collect();
        let mut dist = 1;
        while !layer.is_empty() {
            dist += 1;
            let mut next = Vec::new();
            for &u in &layer {
                for &w in g.neighbors(u) {
                    if !burning.contains(w) && !protected.contains(w) && !region.put(w) {
                        next.push(w);
                        order.push((dist, w));
                    }
                }
            }
            layer = next;
        }

        let key = (burning.clone(), region.clone());
        if self.opts.memo {
            match self.memo.get(&key) {
                Some(Entry::Exact(val, plan)) => return (*val, plan.clone()),
                Some(Entry::AtLeast(lb)) if *lb >= upper => return (*lb, None),
                _ => {}
            }
        }

        if self.aborted {
            return self.rollout(burning, protected);
        }
        if self.nodes > self.opts.node_budget {
            self.aborted = true;
            return self.rollout(burning, protected);
        }

        order.sort_by_key(|&(d, v)| (d, std::cmp::Reverse(g.degree(v)), v));
        let candidates: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();

        let mut best = usize::MAX;
        let mut best_plan: Plan = None;
        for combo in candidates.into_iter().combinations(self.k) {
            let mut child_protected = protected.clone();
            let mut child_burning = burning.clone();
            for &v in &combo {
                child_protected.insert(v);
            }
            for v in frontier.ones() {
                if !child_protected.contains(v) {
                    child_burning.insert(v);
                }
            }
            let child_upper = upper.min(best);
            let (val, plan) = self.search(child_burning, child_protected, child_upper);
            if val < best {
                best = val;
                best_plan = if val < child_upper {
                    cons(combo, plan)
                } else {
                    None
                };
            }
            // After the budget runs out each open node keeps its first
            // rollout; the result stays witnessed but is no longer optimal.
            if best <= lower || self.aborted {
                break;
            }
        }

        if self.opts.memo && !self.aborted {
            let entry = if best < upper {
                Entry::Exact(best, best_plan.clone())
            } else {
                Entry::AtLeast(best)
            };
            self.memo.insert(key, entry);
        }
        (best, best_plan)
    }

    fn rollout(&self, burning: FixedBitSet, protected: FixedBitSet) -> (usize, Plan) {
        let mut state = GameState::from_parts(self.g, self.k, burning, protected, 0)
            .expect("search states are consistent");
        let mut actions = Vec::new();
        while !state.is_terminal() {
            let set = greedy_choice(&state);
            state.protect(&set).expect("greedy choices are legal");
            state.spread();
            actions.push(set);
        }
        let plan = actions
            .into_iter()
            .rev()
            .fold(None, |next, a| cons(a, next));
        (state.burned(), plan)
    }
}

/// Plays the first move of an exact solve from the current position.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactStrategy {
    pub opts: SolverOptions,
}

impl Strategy for ExactStrategy {
    fn choose(&self, state: &GameState<'_>) -> Vec<usize> {
        solve_from(state, self.opts)
            .ok()
            .and_then(|r| r.schedule.into_iter().next())
            .unwrap_or_default()
    }
}
