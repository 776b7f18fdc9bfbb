//! Improvement-path dynamics: the full improvement graph over joint
//! strategies, the finite improvement property and weak acyclicity, and
//! scheduler-driven best-response runs.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::graph;
use crate::model::{cycle_order, JointStrategy, ModelError, NodeId, SocialNetwork, Strategy};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("state space has {states} joint strategies, exceeding the guard of {guard}")]
    GuardExceeded { states: u128, guard: u64 },
    #[error("underlying graph is not a simple cycle")]
    NotASimpleCycle,
    #[error("invalid scheduler: {0}")]
    InvalidScheduler(String),
    #[error("step budget must be at least 1")]
    InvalidStepBudget,
}

/// The strategies of `id` that strictly improve on its current payoff.
pub fn better_responses(
    net: &SocialNetwork,
    s: &JointStrategy,
    id: &NodeId,
) -> Result<BTreeSet<Strategy>, DynamicsError> {
    let i = net.node_index(id)?;
    let locals = net.to_locals(s)?;
    let current = net.payoff_local(&locals, i);
    Ok((0..net.num_strategies(i) as u16)
        .filter(|&alt| alt != locals[i] && net.payoff_local_with(&locals, i, alt) > current)
        .map(|alt| net.local_to_strategy(i, alt))
        .collect())
}

// ---------------------------------------------------------------------------
// Improvement graph
// ---------------------------------------------------------------------------

/// The directed graph over all joint strategies whose edges are the strict
/// single-player improvements. Sinks are exactly the Nash equilibria.
///
/// States are numbered in lexicographic profile order; edges are stored in
/// compressed form, so the structure stays manageable up to the guard.
pub struct ImprovementGraph<'a> {
    net: &'a SocialNetwork,
    strides: Vec<u64>,
    radices: Vec<u16>,
    num_states: u64,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    movers: Vec<u16>,
}

/// Builds the full improvement graph. The state count must not exceed
/// `guard` (and must fit in 32 bits).
pub fn build_improvement_graph(
    net: &SocialNetwork,
    guard: u64,
) -> Result<ImprovementGraph<'_>, DynamicsError> {
    let states = net.state_count();
    let effective = guard.min(u32::MAX as u64);
    if states > effective as u128 {
        return Err(DynamicsError::GuardExceeded {
            states,
            guard: effective,
        });
    }
    let n = net.node_count();
    let radices: Vec<u16> = (0..n).map(|i| net.num_strategies(i) as u16).collect();
    let mut strides = vec![1u64; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * radices[i + 1] as u64;
    }
    let num_states = states as u64;

    let mut offsets = Vec::with_capacity(num_states as usize + 1);
    let mut targets = Vec::new();
    let mut movers = Vec::new();
    offsets.push(0);

    let mut locals = vec![0u16; n];
    for state in 0..num_states {
        for i in 0..n {
            let current = net.payoff_local(&locals, i);
            for alt in 0..radices[i] {
                if alt == locals[i] {
                    continue;
                }
                if net.payoff_local_with(&locals, i, alt) > current {
                    let to = state as i64 + (alt as i64 - locals[i] as i64) * strides[i] as i64;
                    targets.push(to as u32);
                    movers.push(i as u16);
                }
            }
        }
        offsets.push(targets.len());
        // Odometer increment in lexicographic order.
        for i in (0..n).rev() {
            locals[i] += 1;
            if locals[i] < radices[i] {
                break;
            }
            locals[i] = 0;
        }
    }

    Ok(ImprovementGraph {
        net,
        strides,
        radices,
        num_states,
        offsets,
        targets,
        movers,
    })
}

impl<'a> ImprovementGraph<'a> {
    pub fn num_states(&self) -> u64 {
        self.num_states
    }

    pub fn num_transitions(&self) -> usize {
        self.targets.len()
    }

    /// Decodes a state index into its profile.
    pub fn state_profile(&self, state: u32) -> JointStrategy {
        let locals = self.decode(state);
        self.net.profile_from_locals(&locals)
    }

    fn decode(&self, state: u32) -> Vec<u16> {
        let mut rest = state as u64;
        self.strides
            .iter()
            .zip(&self.radices)
            .map(|(&stride, &radix)| {
                let digit = (rest / stride) % radix as u64;
                rest %= stride;
                digit as u16
            })
            .collect()
    }

    /// Encodes a profile into its state index.
    pub fn state_index(&self, s: &JointStrategy) -> Result<u32, DynamicsError> {
        let locals = self.net.to_locals(s)?;
        Ok(locals
            .iter()
            .zip(&self.strides)
            .map(|(&l, &stride)| l as u64 * stride)
            .sum::<u64>() as u32)
    }

    /// All transitions as (from, mover, to).
    pub fn transitions(&self) -> impl Iterator<Item = (u32, &NodeId, u32)> + '_ {
        (0..self.num_states as usize).flat_map(move |from| {
            (self.offsets[from]..self.offsets[from + 1]).map(move |e| {
                (
                    from as u32,
                    self.net.node_id(self.movers[e] as usize),
                    self.targets[e],
                )
            })
        })
    }

    /// Whether `mover` has a strict improvement edge from one profile to
    /// another.
    pub fn has_transition(
        &self,
        from: &JointStrategy,
        mover: &NodeId,
        to: &JointStrategy,
    ) -> Result<bool, DynamicsError> {
        let f = self.state_index(from)? as usize;
        let t = self.state_index(to)?;
        let m = self.net.node_index(mover)? as u16;
        Ok((self.offsets[f]..self.offsets[f + 1])
            .any(|e| self.targets[e] == t && self.movers[e] == m))
    }

    /// States with no outgoing improvement edge; exactly the Nash
    /// equilibria.
    pub fn sinks(&self) -> Vec<u32> {
        (0..self.num_states as usize)
            .filter(|&s| self.offsets[s] == self.offsets[s + 1])
            .map(|s| s as u32)
            .collect()
    }

    /// True iff no improvement cycle exists; for a finite game this is the
    /// finite improvement property.
    pub fn is_acyclic(&self) -> bool {
        graph::csr_is_acyclic(self.num_states as usize, &self.offsets, &self.targets)
    }

    /// True iff from every state some sink is reachable.
    pub fn is_weakly_acyclic(&self) -> bool {
        let n = self.num_states as usize;
        // Reverse CSR.
        let mut in_deg = vec![0usize; n];
        for &t in &self.targets {
            in_deg[t as usize] += 1;
        }
        let mut roffsets = vec![0usize; n + 1];
        for v in 0..n {
            roffsets[v + 1] = roffsets[v] + in_deg[v];
        }
        let mut rtargets = vec![0u32; self.targets.len()];
        let mut cursor = roffsets.clone();
        for from in 0..n {
            for e in self.offsets[from]..self.offsets[from + 1] {
                let t = self.targets[e] as usize;
                rtargets[cursor[t]] = from as u32;
                cursor[t] += 1;
            }
        }
        // Multi-source BFS from the sinks over reversed edges.
        let mut seen = vec![false; n];
        let mut queue: Vec<usize> = self.sinks().iter().map(|&s| s as usize).collect();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(v) = queue.pop() {
            for &p in &rtargets[roffsets[v]..roffsets[v + 1]] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    queue.push(p as usize);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// DOT rendering: states labelled `n1=t1,n2=_`, edges labelled with the
    /// mover, sinks double-circled.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph improvement {\n");
        for s in 0..self.num_states as u32 {
            let profile = self.state_profile(s);
            out.push_str(&format!(
                "  s{} [label=\"{}\"];\n",
                s,
                profile.label(self.net)
            ));
        }
        for s in self.sinks() {
            out.push_str(&format!("  s{s} [peripheries=2];\n"));
        }
        for (from, mover, to) in self.transitions() {
            out.push_str(&format!("  s{from} -> s{to} [label=\"{mover}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Finite improvement property: every improvement path is finite, i.e. the
/// improvement graph is acyclic.
pub fn has_fip(net: &SocialNetwork, guard: u64) -> Result<bool, DynamicsError> {
    Ok(build_improvement_graph(net, guard)?.is_acyclic())
}

/// Weak acyclicity: from every joint strategy some equilibrium is reachable
/// by an improvement path.
pub fn is_weakly_acyclic(net: &SocialNetwork, guard: u64) -> Result<bool, DynamicsError> {
    Ok(build_improvement_graph(net, guard)?.is_weakly_acyclic())
}

// ---------------------------------------------------------------------------
// Schedulers
// ---------------------------------------------------------------------------

/// Deterministic rules for picking which non-best-responding player moves
/// next, and to what.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchedulerSpec {
    /// Picks the canonically smallest node not playing a best response; the
    /// mover switches to its best response (ties: product order, Null
    /// last). A pure function of the current state.
    SmallestIndexBestResponse,
    /// Picks a pseudo-random non-best-responding player and one of its
    /// strictly better responses, derived by hashing the state with the
    /// seed; same state, same selection.
    RandomBetterResponse { seed: u64 },
    /// Rotates through the given node order, skipping players already
    /// best-responding; the scheduled player switches to its best response.
    /// The rotation cursor advances as the run proceeds, which is what
    /// allows replaying fixed move orders.
    FixedOrderBestResponse { order: Vec<NodeId> },
}

/// One deviation in a scheduler run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// The state the move was made from.
    pub state: JointStrategy,
    pub mover: NodeId,
    pub old: Strategy,
    pub new: Strategy,
    /// Strictly positive by construction.
    pub payoff_delta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    ReachedNE(JointStrategy),
    StepBudgetExhausted,
}

/// The ordered record of a scheduler-driven run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsTrace {
    pub steps: Vec<TraceStep>,
    pub outcome: TraceOutcome,
}

impl DynamicsTrace {
    pub fn reached_ne(&self) -> bool {
        matches!(self.outcome, TraceOutcome::ReachedNE(_))
    }

    /// The state after the last recorded step (the equilibrium when one was
    /// reached). `None` only for a budget-exhausted trace with no steps,
    /// which cannot occur for budgets ≥ 1.
    pub fn final_state(&self, net: &SocialNetwork) -> Option<JointStrategy> {
        match &self.outcome {
            TraceOutcome::ReachedNE(s) => Some(s.clone()),
            TraceOutcome::StepBudgetExhausted => self.steps.last().map(|step| {
                let i = net
                    .node_index(&step.mover)
                    .expect("trace mover belongs to the network");
                step.state.with_strategy(i, step.new.clone())
            }),
        }
    }

    /// Line-oriented rendering, one step per line:
    /// `step k: node=<id> <old> -> <new> delta=<p/q>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, step) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: node={} {} -> {} delta={}\n",
                k + 1,
                step.mover,
                step.old,
                step.new,
                step.payoff_delta
            ));
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn state_hash(seed: u64, locals: &[u16]) -> u64 {
    let mut h = splitmix64(seed);
    for &l in locals {
        h = splitmix64(h ^ (l as u64 + 1));
    }
    h
}

/// Picks the first node in `priority` order that is not best-responding,
/// together with its best response.
fn select_smallest(
    net: &SocialNetwork,
    locals: &[u16],
    priority: &[usize],
) -> Option<(usize, u16)> {
    for &i in priority {
        if !net.is_best_response_local(locals, i) {
            let (best, _) = net.best_response_local(locals, i);
            return Some((i, best));
        }
    }
    None
}

enum SchedulerState {
    Priority(Vec<usize>),
    Random { seed: u64 },
    RoundRobin { order: Vec<usize>, cursor: usize },
}

fn scheduler_state(
    net: &SocialNetwork,
    spec: &SchedulerSpec,
) -> Result<SchedulerState, DynamicsError> {
    Ok(match spec {
        SchedulerSpec::SmallestIndexBestResponse => {
            SchedulerState::Priority((0..net.node_count()).collect())
        }
        SchedulerSpec::RandomBetterResponse { seed } => SchedulerState::Random { seed: *seed },
        SchedulerSpec::FixedOrderBestResponse { order } => {
            if order.len() != net.node_count() {
                return Err(DynamicsError::InvalidScheduler(format!(
                    "order names {} nodes, network has {}",
                    order.len(),
                    net.node_count()
                )));
            }
            let mut indices = Vec::with_capacity(order.len());
            for id in order {
                indices.push(net.node_index(id)?);
            }
            let mut seen = vec![false; net.node_count()];
            for &i in &indices {
                if seen[i] {
                    return Err(DynamicsError::InvalidScheduler(format!(
                        "node {} appears twice in the order",
                        net.node_id(i)
                    )));
                }
                seen[i] = true;
            }
            SchedulerState::RoundRobin {
                order: indices,
                cursor: 0,
            }
        }
    })
}

impl SchedulerState {
    fn select(&mut self, net: &SocialNetwork, locals: &[u16]) -> Option<(usize, u16)> {
        match self {
            SchedulerState::Priority(priority) => select_smallest(net, locals, priority),
            SchedulerState::Random { seed } => {
                let candidates: Vec<usize> = (0..net.node_count())
                    .filter(|&i| !net.is_best_response_local(locals, i))
                    .collect();
                if candidates.is_empty() {
                    return None;
                }
                let h = state_hash(*seed, locals);
                let i = candidates[(h % candidates.len() as u64) as usize];
                let current = net.payoff_local(locals, i);
                let betters: Vec<u16> = (0..net.num_strategies(i) as u16)
                    .filter(|&alt| {
                        alt != locals[i] && net.payoff_local_with(locals, i, alt) > current
                    })
                    .collect();
                let pick = betters[(splitmix64(h) % betters.len() as u64) as usize];
                Some((i, pick))
            }
            SchedulerState::RoundRobin { order, cursor } => {
                let n = order.len();
                for k in 0..n {
                    let pos = (*cursor + k) % n;
                    let i = order[pos];
                    if !net.is_best_response_local(locals, i) {
                        let (best, _) = net.best_response_local(locals, i);
                        *cursor = (pos + 1) % n;
                        return Some((i, best));
                    }
                }
                None
            }
        }
    }
}

/// Repeatedly applies the scheduler until an equilibrium is reached or the
/// step budget runs out. Every recorded step strictly improves the mover's
/// payoff.
pub fn run_scheduler(
    net: &SocialNetwork,
    start: &JointStrategy,
    spec: &SchedulerSpec,
    max_steps: usize,
) -> Result<DynamicsTrace, DynamicsError> {
    if max_steps == 0 {
        return Err(DynamicsError::InvalidStepBudget);
    }
    let mut state = scheduler_state(net, spec)?;
    let mut locals = net.to_locals(start)?;
    let mut steps = Vec::new();
    run_locals(net, &mut locals, &mut state, max_steps, Some(&mut steps));
    let outcome = if select_is_none(net, &locals, &mut state) {
        TraceOutcome::ReachedNE(net.profile_from_locals(&locals))
    } else {
        TraceOutcome::StepBudgetExhausted
    };
    Ok(DynamicsTrace { steps, outcome })
}

fn select_is_none(net: &SocialNetwork, locals: &[u16], _state: &mut SchedulerState) -> bool {
    // Reaching an equilibrium is scheduler-independent: nobody can improve.
    (0..net.node_count()).all(|i| net.is_best_response_local(locals, i))
}

fn run_locals(
    net: &SocialNetwork,
    locals: &mut [u16],
    state: &mut SchedulerState,
    max_steps: usize,
    mut steps: Option<&mut Vec<TraceStep>>,
) -> usize {
    let mut taken = 0;
    while taken < max_steps {
        let Some((i, new_local)) = state.select(net, locals) else {
            break;
        };
        if let Some(steps) = steps.as_deref_mut() {
            let before = net.payoff_local(locals, i);
            let after = net.payoff_local_with(locals, i, new_local);
            debug_assert!(after > before);
            steps.push(TraceStep {
                state: net.profile_from_locals(locals),
                mover: net.node_id(i).clone(),
                old: net.local_to_strategy(i, locals[i]),
                new: net.local_to_strategy(i, new_local),
                payoff_delta: after - before,
            });
        }
        locals[i] = new_local;
        taken += 1;
    }
    taken
}

/// A seeded uniform-random profile (independent choice per node), for
/// reproducible dynamics starts.
pub fn random_profile(net: &SocialNetwork, seed: u64) -> JointStrategy {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let locals: Vec<u16> = (0..net.node_count())
        .map(|i| (rng.next_u32() % net.num_strategies(i) as u32) as u16)
        .collect();
    net.profile_from_locals(&locals)
}

/// Checks the uniform finite improvement property on a simple cycle by
/// running the smallest-index best-response scheduler, indexed along the
/// cycle orientation, from the all-null start, every legal uniform product
/// start, and `trials` pseudo-random starts. True iff every run reaches an
/// equilibrium within 3·n·max|S_i| steps.
pub fn uniform_fip_cycle_check(
    net: &SocialNetwork,
    trials: usize,
    seed: u64,
) -> Result<bool, DynamicsError> {
    let order = cycle_order(net).ok_or(DynamicsError::NotASimpleCycle)?;
    let n = net.node_count();
    let max_strategies = (0..n).map(|i| net.num_strategies(i)).max().unwrap_or(2);
    let bound = 3 * n * max_strategies;

    let mut starts: Vec<Vec<u16>> = vec![vec![0u16; n]];
    for p in 0..net.products().len() {
        let product = net.product_id(p).clone();
        let locals: Option<Vec<u16>> = (0..n)
            .map(|i| net.strategy_to_local(i, &Strategy::Product(product.clone())))
            .collect();
        if let Some(locals) = locals {
            starts.push(locals);
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        starts.push(
            (0..n)
                .map(|i| (rng.next_u32() % net.num_strategies(i) as u32) as u16)
                .collect(),
        );
    }

    for start in starts {
        let mut locals = start;
        let mut state = SchedulerState::Priority(order.clone());
        run_locals(net, &mut locals, &mut state, bound, None);
        let at_ne = (0..n).all(|i| net.is_best_response_local(&locals, i));
        if !at_ne {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{enumerate_ne, is_nash};
    use crate::rational::ratio;

    /// The 3-cycle 1 -> 2 -> 3 -> 1 with two products everywhere, weight w
    /// and threshold θ; each node profits from copying its predecessor.
    fn two_product_triangle() -> SocialNetwork {
        let mut b = SocialNetwork::builder();
        for id in ["1", "2", "3"] {
            b = b
                .node(id, ["t1", "t2"])
                .threshold(id, "t1", ratio(1, 4))
                .threshold(id, "t2", ratio(1, 4));
        }
        b.edge("1", "2", ratio(1, 2))
            .edge("2", "3", ratio(1, 2))
            .edge("3", "1", ratio(1, 2))
            .build()
            .unwrap()
    }

    fn profile(net: &SocialNetwork, strategies: [&str; 3]) -> JointStrategy {
        let mut s = JointStrategy::all_null(net);
        for (i, name) in strategies.iter().enumerate() {
            if *name != "_" {
                s = s.with_strategy(i, Strategy::Product((*name).into()));
            }
        }
        s
    }

    #[test]
    fn better_responses_examples() {
        let net = two_product_triangle();
        // Player 1 at (t2, t2, t1) earns -1/4, so both copying its
        // predecessor and opting out strictly improve; copying is the best
        // response and the move the dynamics take.
        let s = profile(&net, ["t2", "t2", "t1"]);
        let br = better_responses(&net, &s, &"1".into()).unwrap();
        assert_eq!(
            br,
            BTreeSet::from([Strategy::Null, Strategy::Product("t1".into())])
        );
        let best = crate::equilibria::best_responses(&net, &s, &"1".into()).unwrap();
        assert_eq!(best, BTreeSet::from([Strategy::Product("t1".into())]));

        // A player already at its unique best response has none.
        let all_t1 = profile(&net, ["t1", "t1", "t1"]);
        assert!(better_responses(&net, &all_t1, &"1".into())
            .unwrap()
            .is_empty());

        // A source playing Null improves with every product.
        let src = SocialNetwork::builder()
            .node("s", ["a", "b"])
            .threshold("s", "a", ratio(1, 2))
            .threshold("s", "b", ratio(1, 2))
            .build()
            .unwrap();
        let br = better_responses(&src, &JointStrategy::all_null(&src), &"s".into()).unwrap();
        assert_eq!(br.len(), 2);
    }

    #[test]
    fn improvement_graph_shape() {
        let net = two_product_triangle();
        let ig = build_improvement_graph(&net, 1_000).unwrap();
        assert_eq!(ig.num_states(), 27);

        // Sinks are exactly the equilibria.
        let sinks: Vec<JointStrategy> = ig
            .sinks()
            .into_iter()
            .map(|s| ig.state_profile(s))
            .collect();
        let nes = enumerate_ne(&net, 1_000).unwrap();
        assert_eq!(sinks, nes);
        assert_eq!(sinks.len(), 3);

        // Infinite path exists, yet a finite one from everywhere.
        assert!(!ig.is_acyclic());
        assert!(ig.is_weakly_acyclic());

        // State indices round-trip.
        for s in 0..27u32 {
            let p = ig.state_profile(s);
            assert_eq!(ig.state_index(&p).unwrap(), s);
        }
    }

    #[test]
    fn improvement_graph_contains_figure_cycle() {
        let net = two_product_triangle();
        let ig = build_improvement_graph(&net, 1_000).unwrap();
        let cycle = [
            (["t2", "t2", "t1"], "1", ["t1", "t2", "t1"]),
            (["t1", "t2", "t1"], "3", ["t1", "t2", "t2"]),
            (["t1", "t2", "t2"], "2", ["t1", "t1", "t2"]),
            (["t1", "t1", "t2"], "1", ["t2", "t1", "t2"]),
            (["t2", "t1", "t2"], "3", ["t2", "t1", "t1"]),
            (["t2", "t1", "t1"], "2", ["t2", "t2", "t1"]),
        ];
        for (from, mover, to) in cycle {
            assert!(ig
                .has_transition(&profile(&net, from), &mover.into(), &profile(&net, to))
                .unwrap());
        }
    }

    #[test]
    fn guard_enforced() {
        let net = two_product_triangle();
        assert!(matches!(
            build_improvement_graph(&net, 26),
            Err(DynamicsError::GuardExceeded { states: 27, .. })
        ));
    }

    #[test]
    fn two_player_games_have_fip() {
        let net = SocialNetwork::builder()
            .node("1", ["a", "b"])
            .node("2", ["a", "b"])
            .threshold("1", "a", ratio(1, 4))
            .threshold("1", "b", ratio(1, 2))
            .threshold("2", "a", ratio(1, 2))
            .threshold("2", "b", ratio(1, 4))
            .edge("1", "2", ratio(1, 2))
            .edge("2", "1", ratio(1, 2))
            .build()
            .unwrap();
        assert!(has_fip(&net, 1_000).unwrap());
        assert!(is_weakly_acyclic(&net, 1_000).unwrap());
    }

    #[test]
    fn scheduler_stops_at_equilibrium_start() {
        let net = two_product_triangle();
        let ne = profile(&net, ["t1", "t1", "t1"]);
        let trace =
            run_scheduler(&net, &ne, &SchedulerSpec::SmallestIndexBestResponse, 10).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.outcome, TraceOutcome::ReachedNE(ne));
    }

    #[test]
    fn smallest_index_reaches_equilibrium_in_two_steps() {
        let net = two_product_triangle();
        let start = profile(&net, ["t2", "t2", "t1"]);
        let trace =
            run_scheduler(&net, &start, &SchedulerSpec::SmallestIndexBestResponse, 30).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].mover, "1".into());
        assert_eq!(trace.steps[1].mover, "2".into());
        assert_eq!(
            trace.outcome,
            TraceOutcome::ReachedNE(profile(&net, ["t1", "t1", "t1"]))
        );
        for step in &trace.steps {
            assert!(step.payoff_delta.is_positive());
        }
        let rendered = trace.render();
        assert!(rendered.starts_with("step 1: node=1 t2 -> t1 delta=1/2\n"));
    }

    #[test]
    fn fixed_order_replays_infinite_path() {
        let net = two_product_triangle();
        let start = profile(&net, ["t2", "t2", "t1"]);
        let spec = SchedulerSpec::FixedOrderBestResponse {
            order: vec!["1".into(), "3".into(), "2".into()],
        };
        let trace = run_scheduler(&net, &start, &spec, 12).unwrap();
        assert_eq!(trace.outcome, TraceOutcome::StepBudgetExhausted);
        assert_eq!(trace.steps.len(), 12);
        // The six-state cycle repeats: state 7 equals state 1.
        assert_eq!(trace.steps[6].state, trace.steps[0].state);
        let movers: Vec<&str> = trace.steps[..6].iter().map(|s| s.mover.as_str()).collect();
        assert_eq!(movers, vec!["1", "3", "2", "1", "3", "2"]);
    }

    #[test]
    fn random_scheduler_is_deterministic_and_improving() {
        let net = two_product_triangle();
        let start = profile(&net, ["t2", "t2", "t1"]);
        let spec = SchedulerSpec::RandomBetterResponse { seed: 11 };
        let a = run_scheduler(&net, &start, &spec, 50).unwrap();
        let b = run_scheduler(&net, &start, &spec, 50).unwrap();
        assert_eq!(a, b);
        for step in &a.steps {
            assert!(step.payoff_delta.is_positive());
        }
        if let TraceOutcome::ReachedNE(s) = &a.outcome {
            assert!(is_nash(&net, s).unwrap().is_equilibrium());
        }
    }

    #[test]
    fn fixed_order_validation() {
        let net = two_product_triangle();
        let bad = SchedulerSpec::FixedOrderBestResponse {
            order: vec!["1".into(), "1".into(), "2".into()],
        };
        assert!(matches!(
            run_scheduler(&net, &JointStrategy::all_null(&net), &bad, 5),
            Err(DynamicsError::InvalidScheduler(_))
        ));
    }

    #[test]
    fn uniform_fip_on_cycles() {
        // Sustainable cycle: runs terminate, all-null start stays put.
        let net = two_product_triangle();
        assert!(uniform_fip_cycle_check(&net, 20, 7).unwrap());

        // Unsustainable cycle (threshold above weight): cascades to
        // all-null.
        let mut b = SocialNetwork::builder();
        for id in ["1", "2", "3"] {
            b = b
                .node(id, ["t1", "t2"])
                .threshold(id, "t1", ratio(3, 4))
                .threshold(id, "t2", ratio(3, 4));
        }
        let hard = b
            .edge("1", "2", ratio(1, 2))
            .edge("2", "3", ratio(1, 2))
            .edge("3", "1", ratio(1, 2))
            .build()
            .unwrap();
        assert!(uniform_fip_cycle_check(&hard, 20, 7).unwrap());
        let trace = run_scheduler(
            &hard,
            &JointStrategy::uniform(&hard, &"t1".into()).unwrap(),
            &SchedulerSpec::SmallestIndexBestResponse,
            100,
        )
        .unwrap();
        assert_eq!(
            trace.outcome,
            TraceOutcome::ReachedNE(JointStrategy::all_null(&hard))
        );

        // Non-cycles rejected.
        let chain = SocialNetwork::builder()
            .node("a", ["t"])
            .node("b", ["t"])
            .threshold("a", "t", ratio(1, 2))
            .threshold("b", "t", ratio(1, 2))
            .edge("a", "b", ratio(1, 2))
            .build()
            .unwrap();
        assert!(matches!(
            uniform_fip_cycle_check(&chain, 5, 0),
            Err(DynamicsError::NotASimpleCycle)
        ));
    }

    #[test]
    fn dot_export_contains_labels_and_sinks() {
        let net = SocialNetwork::builder()
            .node("a", ["t"])
            .node("b", ["t"])
            .threshold("a", "t", ratio(1, 2))
            .threshold("b", "t", ratio(1, 4))
            .edge("a", "b", ratio(1, 2))
            .build()
            .unwrap();
        let ig = build_improvement_graph(&net, 100).unwrap();
        let dot = ig.to_dot();
        assert!(dot.starts_with("digraph improvement {"));
        assert!(dot.contains("label=\"a=t,b=t\""));
        assert!(dot.contains("label=\"a=_,b=_\""));
        assert!(dot.contains("peripheries=2"));
        assert!(dot.contains("[label=\"a\"]"));
    }

    #[test]
    fn transitions_flip_one_coordinate_and_strictly_improve() {
        let net = two_product_triangle();
        let ig = build_improvement_graph(&net, 1_000).unwrap();
        let mut count = 0usize;
        for (from, mover, to) in ig.transitions() {
            let before = ig.state_profile(from);
            let after = ig.state_profile(to);
            let diffs: Vec<usize> = (0..net.node_count())
                .filter(|&i| before.strategy_at(i) != after.strategy_at(i))
                .collect();
            assert_eq!(diffs.len(), 1);
            assert_eq!(net.node_id(diffs[0]), mover);
            assert!(net.payoff(&after, mover).unwrap() > net.payoff(&before, mover).unwrap());
            count += 1;
        }
        assert_eq!(count, ig.num_transitions());
    }
}
