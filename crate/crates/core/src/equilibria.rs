//! Nash equilibrium checking and construction: a guarded brute-force
//! enumeration oracle plus the polynomial procedures for DAGs, simple
//! cycles, and source-free networks.
//!
//! Everything here is deterministic: nodes are scanned in canonical order,
//! products likewise, and whenever several witnesses qualify the
//! lexicographically least is returned.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph;
use crate::model::{
    classify_graph, cycle_order, JointStrategy, ModelError, NEClassification, NodeId, ProductId,
    SocialNetwork, Strategy,
};
use crate::rational::Rational;

/// Which kind of equilibrium a solver is asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NEKind {
    Trivial,
    /// Some agent adopts a product; satisfied by determined profiles too.
    NonTrivial,
    Determined,
}

impl NEKind {
    pub fn accepts(&self, class: NEClassification) -> bool {
        match self {
            NEKind::Trivial => class == NEClassification::Trivial,
            NEKind::NonTrivial => class.is_non_trivial(),
            NEKind::Determined => class == NEClassification::Determined,
        }
    }
}

/// How a solver verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    BruteForce,
    DagConstruction,
    CycleProcedure,
    SourceFreeFixpoint,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveMethod::BruteForce => "brute-force",
            SolveMethod::DagConstruction => "dag-construction",
            SolveMethod::CycleProcedure => "cycle-procedure",
            SolveMethod::SourceFreeFixpoint => "source-free-fixpoint",
        })
    }
}

/// Outcome of a solver query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NEReport {
    pub exists: bool,
    /// Present iff `exists`; always passes [`is_nash`].
    pub witness: Option<JointStrategy>,
    pub classification: Option<NEClassification>,
    pub method: SolveMethod,
    /// For negative profile checks: a node together with a strictly
    /// improving strategy.
    pub non_best_response_witness: Option<(NodeId, Strategy)>,
}

/// Result of checking a single profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NashCheck {
    Equilibrium,
    /// The canonically first node not playing a best response, with its
    /// best response (strictly improving by definition).
    ImprovableBy {
        node: NodeId,
        improvement: Strategy,
    },
}

impl NashCheck {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, NashCheck::Equilibrium)
    }
}

/// A strongly connected node set that sustains a product from within: every
/// member may choose the product and gathers at least its threshold from
/// fellow members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSustainingSCS {
    product: ProductId,
    members: BTreeSet<NodeId>,
}

impl SelfSustainingSCS {
    /// Validates the defining invariants against `net`.
    pub fn new(
        net: &SocialNetwork,
        product: ProductId,
        members: BTreeSet<NodeId>,
    ) -> Result<SelfSustainingSCS, SolveError> {
        if members.is_empty() {
            return Err(SolveError::InvalidCore("empty member set".into()));
        }
        net.product_index(&product)?;
        let mut mask = vec![false; net.node_count()];
        for id in &members {
            mask[net.node_index(id)?] = true;
        }
        for id in &members {
            let i = net.node_index(id)?;
            let local = match net.strategy_to_local(i, &Strategy::Product(product.clone())) {
                Some(l) => l,
                None => {
                    return Err(SolveError::InvalidCore(format!(
                        "member {id} cannot adopt {product}"
                    )))
                }
            };
            let mut sum = Rational::ZERO;
            for &(j, w) in net.in_edges_idx(i) {
                if mask[j as usize] {
                    sum = sum + w;
                }
            }
            if sum < net.local_threshold(i, local) {
                return Err(SolveError::InvalidCore(format!(
                    "member {id} gathers {sum} < threshold from inside the set"
                )));
            }
        }
        let comps = induced_sccs(net, &mask);
        if comps.len() != 1 {
            return Err(SolveError::InvalidCore(
                "member set is not strongly connected".into(),
            ));
        }
        Ok(SelfSustainingSCS { product, members })
    }

    pub fn product(&self) -> &ProductId {
        &self.product
    }

    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("state space has {states} joint strategies, exceeding the guard of {guard}")]
    GuardExceeded { states: u128, guard: u64 },
    #[error("underlying graph is not a DAG")]
    NotADag,
    #[error("underlying graph is not a simple cycle")]
    NotASimpleCycle,
    #[error("underlying graph has source nodes")]
    HasSourceNodes,
    #[error("profile is not a Nash equilibrium")]
    NotANashEquilibrium,
    #[error("profile is trivial")]
    TrivialProfile,
    #[error("invalid self-sustaining core: {0}")]
    InvalidCore(String),
}

// ---------------------------------------------------------------------------
// Profile-level checks
// ---------------------------------------------------------------------------

/// The set of best responses of `id` against the rest of `s`: argmax of the
/// payoff over S_i. Never empty; ties are all reported.
pub fn best_responses(
    net: &SocialNetwork,
    s: &JointStrategy,
    id: &NodeId,
) -> Result<BTreeSet<Strategy>, SolveError> {
    let i = net.node_index(id)?;
    let locals = net.to_locals(s)?;
    let mut best = Rational::ZERO;
    let mut payoffs = Vec::with_capacity(net.num_strategies(i));
    for alt in 0..net.num_strategies(i) as u16 {
        let p = net.payoff_local_with(&locals, i, alt);
        if alt == 0 || p > best {
            best = p;
        }
        payoffs.push(p);
    }
    Ok(payoffs
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p == best)
        .map(|(alt, _)| net.local_to_strategy(i, alt as u16))
        .collect())
}

/// Checks whether `s` is a Nash equilibrium. On failure reports the
/// canonically first deviating node and its best response.
pub fn is_nash(net: &SocialNetwork, s: &JointStrategy) -> Result<NashCheck, SolveError> {
    let locals = net.to_locals(s)?;
    Ok(match first_deviator(net, &locals) {
        None => NashCheck::Equilibrium,
        Some((i, best)) => NashCheck::ImprovableBy {
            node: net.node_id(i).clone(),
            improvement: net.local_to_strategy(i, best),
        },
    })
}

fn first_deviator(net: &SocialNetwork, locals: &[u16]) -> Option<(usize, u16)> {
    for i in 0..net.node_count() {
        if !net.is_best_response_local(locals, i) {
            let (best, _) = net.best_response_local(locals, i);
            return Some((i, best));
        }
    }
    None
}

/// Purely syntactic profile classification; whether the profile is a Nash
/// equilibrium is a separate question.
pub fn classify_ne(s: &JointStrategy) -> NEClassification {
    let nulls = s.iter().filter(|c| c.is_null()).count();
    if nulls == s.len() {
        NEClassification::Trivial
    } else if nulls == 0 {
        NEClassification::Determined
    } else {
        NEClassification::NonTrivialMixed
    }
}

// ---------------------------------------------------------------------------
// Brute-force enumeration
// ---------------------------------------------------------------------------

fn check_guard(net: &SocialNetwork, guard: u64) -> Result<(), SolveError> {
    let states = net.state_count();
    if states > guard as u128 {
        return Err(SolveError::GuardExceeded { states, guard });
    }
    Ok(())
}

/// Depth-first sweep over all joint strategies in lexicographic order,
/// invoking `visit` for every Nash equilibrium; `visit` returns `false` to
/// stop early.
///
/// A node's best-response condition only involves itself and its
/// neighbours, so it is checked as soon as all of those are assigned,
/// pruning entire subtrees. This accepts exactly the profiles a naive scan
/// would accept, just faster.
pub(crate) fn for_each_nash(net: &SocialNetwork, mut visit: impl FnMut(&[u16]) -> bool) {
    let n = net.node_count();
    let num_s: Vec<u16> = (0..n).map(|i| net.num_strategies(i) as u16).collect();

    // check_at[d]: nodes whose condition is decidable once positions 0..=d
    // are assigned.
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let mut last = i;
        for &(j, _) in net.in_edges_idx(i) {
            last = last.max(j as usize);
        }
        check_at[last].push(i);
    }

    let mut locals = vec![0u16; n];
    let mut depth = 0usize;
    let mut candidate = 0u16;
    loop {
        if candidate >= num_s[depth] {
            // Subtree exhausted; backtrack.
            if depth == 0 {
                return;
            }
            depth -= 1;
            candidate = locals[depth] + 1;
            continue;
        }
        locals[depth] = candidate;
        let consistent = check_at[depth]
            .iter()
            .all(|&i| net.is_best_response_local(&locals, i));
        if !consistent {
            candidate += 1;
        } else if depth + 1 == n {
            if !visit(&locals) {
                return;
            }
            candidate += 1;
        } else {
            depth += 1;
            candidate = 0;
        }
    }
}

/// Enumerates every Nash equilibrium in lexicographic order. The state
/// count Π(|P(i)|+1) must not exceed `guard`.
pub fn enumerate_ne(net: &SocialNetwork, guard: u64) -> Result<Vec<JointStrategy>, SolveError> {
    check_guard(net, guard)?;
    let mut out = Vec::new();
    for_each_nash(net, |locals| {
        out.push(net.profile_from_locals(locals));
        true
    });
    Ok(out)
}

/// The lexicographically least Nash equilibrium of the requested kind, if
/// any, by guarded exhaustive search.
pub fn find_first_ne_of_kind(
    net: &SocialNetwork,
    kind: NEKind,
    guard: u64,
) -> Result<Option<JointStrategy>, SolveError> {
    check_guard(net, guard)?;
    let mut found = None;
    for_each_nash(net, |locals| {
        let nulls = locals.iter().filter(|&&l| l == 0).count();
        let class = if nulls == locals.len() {
            NEClassification::Trivial
        } else if nulls == 0 {
            NEClassification::Determined
        } else {
            NEClassification::NonTrivialMixed
        };
        if kind.accepts(class) {
            found = Some(net.profile_from_locals(locals));
            false
        } else {
            true
        }
    });
    Ok(found)
}

// ---------------------------------------------------------------------------
// Solver front ends
// ---------------------------------------------------------------------------

fn report_with_witness(witness: JointStrategy, method: SolveMethod) -> NEReport {
    NEReport {
        exists: true,
        classification: Some(classify_ne(&witness)),
        witness: Some(witness),
        method,
        non_best_response_witness: None,
    }
}

fn report_none(method: SolveMethod) -> NEReport {
    NEReport {
        exists: false,
        witness: None,
        classification: None,
        method,
        non_best_response_witness: None,
    }
}

/// Decides trivial-equilibrium existence by checking the all-null profile
/// directly; no guard needed.
pub fn solve_trivial(net: &SocialNetwork) -> NEReport {
    let all_null = JointStrategy::all_null(net);
    match is_nash(net, &all_null).expect("all-null profile is always valid") {
        NashCheck::Equilibrium => report_with_witness(all_null, SolveMethod::BruteForce),
        NashCheck::ImprovableBy { node, improvement } => NEReport {
            non_best_response_witness: Some((node, improvement)),
            ..report_none(SolveMethod::BruteForce)
        },
    }
}

/// Guarded brute-force decision for any kind.
pub fn solve_brute(net: &SocialNetwork, kind: NEKind, guard: u64) -> Result<NEReport, SolveError> {
    if kind == NEKind::Trivial {
        return Ok(solve_trivial(net));
    }
    Ok(match find_first_ne_of_kind(net, kind, guard)? {
        Some(witness) => report_with_witness(witness, SolveMethod::BruteForce),
        None => report_none(SolveMethod::BruteForce),
    })
}

/// Dispatches on the graph class: DAG construction, the cycle procedure, or
/// the source-free fixpoint where applicable, guarded brute force otherwise.
/// Determined-kind queries outside simple cycles always fall back to brute
/// force.
pub fn solve_auto(net: &SocialNetwork, kind: NEKind, guard: u64) -> Result<NEReport, SolveError> {
    let class = classify_graph(net);
    match kind {
        NEKind::Trivial => Ok(solve_trivial(net)),
        NEKind::NonTrivial => {
            if class.is_simple_cycle {
                decide_ne_cycle(net, kind)
            } else if class.is_dag {
                Ok(report_with_witness(
                    construct_ne_dag(net)?,
                    SolveMethod::DagConstruction,
                ))
            } else if class.has_no_source_nodes {
                find_nontrivial_ne_sourcefree(net)
            } else {
                solve_brute(net, kind, guard)
            }
        }
        NEKind::Determined => {
            if class.is_simple_cycle {
                decide_ne_cycle(net, kind)
            } else {
                solve_brute(net, kind, guard)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// DAG construction (non-trivial equilibrium always exists)
// ---------------------------------------------------------------------------

/// Builds a non-trivial Nash equilibrium of a DAG network: process nodes in
/// topological order, each picking a best response to its already-fixed
/// predecessors (ties: canonical product order, Null last). Payoffs only
/// depend on predecessors, so every choice stays a best response in the
/// final profile, and sources pick a product, making it non-trivial.
pub fn construct_ne_dag(net: &SocialNetwork) -> Result<JointStrategy, SolveError> {
    let order = graph::topo_order(&net.adjacency()).ok_or(SolveError::NotADag)?;
    let mut locals = vec![0u16; net.node_count()];
    for i in order {
        let (best, _) = net.best_response_local(&locals, i);
        locals[i] = best;
    }
    Ok(net.profile_from_locals(&locals))
}

// ---------------------------------------------------------------------------
// Simple cycles: O(|P| * n) decision
// ---------------------------------------------------------------------------

/// Decides non-trivial / determined equilibrium existence on a simple
/// cycle.
///
/// In any equilibrium a node adopting `t` needs a non-negative payoff, so
/// its unique predecessor must adopt `t` too with an edge weight covering
/// the threshold; adoption is therefore predecessor-closed and either
/// nobody or everybody adopts, the same product all around. Hence a
/// non-trivial equilibrium exists iff a determined one does, iff some
/// common product `t` satisfies `w(pred(i), i) ≥ θ(i, t)` everywhere. The
/// witness is the uniform profile of the first such product.
///
/// Trivial-kind queries are answered directly: a simple cycle has no source
/// nodes, so the all-null profile is always an equilibrium.
pub fn decide_ne_cycle(net: &SocialNetwork, kind: NEKind) -> Result<NEReport, SolveError> {
    decide_ne_cycle_counted(net, kind).map(|(report, _)| report)
}

/// Same as [`decide_ne_cycle`] but also reports the number of membership
/// tests and threshold comparisons performed, which is at most
/// `2 * |P| * n`.
pub fn decide_ne_cycle_counted(
    net: &SocialNetwork,
    kind: NEKind,
) -> Result<(NEReport, u64), SolveError> {
    let order = cycle_order(net).ok_or(SolveError::NotASimpleCycle)?;
    if kind == NEKind::Trivial {
        return Ok((solve_trivial_on_cycle(net), 0));
    }
    let n = order.len();
    let mut work = 0u64;
    for p in 0..net.products().len() {
        let product = net.product_id(p).clone();
        let mut sustainable = true;
        for k in 0..n {
            let i = order[k];
            let pred = order[(k + n - 1) % n];
            work += 1;
            let Some(local) = net.strategy_to_local(i, &Strategy::Product(product.clone())) else {
                sustainable = false;
                break;
            };
            let (_, w) = net.in_edges_idx(i)[0];
            debug_assert_eq!(net.in_edges_idx(i)[0].0 as usize, pred);
            work += 1;
            if w < net.local_threshold(i, local) {
                sustainable = false;
                break;
            }
        }
        if sustainable {
            let witness = JointStrategy::uniform(net, &product).expect("common product");
            return Ok((
                report_with_witness(witness, SolveMethod::CycleProcedure),
                work,
            ));
        }
    }
    Ok((report_none(SolveMethod::CycleProcedure), work))
}

fn solve_trivial_on_cycle(net: &SocialNetwork) -> NEReport {
    let witness = JointStrategy::all_null(net);
    debug_assert!(is_nash(net, &witness).unwrap().is_equilibrium());
    report_with_witness(witness, SolveMethod::CycleProcedure)
}

// ---------------------------------------------------------------------------
// Source-free networks: the X_t fixpoint machinery
// ---------------------------------------------------------------------------

/// One snapshot iteration of the sustaining condition, restricted to the
/// stage-zero membership set.
fn sustain_step(
    net: &SocialNetwork,
    pidx: u32,
    stage_zero: &[bool],
    current: &[bool],
) -> Vec<bool> {
    let n = net.node_count();
    let product = net.product_id(pidx as usize).clone();
    let mut next = vec![false; n];
    for i in 0..n {
        if !stage_zero[i] {
            continue;
        }
        let local = net
            .strategy_to_local(i, &Strategy::Product(product.clone()))
            .expect("stage-zero node can adopt the product");
        let mut sum = Rational::ZERO;
        for &(j, w) in net.in_edges_idx(i) {
            if current[j as usize] {
                sum = sum + w;
            }
        }
        next[i] = sum >= net.local_threshold(i, local);
    }
    next
}

/// The erosion stages X⁰ ⊇ X¹ ⊇ … down to the fixpoint, all included. The
/// `allowed` mask further restricts stage zero (used for the support-structure
/// check confined to the adopters of a product).
fn sustain_stages(net: &SocialNetwork, pidx: u32, allowed: Option<&[bool]>) -> Vec<Vec<bool>> {
    let n = net.node_count();
    let product = net.product_id(pidx as usize).clone();
    let mut stage_zero = vec![false; n];
    for (i, slot) in stage_zero.iter_mut().enumerate() {
        let capable = net
            .strategy_to_local(i, &Strategy::Product(product.clone()))
            .is_some();
        *slot = capable && allowed.map_or(true, |a| a[i]);
    }
    let mut stages = vec![stage_zero.clone()];
    loop {
        let current = stages.last().unwrap();
        let next = sustain_step(net, pidx, &stage_zero, current);
        if &next == current {
            break;
        }
        stages.push(next);
    }
    stages
}

/// The erosion sequence X⁰, X¹, …, X_t as node-id sets; the last element is
/// the fixpoint. Each non-final step strictly shrinks the set, so there are
/// at most n+1 stages.
pub fn compute_xt_stages(
    net: &SocialNetwork,
    product: &ProductId,
) -> Result<Vec<BTreeSet<NodeId>>, SolveError> {
    let pidx = net.product_index(product)? as u32;
    Ok(sustain_stages(net, pidx, None)
        .into_iter()
        .map(|mask| mask_to_ids(net, &mask))
        .collect())
}

/// X_t: the greatest set of t-capable nodes surviving iterated threshold
/// pruning. Non-empty iff a non-trivial equilibrium adopting `t` exists in
/// source-free networks.
pub fn compute_xt(
    net: &SocialNetwork,
    product: &ProductId,
) -> Result<BTreeSet<NodeId>, SolveError> {
    Ok(compute_xt_stages(net, product)?
        .pop()
        .expect("at least stage zero"))
}

fn mask_to_ids(net: &SocialNetwork, mask: &[bool]) -> BTreeSet<NodeId> {
    mask.iter()
        .enumerate()
        .filter(|&(_, &m)| m)
        .map(|(i, _)| net.node_id(i).clone())
        .collect()
}

/// Searches for a non-trivial equilibrium of a source-free network: for
/// each product in canonical order compute X_t; the first non-empty
/// fixpoint yields the witness (t on X_t, opt-out elsewhere).
pub fn find_nontrivial_ne_sourcefree(net: &SocialNetwork) -> Result<NEReport, SolveError> {
    if !classify_graph(net).has_no_source_nodes {
        return Err(SolveError::HasSourceNodes);
    }
    for p in 0..net.products().len() {
        let stages = sustain_stages(net, p as u32, None);
        let fixpoint = stages.last().unwrap();
        if fixpoint.iter().any(|&m| m) {
            let witness = profile_on_mask(net, p as u32, fixpoint);
            debug_assert!(is_nash(net, &witness).unwrap().is_equilibrium());
            return Ok(report_with_witness(
                witness,
                SolveMethod::SourceFreeFixpoint,
            ));
        }
    }
    Ok(report_none(SolveMethod::SourceFreeFixpoint))
}

fn profile_on_mask(net: &SocialNetwork, pidx: u32, mask: &[bool]) -> JointStrategy {
    let product = net.product_id(pidx as usize).clone();
    let locals: Vec<u16> = (0..net.node_count())
        .map(|i| {
            if mask[i] {
                net.strategy_to_local(i, &Strategy::Product(product.clone()))
                    .expect("mask member can adopt")
            } else {
                0
            }
        })
        .collect();
    net.profile_from_locals(&locals)
}

/// Strongly connected components of the subgraph induced by `mask`,
/// reported over global node indices.
fn induced_sccs(net: &SocialNetwork, mask: &[bool]) -> Vec<Vec<usize>> {
    let members: Vec<usize> = (0..net.node_count()).filter(|&i| mask[i]).collect();
    let compact: std::collections::BTreeMap<usize, usize> =
        members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&i| {
            net.out_adj_idx(i)
                .iter()
                .filter_map(|&t| compact.get(&(t as usize)).copied())
                .collect()
        })
        .collect();
    graph::tarjan_scc(&adj)
        .into_iter()
        .map(|comp| comp.into_iter().map(|k| members[k]).collect())
        .collect()
}

/// Components of the induced subgraph with no incoming edges from the rest
/// of the mask.
fn source_sccs(net: &SocialNetwork, mask: &[bool], sccs: &[Vec<usize>]) -> Vec<usize> {
    let mut comp_of = vec![usize::MAX; net.node_count()];
    for (c, comp) in sccs.iter().enumerate() {
        for &i in comp {
            comp_of[i] = c;
        }
    }
    (0..sccs.len())
        .filter(|&c| {
            sccs[c].iter().all(|&i| {
                net.in_edges_idx(i)
                    .iter()
                    .all(|&(j, _)| !mask[j as usize] || comp_of[j as usize] == c)
            })
        })
        .collect()
}

/// Finds a self-sustaining strongly connected subgraph for `product`, or
/// `None` if no such set exists.
///
/// Every self-sustaining SCS survives the iterated pruning, so the greatest
/// fixpoint Y contains them all; conversely, a source component of Y's
/// induced subgraph draws all its in-mask weight from itself and is
/// therefore self-sustaining. The component containing the canonically
/// least node among source components is returned.
pub fn find_self_sustaining_scs(
    net: &SocialNetwork,
    product: &ProductId,
) -> Result<Option<SelfSustainingSCS>, SolveError> {
    let pidx = net.product_index(product)? as u32;
    let stages = sustain_stages(net, pidx, None);
    let fixpoint = stages.last().unwrap();
    if !fixpoint.iter().any(|&m| m) {
        return Ok(None);
    }
    let sccs = induced_sccs(net, fixpoint);
    let sources = source_sccs(net, fixpoint, &sccs);
    let &first = sources
        .iter()
        .min_by_key(|&&c| sccs[c][0])
        .expect("non-empty fixpoint has a source component");
    let members: BTreeSet<NodeId> = sccs[first]
        .iter()
        .map(|&i| net.node_id(i).clone())
        .collect();
    let scs = SelfSustainingSCS::new(net, product.clone(), members)
        .expect("source component of the fixpoint is self-sustaining");
    Ok(Some(scs))
}

/// Expands a self-sustaining core to the set R of nodes that eventually
/// adopt its product, and returns the profile playing the product on R and
/// opting out elsewhere. On source-free networks this profile is a Nash
/// equilibrium.
pub fn expand_r(
    net: &SocialNetwork,
    core: &SelfSustainingSCS,
) -> Result<JointStrategy, SolveError> {
    // Re-validate: the core may have been built against another network.
    let core = SelfSustainingSCS::new(net, core.product.clone(), core.members.clone())?;
    let pidx = net.product_index(&core.product)? as u32;
    let n = net.node_count();
    let mut in_r = vec![false; n];
    for id in &core.members {
        in_r[net.node_index(id)?] = true;
    }
    loop {
        let mut changed = false;
        for j in 0..n {
            if in_r[j] {
                continue;
            }
            let Some(local) = net.strategy_to_local(j, &Strategy::Product(core.product.clone()))
            else {
                continue;
            };
            let mut sum = Rational::ZERO;
            for &(k, w) in net.in_edges_idx(j) {
                if in_r[k as usize] {
                    sum = sum + w;
                }
            }
            if sum >= net.local_threshold(j, local) {
                in_r[j] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(profile_on_mask(net, pidx, &in_r))
}

/// Verifies the structural property of non-trivial equilibria on
/// source-free networks: for every adopted product `t` and every adopter
/// `i`, some self-sustaining SCS for `t` inside the adopter set contains a
/// node with a path to `i` in the full graph.
pub fn verify_support_structure(
    net: &SocialNetwork,
    s: &JointStrategy,
) -> Result<bool, SolveError> {
    if !classify_graph(net).has_no_source_nodes {
        return Err(SolveError::HasSourceNodes);
    }
    if !is_nash(net, s)?.is_equilibrium() {
        return Err(SolveError::NotANashEquilibrium);
    }
    if classify_ne(s) == NEClassification::Trivial {
        return Err(SolveError::TrivialProfile);
    }

    let adj = net.adjacency();
    let used: BTreeSet<&ProductId> = s.iter().filter_map(|c| c.product()).collect();
    for product in used {
        let pidx = net.product_index(product)? as u32;
        let adopters: Vec<bool> = (0..net.node_count())
            .map(|i| s.strategy_at(i).product() == Some(product))
            .collect();
        let stages = sustain_stages(net, pidx, Some(&adopters));
        let fixpoint = stages.last().unwrap();
        if !fixpoint.iter().any(|&m| m) {
            return Ok(false);
        }
        // Any self-sustaining SCS inside the adopter set lies within the
        // fixpoint, and in the condensation every component is reachable
        // from a source component, which is itself self-sustaining. So
        // reachability from the source components decides the property.
        let sccs = induced_sccs(net, fixpoint);
        let sources = source_sccs(net, fixpoint, &sccs);
        let starts: Vec<usize> = sources
            .iter()
            .flat_map(|&c| sccs[c].iter().copied())
            .collect();
        let reached = graph::bfs_reachable(&adj, &starts);
        for i in 0..net.node_count() {
            if adopters[i] && !reached[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
