//! The social network itself: a weighted digraph plus product sets,
//! thresholds, and the source-node payoff constant, validated on
//! construction and compiled into index-based tables for the solvers.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{JointStrategy, NodeId, ProductId, Strategy};
use crate::rational::Rational;

/// Violations of the network invariants, detected at build time.
/// Each variant corresponds to one stable error code (see [`code`]).
///
/// [`code`]: ValidationError::code
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("network has no nodes")]
    EmptyNetwork,
    #[error("node {0} declared more than once")]
    DuplicateNode(NodeId),
    #[error("source payoff c0 = {0} must be positive")]
    NonPositiveSourcePayoff(Rational),
    #[error("node {0} has an empty product set")]
    EmptyProductSet(NodeId),
    #[error("node {node} lists product {product} outside the product universe")]
    UnknownProductInSet { node: NodeId, product: ProductId },
    #[error("missing threshold for node {node}, product {product}")]
    MissingThreshold { node: NodeId, product: ProductId },
    #[error("threshold given for node {node}, product {product} not in its product set")]
    ThresholdForForeignProduct { node: NodeId, product: ProductId },
    #[error("threshold given for unknown node {0}")]
    ThresholdForUnknownNode(NodeId),
    #[error("threshold {value} for node {node}, product {product} outside (0, 1]")]
    ThresholdOutOfRange {
        node: NodeId,
        product: ProductId,
        value: Rational,
    },
    #[error("edge {from} -> {to} references unknown node {missing}")]
    DanglingEdgeEndpoint {
        from: NodeId,
        to: NodeId,
        missing: NodeId,
    },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: NodeId, to: NodeId },
    #[error("edge {from} -> {to} weight {weight} outside [0, 1]")]
    WeightOutOfRange {
        from: NodeId,
        to: NodeId,
        weight: Rational,
    },
    #[error("incoming weights of node {node} sum to {sum} > 1")]
    WeightSumExceeded { node: NodeId, sum: Rational },
}

impl ValidationError {
    /// Stable kebab-case code for CLI and file-format error reporting.
    pub fn code(&self) -> &'static str {
        use ValidationError::*;
        match self {
            EmptyNetwork => "empty-network",
            DuplicateNode(_) => "duplicate-node",
            NonPositiveSourcePayoff(_) => "nonpositive-c0",
            EmptyProductSet(_) => "empty-product-set",
            UnknownProductInSet { .. } => "unknown-product-in-set",
            MissingThreshold { .. } => "missing-threshold",
            ThresholdForForeignProduct { .. } => "threshold-for-foreign-product",
            ThresholdForUnknownNode(_) => "threshold-for-unknown-node",
            ThresholdOutOfRange { .. } => "threshold-out-of-range",
            DanglingEdgeEndpoint { .. } => "dangling-edge-endpoint",
            SelfLoop(_) => "self-loop",
            DuplicateEdge { .. } => "duplicate-edge",
            WeightOutOfRange { .. } => "weight-out-of-range",
            WeightSumExceeded { .. } => "weight-sum-exceeded",
        }
    }
}

/// Errors for operations on an already-valid network.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown product {0}")]
    UnknownProduct(ProductId),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

/// A validated social network.
///
/// Node and product identifiers are held in sorted order; every index-based
/// accessor refers to those canonical positions. Instances are immutable and
/// all operations on them are pure, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialNetwork {
    nodes: Vec<NodeId>,
    products: Vec<ProductId>,
    c0: Rational,
    /// Edges as (from, to, weight), sorted by (from, to).
    edges: Vec<(u32, u32, Rational)>,
    /// Per node: sorted global product indices of P(i).
    product_sets: Vec<Vec<u32>>,
    /// Per node: thresholds aligned with `product_sets`.
    thresholds: Vec<Vec<Rational>>,
    /// Per node: incoming (neighbour, weight), sorted by neighbour.
    in_edges: Vec<Vec<(u32, Rational)>>,
    /// Per node: outgoing neighbour indices, sorted.
    out_adj: Vec<Vec<u32>>,
}

impl SocialNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Node ids in canonical (lexicographic) order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// The product universe in canonical order.
    pub fn products(&self) -> &[ProductId] {
        &self.products
    }

    pub fn source_payoff(&self) -> Rational {
        self.c0
    }

    pub fn node_index(&self, id: &NodeId) -> Result<usize, ModelError> {
        self.nodes
            .binary_search(id)
            .map_err(|_| ModelError::UnknownNode(id.clone()))
    }

    pub fn product_index(&self, id: &ProductId) -> Result<usize, ModelError> {
        self.products
            .binary_search(id)
            .map_err(|_| ModelError::UnknownProduct(id.clone()))
    }

    pub fn node_id(&self, index: usize) -> &NodeId {
        &self.nodes[index]
    }

    pub fn product_id(&self, index: usize) -> &ProductId {
        &self.products[index]
    }

    /// P(i) as product ids.
    pub fn product_set(&self, id: &NodeId) -> Result<Vec<&ProductId>, ModelError> {
        let i = self.node_index(id)?;
        Ok(self.product_sets[i]
            .iter()
            .map(|&p| &self.products[p as usize])
            .collect())
    }

    /// θ(i, t); `None` when `t ∉ P(i)`.
    pub fn threshold(
        &self,
        id: &NodeId,
        product: &ProductId,
    ) -> Result<Option<Rational>, ModelError> {
        let i = self.node_index(id)?;
        let p = self.product_index(product)? as u32;
        Ok(self.product_sets[i]
            .binary_search(&p)
            .ok()
            .map(|k| self.thresholds[i][k]))
    }

    /// N(i): the set of nodes with an edge into `i`. Empty exactly for
    /// source nodes.
    pub fn neighbors(&self, id: &NodeId) -> Result<BTreeSet<&NodeId>, ModelError> {
        let i = self.node_index(id)?;
        Ok(self.in_edges[i]
            .iter()
            .map(|&(j, _)| &self.nodes[j as usize])
            .collect())
    }

    pub fn is_source(&self, id: &NodeId) -> Result<bool, ModelError> {
        Ok(self.in_edges[self.node_index(id)?].is_empty())
    }

    pub fn edge_weight(&self, from: &NodeId, to: &NodeId) -> Result<Option<Rational>, ModelError> {
        let f = self.node_index(from)? as u32;
        let t = self.node_index(to)? as u32;
        Ok(self.in_edges[t as usize]
            .iter()
            .find(|&&(j, _)| j == f)
            .map(|&(_, w)| w))
    }

    /// All edges as (from, to, weight) in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, Rational)> + '_ {
        self.edges
            .iter()
            .map(|&(f, t, w)| (&self.nodes[f as usize], &self.nodes[t as usize], w))
    }

    /// 𝒩ᵢᵗ(s): the neighbours of `i` that adopted `t` under `s`.
    pub fn supporters<'a>(
        &'a self,
        s: &JointStrategy,
        id: &NodeId,
        product: &ProductId,
    ) -> Result<BTreeSet<&'a NodeId>, ModelError> {
        let i = self.node_index(id)?;
        self.product_index(product)?;
        self.check_profile(s)?;
        Ok(self.in_edges[i]
            .iter()
            .filter(|&&(j, _)| s.strategy_at(j as usize).product() == Some(product))
            .map(|&(j, _)| &self.nodes[j as usize])
            .collect())
    }

    /// The payoff of node `i` under profile `s`: 0 for opting out, `c0` for
    /// a source node adopting anything, and adopted-neighbour weight minus
    /// threshold otherwise.
    pub fn payoff(&self, s: &JointStrategy, id: &NodeId) -> Result<Rational, ModelError> {
        let i = self.node_index(id)?;
        let locals = self.to_locals(s)?;
        Ok(self.payoff_local(&locals, i))
    }

    /// Σ over all nodes of their payoff.
    pub fn social_welfare(&self, s: &JointStrategy) -> Result<Rational, ModelError> {
        let locals = self.to_locals(s)?;
        Ok((0..self.node_count())
            .map(|i| self.payoff_local(&locals, i))
            .fold(Rational::ZERO, |acc, p| acc + p))
    }

    /// Number of joint strategies, Π(|P(i)| + 1), saturating.
    pub fn state_count(&self) -> u128 {
        self.product_sets
            .iter()
            .map(|ps| ps.len() as u128 + 1)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    /// The strategy set S_i in canonical order: Null first, then P(i).
    pub fn strategies(&self, id: &NodeId) -> Result<Vec<Strategy>, ModelError> {
        let i = self.node_index(id)?;
        Ok((0..self.num_strategies(i))
            .map(|k| self.local_to_strategy(i, k as u16))
            .collect())
    }

    /// Checks that `s` covers exactly this network's nodes and respects
    /// every node's product set.
    pub fn check_profile(&self, s: &JointStrategy) -> Result<(), ModelError> {
        if s.len() != self.node_count() {
            return Err(ModelError::InvalidProfile(format!(
                "profile has {} entries, network has {} nodes",
                s.len(),
                self.node_count()
            )));
        }
        for i in 0..self.node_count() {
            if let Strategy::Product(p) = s.strategy_at(i) {
                let pi = self.product_index(p).map_err(|_| {
                    ModelError::InvalidProfile(format!(
                        "node {} assigned unknown product {}",
                        self.nodes[i], p
                    ))
                })? as u32;
                if self.product_sets[i].binary_search(&pi).is_err() {
                    return Err(ModelError::InvalidProfile(format!(
                        "node {} cannot choose product {}",
                        self.nodes[i], p
                    )));
                }
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Index-based internals used by the solvers. Local strategy indices
    // run 0..num_strategies(i), with 0 = Null and k = k-th product of P(i).
    // ------------------------------------------------------------------

    pub(crate) fn num_strategies(&self, i: usize) -> usize {
        self.product_sets[i].len() + 1
    }

    pub(crate) fn is_source_idx(&self, i: usize) -> bool {
        self.in_edges[i].is_empty()
    }

    pub(crate) fn in_edges_idx(&self, i: usize) -> &[(u32, Rational)] {
        &self.in_edges[i]
    }

    pub(crate) fn out_adj_idx(&self, i: usize) -> &[u32] {
        &self.out_adj[i]
    }

    /// Global product index chosen by node `i` at local strategy `k`.
    pub(crate) fn local_product(&self, i: usize, local: u16) -> Option<u32> {
        if local == 0 {
            None
        } else {
            Some(self.product_sets[i][local as usize - 1])
        }
    }

    pub(crate) fn local_threshold(&self, i: usize, local: u16) -> Rational {
        self.thresholds[i][local as usize - 1]
    }

    pub(crate) fn local_to_strategy(&self, i: usize, local: u16) -> Strategy {
        match self.local_product(i, local) {
            None => Strategy::Null,
            Some(p) => Strategy::Product(self.products[p as usize].clone()),
        }
    }

    pub(crate) fn strategy_to_local(&self, i: usize, s: &Strategy) -> Option<u16> {
        match s {
            Strategy::Null => Some(0),
            Strategy::Product(p) => {
                let pi = self.products.binary_search(p).ok()? as u32;
                self.product_sets[i]
                    .binary_search(&pi)
                    .ok()
                    .map(|k| (k + 1) as u16)
            }
        }
    }

    pub(crate) fn to_locals(&self, s: &JointStrategy) -> Result<Vec<u16>, ModelError> {
        self.check_profile(s)?;
        Ok((0..self.node_count())
            .map(|i| {
                self.strategy_to_local(i, s.strategy_at(i))
                    .expect("validated profile")
            })
            .collect())
    }

    pub(crate) fn profile_from_locals(&self, locals: &[u16]) -> JointStrategy {
        JointStrategy::from_choices(
            (0..self.node_count())
                .map(|i| self.local_to_strategy(i, locals[i]))
                .collect(),
        )
    }

    /// Payoff evaluated on the compiled representation; hot path for
    /// enumeration and dynamics.
    pub(crate) fn payoff_local(&self, locals: &[u16], i: usize) -> Rational {
        let local = locals[i];
        let Some(product) = self.local_product(i, local) else {
            return Rational::ZERO;
        };
        if self.in_edges[i].is_empty() {
            return self.c0;
        }
        let mut sum = Rational::ZERO;
        for &(j, w) in &self.in_edges[i] {
            if self.local_product(j as usize, locals[j as usize]) == Some(product) {
                sum = sum + w;
            }
        }
        sum - self.local_threshold(i, local)
    }

    /// Payoff of `i` if it unilaterally switched to `alt` (locals untouched).
    pub(crate) fn payoff_local_with(&self, locals: &[u16], i: usize, alt: u16) -> Rational {
        let Some(product) = self.local_product(i, alt) else {
            return Rational::ZERO;
        };
        if self.in_edges[i].is_empty() {
            return self.c0;
        }
        let mut sum = Rational::ZERO;
        for &(j, w) in &self.in_edges[i] {
            if self.local_product(j as usize, locals[j as usize]) == Some(product) {
                sum = sum + w;
            }
        }
        sum - self.local_threshold(i, alt)
    }

    /// True iff `locals[i]` is a best response to the rest of the profile.
    pub(crate) fn is_best_response_local(&self, locals: &[u16], i: usize) -> bool {
        let current = self.payoff_local(locals, i);
        for alt in 0..self.num_strategies(i) as u16 {
            if alt != locals[i] && self.payoff_local_with(locals, i, alt) > current {
                return false;
            }
        }
        true
    }

    /// The best response with the canonical tie-break: products in id order
    /// first, Null last. Returns (local strategy, payoff).
    pub(crate) fn best_response_local(&self, locals: &[u16], i: usize) -> (u16, Rational) {
        let mut best = 1u16;
        let mut best_pay = self.payoff_local_with(locals, i, 1);
        for alt in 2..self.num_strategies(i) as u16 {
            let pay = self.payoff_local_with(locals, i, alt);
            if pay > best_pay {
                best = alt;
                best_pay = pay;
            }
        }
        // Null comes last in the tie-break order.
        if Rational::ZERO > best_pay {
            (0, Rational::ZERO)
        } else {
            (best, best_pay)
        }
    }

    /// Unweighted adjacency (out-edges) over node indices, for the graph
    /// helpers.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        self.out_adj
            .iter()
            .map(|targets| targets.iter().map(|&t| t as usize).collect())
            .collect()
    }
}

/// Incremental construction of a [`SocialNetwork`]; `build` runs the full
/// validation pass and reports the first violation in a deterministic order.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    c0: Option<Rational>,
    nodes: Vec<(NodeId, Vec<ProductId>)>,
    extra_products: Vec<ProductId>,
    thresholds: Vec<(NodeId, ProductId, Rational)>,
    edges: Vec<(NodeId, NodeId, Rational)>,
}

impl NetworkBuilder {
    pub fn new() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    /// Source-node payoff constant; defaults to 1.
    pub fn c0(mut self, c0: Rational) -> Self {
        self.c0 = Some(c0);
        self
    }

    pub fn node<I, P>(mut self, id: impl Into<NodeId>, products: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<ProductId>,
    {
        self.nodes
            .push((id.into(), products.into_iter().map(Into::into).collect()));
        self
    }

    /// Adds a product to the universe without assigning it to any node.
    pub fn product(mut self, id: impl Into<ProductId>) -> Self {
        self.extra_products.push(id.into());
        self
    }

    pub fn threshold(
        mut self,
        node: impl Into<NodeId>,
        product: impl Into<ProductId>,
        value: Rational,
    ) -> Self {
        self.thresholds.push((node.into(), product.into(), value));
        self
    }

    pub fn edge(
        mut self,
        from: impl Into<NodeId>,
        to: impl Into<NodeId>,
        weight: Rational,
    ) -> Self {
        self.edges.push((from.into(), to.into(), weight));
        self
    }

    pub fn build(self) -> Result<SocialNetwork, ValidationError> {
        let c0 = self.c0.unwrap_or(Rational::ONE);
        if self.nodes.is_empty() {
            return Err(ValidationError::EmptyNetwork);
        }
        if !c0.is_positive() {
            return Err(ValidationError::NonPositiveSourcePayoff(c0));
        }

        let mut node_ids: Vec<NodeId> = self.nodes.iter().map(|(id, _)| id.clone()).collect();
        node_ids.sort();
        for pair in node_ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(ValidationError::DuplicateNode(pair[0].clone()));
            }
        }

        let mut products: BTreeSet<ProductId> = self.extra_products.iter().cloned().collect();
        for (_, ps) in &self.nodes {
            products.extend(ps.iter().cloned());
        }
        let products: Vec<ProductId> = products.into_iter().collect();
        let product_idx = |p: &ProductId| products.binary_search(p).map(|k| k as u32);
        let node_idx = |n: &NodeId| node_ids.binary_search(n);

        // Product sets, sorted and deduplicated per node.
        let mut product_sets: Vec<Vec<u32>> = vec![Vec::new(); node_ids.len()];
        for (id, ps) in &self.nodes {
            let i = node_idx(id).expect("node registered above");
            if ps.is_empty() {
                return Err(ValidationError::EmptyProductSet(id.clone()));
            }
            let mut set: Vec<u32> = Vec::with_capacity(ps.len());
            for p in ps {
                match product_idx(p) {
                    Ok(k) => set.push(k),
                    Err(_) => {
                        return Err(ValidationError::UnknownProductInSet {
                            node: id.clone(),
                            product: p.clone(),
                        })
                    }
                }
            }
            set.sort_unstable();
            set.dedup();
            product_sets[i] = set;
        }

        // Thresholds: defined exactly for t ∈ P(i), each in (0, 1].
        let mut thresholds: Vec<Vec<Option<Rational>>> =
            product_sets.iter().map(|ps| vec![None; ps.len()]).collect();
        for (node, product, value) in &self.thresholds {
            let i = match node_idx(node) {
                Ok(i) => i,
                Err(_) => return Err(ValidationError::ThresholdForUnknownNode(node.clone())),
            };
            let foreign = || ValidationError::ThresholdForForeignProduct {
                node: node.clone(),
                product: product.clone(),
            };
            let p = product_idx(product).map_err(|_| foreign())?;
            let k = product_sets[i].binary_search(&p).map_err(|_| foreign())?;
            if !value.is_positive() || *value > Rational::ONE {
                return Err(ValidationError::ThresholdOutOfRange {
                    node: node.clone(),
                    product: product.clone(),
                    value: *value,
                });
            }
            thresholds[i][k] = Some(*value);
        }
        let mut resolved_thresholds: Vec<Vec<Rational>> = Vec::with_capacity(node_ids.len());
        for (i, row) in thresholds.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (k, v) in row.into_iter().enumerate() {
                match v {
                    Some(v) => out.push(v),
                    None => {
                        return Err(ValidationError::MissingThreshold {
                            node: node_ids[i].clone(),
                            product: products[product_sets[i][k] as usize].clone(),
                        })
                    }
                }
            }
            resolved_thresholds.push(out);
        }

        // Edges: resolve endpoints, reject self-loops / duplicates / bad
        // weights, then check the incoming-sum bound.
        let mut edges: Vec<(u32, u32, Rational)> = Vec::with_capacity(self.edges.len());
        for (from, to, weight) in &self.edges {
            let f = node_idx(from).map_err(|_| ValidationError::DanglingEdgeEndpoint {
                from: from.clone(),
                to: to.clone(),
                missing: from.clone(),
            })?;
            let t = node_idx(to).map_err(|_| ValidationError::DanglingEdgeEndpoint {
                from: from.clone(),
                to: to.clone(),
                missing: to.clone(),
            })?;
            if f == t {
                return Err(ValidationError::SelfLoop(from.clone()));
            }
            if weight.is_negative() || *weight > Rational::ONE {
                return Err(ValidationError::WeightOutOfRange {
                    from: from.clone(),
                    to: to.clone(),
                    weight: *weight,
                });
            }
            edges.push((f as u32, t as u32, *weight));
        }
        edges.sort_by_key(|&(f, t, _)| (f, t));
        for pair in edges.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(ValidationError::DuplicateEdge {
                    from: node_ids[pair[0].0 as usize].clone(),
                    to: node_ids[pair[0].1 as usize].clone(),
                });
            }
        }

        let mut in_edges: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); node_ids.len()];
        let mut out_adj: Vec<Vec<u32>> = vec![Vec::new(); node_ids.len()];
        for &(f, t, w) in &edges {
            in_edges[t as usize].push((f, w));
            out_adj[f as usize].push(t);
        }
        for row in &mut in_edges {
            row.sort_by_key(|&(j, _)| j);
        }
        for (i, row) in in_edges.iter().enumerate() {
            let sum = row.iter().fold(Rational::ZERO, |acc, &(_, w)| acc + w);
            if sum > Rational::ONE {
                return Err(ValidationError::WeightSumExceeded {
                    node: node_ids[i].clone(),
                    sum,
                });
            }
        }
        for row in &mut out_adj {
            row.sort_unstable();
        }

        Ok(SocialNetwork {
            nodes: node_ids,
            products,
            c0,
            edges,
            product_sets,
            thresholds: resolved_thresholds,
            in_edges,
            out_adj,
        })
    }
}
