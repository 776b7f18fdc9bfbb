//! Classification of the underlying digraph into the special classes with
//! dedicated equilibrium procedures: DAGs, simple cycles, and source-free
//! graphs.

use serde::Serialize;

use super::SocialNetwork;
use crate::graph;

/// Structural flags of the underlying unweighted digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub is_dag: bool,
    /// A single directed cycle covering every node, each with in- and
    /// out-degree exactly one.
    pub is_simple_cycle: bool,
    pub has_no_source_nodes: bool,
}

/// Computes the class flags. A simple cycle has no source nodes by
/// construction, and a non-empty DAG always has one.
pub fn classify_graph(net: &SocialNetwork) -> GraphClass {
    let adj = net.adjacency();
    let is_dag = graph::topo_order(&adj).is_some();
    let has_no_source_nodes = (0..net.node_count()).all(|i| !net.is_source_idx(i));
    GraphClass {
        is_dag,
        is_simple_cycle: cycle_order(net).is_some(),
        has_no_source_nodes,
    }
}

/// If the graph is a simple cycle, returns its node indices in cycle order
/// starting from the canonically least node (so `order[k-1]` is the unique
/// predecessor of `order[k]`, wrapping around).
pub fn cycle_order(net: &SocialNetwork) -> Option<Vec<usize>> {
    let n = net.node_count();
    if n < 2 {
        return None;
    }
    for i in 0..n {
        if net.out_adj_idx(i).len() != 1 || net.in_edges_idx(i).len() != 1 {
            return None;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut current = 0usize;
    loop {
        order.push(current);
        current = net.out_adj_idx(current)[0] as usize;
        if current == 0 {
            break;
        }
        if order.len() == n {
            // Walked n steps without returning: several disjoint cycles.
            return None;
        }
    }
    (order.len() == n).then_some(order)
}
