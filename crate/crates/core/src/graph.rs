//! Small directed-graph helpers shared by classification, the equilibrium
//! procedures, and improvement-graph analysis. All of them are iterative so
//! large state graphs cannot blow the call stack.

/// Tarjan's strongly connected components, iterative formulation.
/// Components are returned with their members sorted; the component list is
/// sorted by smallest member so the output is deterministic.
pub(crate) fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0usize;

    // Explicit DFS frames: (node, next child position).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        frames.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }

    comps.sort_by_key(|c| c[0]);
    comps
}

/// Kahn topological sort; `None` if the graph has a cycle. Ready nodes are
/// consumed in ascending index order, so the order is deterministic.
pub(crate) fn topo_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut in_deg = vec![0usize; n];
    for targets in adj {
        for &t in targets {
            in_deg[t] += 1;
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| in_deg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = ready.iter().next() {
        ready.remove(&v);
        order.push(v);
        for &t in &adj[v] {
            in_deg[t] -= 1;
            if in_deg[t] == 0 {
                ready.insert(t);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Acyclicity test over a CSR edge list (used for improvement graphs, where
/// materialising `Vec<Vec<_>>` adjacency would be wasteful).
pub(crate) fn csr_is_acyclic(num_nodes: usize, offsets: &[usize], targets: &[u32]) -> bool {
    let mut in_deg = vec![0u32; num_nodes];
    for &t in targets {
        in_deg[t as usize] += 1;
    }
    let mut queue: Vec<usize> = (0..num_nodes).filter(|&v| in_deg[v] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &t in &targets[offsets[v]..offsets[v + 1]] {
            in_deg[t as usize] -= 1;
            if in_deg[t as usize] == 0 {
                queue.push(t as usize);
            }
        }
    }
    seen == num_nodes
}

/// Multi-source BFS; returns the visited mask (sources included).
pub(crate) fn bfs_reachable(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &t in &adj[v] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_splits_cycle_and_tail() {
        // 0 -> 1 -> 2 -> 0, 2 -> 3
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let comps = tarjan_scc(&adj);
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn tarjan_handles_deep_chain_without_recursion() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| if v + 1 < n { vec![v + 1] } else { vec![] })
            .collect();
        assert_eq!(tarjan_scc(&adj).len(), n);
    }

    #[test]
    fn topo_order_on_dag_and_cycle() {
        let dag = vec![vec![1, 2], vec![3], vec![3], vec![]];
        assert_eq!(topo_order(&dag), Some(vec![0, 1, 2, 3]));
        let cyc = vec![vec![1], vec![0]];
        assert_eq!(topo_order(&cyc), None);
    }

    #[test]
    fn csr_acyclicity() {
        // Edges 0->1, 1->2.
        assert!(csr_is_acyclic(3, &[0, 1, 2, 2], &[1, 2]));
        // Edges 0->1, 1->0.
        assert!(!csr_is_acyclic(2, &[0, 1, 2], &[1, 0]));
    }

    #[test]
    fn bfs_visits_reachable_set() {
        let adj = vec![vec![1], vec![2], vec![], vec![2]];
        assert_eq!(bfs_reachable(&adj, &[0]), vec![true, true, true, false]);
    }
}
