//! Classical branch-and-bound solvers and exact truncated-tree statistics.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::tree::{count_truncated_up_to, walk, ChildOrder, Cost, NodePath, ProblemOracle, SizeProbe, Visit};
use crate::{Error, Result};

/// Default cap on the best-first live set.
pub const DEFAULT_MAX_LIVE: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub solution: Option<NodePath>,
    pub cost: Cost,
    /// Number of cost queries.
    pub explored_nodes: u64,
    /// Number of children queries.
    pub queries: u64,
}

/// Best-first search: always expand the live node with the lowest cost.
///
/// Ties are broken by greater depth, then lexicographically smaller path, so
/// runs are reproducible. Stops when a solution is popped; with monotone
/// costs no live node can then lead to a cheaper one.
pub fn best_first(oracle: &dyn ProblemOracle) -> Result<SearchOutcome> {
    best_first_with_limit(oracle, DEFAULT_MAX_LIVE)
}

pub fn best_first_with_limit(oracle: &dyn ProblemOracle, max_live: usize) -> Result<SearchOutcome> {
    let mut out = SearchOutcome {
        solution: None,
        cost: Cost::Infinite,
        explored_nodes: 0,
        queries: 0,
    };
    if !oracle.root_present() {
        return Ok(out);
    }
    let root = NodePath::root();
    let root_cost = oracle.cost(&root);
    out.explored_nodes = 1;

    let mut live = BinaryHeap::new();
    if root_cost.is_finite() {
        live.push(Reverse((root_cost, Reverse(0usize), root)));
    }
    while let Some(Reverse((cost, _, node))) = live.pop() {
        if oracle.is_solution(&node) {
            out.solution = Some(node);
            out.cost = cost;
            return Ok(out);
        }
        out.queries += 1;
        for child in oracle.children(&node) {
            let c = oracle.cost(&child);
            out.explored_nodes += 1;
            if c.is_finite() {
                let d = child.depth();
                live.push(Reverse((c, Reverse(d), child)));
            }
        }
        if live.len() > max_live {
            return Err(Error::MemoryLimit { limit: max_live });
        }
    }
    Ok(out)
}

/// Depth-first branch-and-bound with an incumbent.
///
/// A node is pruned when its cost is infinite or strictly greater than the
/// best solution cost seen so far (initially `initial_incumbent`), so
/// subtrees tied with the incumbent are still explored.
pub fn depth_first_incumbent(
    oracle: &dyn ProblemOracle,
    initial_incumbent: Cost,
    order: ChildOrder,
) -> SearchOutcome {
    let mut incumbent = initial_incumbent;
    let mut best: Option<(Cost, NodePath)> = None;
    let mut explored = 0u64;
    let mut queries = 0u64;
    walk(oracle, order, |cur| {
        explored += 1;
        let c = cur.cost();
        if !c.is_finite() || c > incumbent {
            return Visit::Prune;
        }
        if cur.is_solution() {
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, cur.path().clone()));
                incumbent = c;
            }
            return Visit::Prune;
        }
        queries += 1;
        Visit::Descend
    });
    let (cost, solution) = match best {
        Some((c, p)) => (c, Some(p)),
        None => (Cost::Infinite, None),
    };
    SearchOutcome {
        solution,
        cost,
        explored_nodes: explored,
        queries,
    }
}

/// Size of the tree truncated at `bound`.
pub fn truncated_size(oracle: &dyn ProblemOracle, bound: Cost) -> Result<u64> {
    match count_truncated_up_to(oracle, bound, u64::MAX - 1) {
        SizeProbe::Exact(n) => Ok(n),
        SizeProbe::Exceeds(_) => Err(Error::CountOverflow),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub total_nodes: u64,
    pub leaf_count: u64,
    pub min_solution_cost: Cost,
    /// Size of the tree truncated at the minimal solution cost, or the whole
    /// tree when there is no solution.
    pub truncated_size_at_min: u64,
}

pub fn tree_stats(oracle: &dyn ProblemOracle) -> Result<TreeStats> {
    let mut total = 0u64;
    let mut leaves = 0u64;
    let mut buf = Vec::new();
    walk(oracle, ChildOrder::Label, |cur| {
        total += 1;
        // Cursor::child_labels needs &mut; ask the oracle instead.
        buf.clear();
        buf.extend(oracle.child_labels(cur.path()));
        if buf.is_empty() {
            leaves += 1;
        }
        Visit::Descend
    });
    let c_min = best_first(oracle)?.cost;
    let t_min = match c_min {
        Cost::Infinite => total,
        c => truncated_size(oracle, c)?,
    };
    Ok(TreeStats {
        total_nodes: total,
        leaf_count: leaves,
        min_solution_cost: c_min,
        truncated_size_at_min: t_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{count_nodes, truncate, ExplicitTree};

    #[test]
    fn fig1_best_first() {
        let t = ExplicitTree::fig1();
        let out = best_first(&t).unwrap();
        assert_eq!(out.cost, Cost::Finite(4));
        assert_eq!(out.solution, Some(NodePath::from(vec![1, 0, 1])));
        // root + two children for each of the five expanded nodes
        assert_eq!(out.explored_nodes, 11);
        assert_eq!(out.queries, 5);
    }

    #[test]
    fn fig1_depth_first() {
        let t = ExplicitTree::fig1();
        let out = depth_first_incumbent(&t, Cost::Infinite, ChildOrder::Label);
        assert_eq!(out.cost, Cost::Finite(4));
        // root 1, 1, inf, 2, 7, inf, 3, 3, 6, 4, 5
        assert_eq!(out.explored_nodes, 11);
        let tight = depth_first_incumbent(&t, Cost::Finite(4), ChildOrder::Label);
        assert_eq!(tight.cost, Cost::Finite(4));
        assert!(tight.explored_nodes <= out.explored_nodes);
        let too_tight = depth_first_incumbent(&t, Cost::Finite(3), ChildOrder::Label);
        assert_eq!(too_tight.cost, Cost::Infinite);
        assert!(too_tight.solution.is_none());
    }

    #[test]
    fn fig1_truncated_sizes() {
        let t = ExplicitTree::fig1();
        assert_eq!(truncated_size(&t, Cost::Finite(4)).unwrap(), 6);
        assert_eq!(truncated_size(&t, Cost::Infinite).unwrap(), 13);
        assert_eq!(truncated_size(&t, Cost::Finite(3)).unwrap(), 5);
        assert_eq!(truncated_size(&t, Cost::Finite(0)).unwrap(), 0);
        for c in 0..=9 {
            let direct = truncated_size(&t, Cost::Finite(c)).unwrap();
            assert_eq!(direct, count_nodes(&truncate(&t, Cost::Finite(c))).unwrap());
        }
    }

    #[test]
    fn fig1_stats() {
        let s = tree_stats(&ExplicitTree::fig1()).unwrap();
        assert_eq!(s.total_nodes, 13);
        assert_eq!(s.min_solution_cost, Cost::Finite(4));
        assert_eq!(s.truncated_size_at_min, 6);
        // six leaves at depth 3 plus the infinite node at depth 2
        assert_eq!(s.leaf_count, 7);
    }

    #[test]
    fn single_node() {
        let t = ExplicitTree::new(Cost::ZERO);
        let out = best_first(&t).unwrap();
        assert_eq!((out.cost, out.explored_nodes), (Cost::ZERO, 1));
        let dfs = depth_first_incumbent(&t, Cost::Infinite, ChildOrder::Label);
        assert_eq!((dfs.cost, dfs.explored_nodes), (Cost::ZERO, 1));
    }

    #[test]
    fn no_solution() {
        let mut t = ExplicitTree::new(Cost::Finite(1));
        t.add_child(ExplicitTree::ROOT, Cost::Infinite);
        t.add_child(ExplicitTree::ROOT, Cost::Infinite);
        let s = tree_stats(&t).unwrap();
        assert_eq!(s.min_solution_cost, Cost::Infinite);
        assert_eq!(s.truncated_size_at_min, s.total_nodes);
        assert!(best_first(&t).unwrap().solution.is_none());
    }

    #[test]
    fn memory_limit_is_reported() {
        let mut t = ExplicitTree::new(Cost::ZERO);
        for c in 1..=3 {
            let k = t.add_child(ExplicitTree::ROOT, Cost::Finite(c));
            t.add_child(k, Cost::Finite(c));
        }
        match best_first_with_limit(&t, 2) {
            Err(Error::MemoryLimit { limit: 2 }) => {}
            other => panic!("expected memory limit, got {other:?}"),
        }
    }
}
