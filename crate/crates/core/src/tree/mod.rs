//! The abstract search-tree model.
//!
//! A search space is a rooted tree. Every node is labelled with a lower bound
//! on the cost of any solution below it, either a nonnegative integer no
//! larger than the oracle's `c_max` or [`Cost::Infinite`] when the subset
//! holds no valid solution. Nodes are identified by the branch labels taken
//! from the root ([`NodePath`]), so nothing but the current path ever has to
//! be materialised.
//!
//! Oracles answer path queries directly, and additionally hand out a
//! [`Cursor`] that walks the tree one edge at a time. Problem adapters whose
//! bounds can be updated incrementally (the spin-glass bound is `O(n)` per
//! edge instead of `O(n^2)` per node) implement their own cursor; everything
//! else uses [`PathCursor`].

mod binarize;
mod explicit;
mod monotone;
mod truncate;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub use binarize::{binarize, Binarized};
pub use explicit::ExplicitTree;
pub use monotone::{monotone_wrap, Monotone};
pub use truncate::{truncate, Truncated};

/// Lower-bound label of a node.
///
/// Variant order gives the total order: every finite cost is below
/// `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Infinite => None,
        }
    }
}

impl From<u64> for Cost {
    fn from(c: u64) -> Self {
        Cost::Finite(c)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(c) => s.serialize_u64(*c),
            Cost::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Branch labels from the root to a node. The root is the empty path.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodePath(Vec<u32>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn child(&self, label: u32) -> NodePath {
        let mut labels = Vec::with_capacity(self.0.len() + 1);
        labels.extend_from_slice(&self.0);
        labels.push(label);
        NodePath(labels)
    }

    pub fn parent(&self) -> Option<NodePath> {
        let (_, head) = self.0.split_last()?;
        Some(NodePath(head.to_vec()))
    }

    /// All proper and improper prefixes, root first.
    pub fn prefixes(&self) -> impl Iterator<Item = NodePath> + '_ {
        (0..=self.0.len()).map(move |k| NodePath(self.0[..k].to_vec()))
    }

    pub fn push(&mut self, label: u32) {
        self.0.push(label);
    }

    pub fn pop(&mut self) -> Option<u32> {
        self.0.pop()
    }
}

impl From<Vec<u32>> for NodePath {
    fn from(labels: Vec<u32>) -> Self {
        NodePath(labels)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("/")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Static metadata an oracle declares about its tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeShape {
    /// Upper bound on the depth of any node.
    pub depth: usize,
    /// Upper bound on the number of children of any node.
    pub branching: usize,
    /// Upper bound on every finite cost label.
    pub c_max: u64,
    /// Upper bound on the number of nodes.
    pub max_nodes: u64,
}

impl TreeShape {
    pub fn new(depth: usize, branching: usize, c_max: u64) -> Self {
        TreeShape {
            depth,
            branching,
            c_max,
            max_nodes: full_tree_size(depth, branching),
        }
    }
}

/// Number of nodes of a complete `k`-ary tree of depth `d`, saturating.
pub fn full_tree_size(depth: usize, branching: usize) -> u64 {
    let k = branching as u64;
    let mut level = 1u64;
    let mut total = 1u64;
    for _ in 0..depth {
        level = level.saturating_mul(k);
        total = total.saturating_add(level);
    }
    total
}

/// Query access to an implicit branch-and-bound tree.
///
/// Implementations must be deterministic and safe to share between threads.
/// Child paths extend the parent by one label; labels need not be contiguous
/// (a truncated tree keeps its parent's labels).
pub trait ProblemOracle: Sync {
    fn shape(&self) -> TreeShape;

    /// Labels of the children of `node`, in their natural visiting order.
    fn child_labels(&self, node: &NodePath) -> Vec<u32>;

    fn cost(&self, node: &NodePath) -> Cost;

    /// True only for leaves with finite cost that represent a valid solution.
    fn is_solution(&self, node: &NodePath) -> bool;

    /// False when the tree is empty (a truncation that removed the root).
    fn root_present(&self) -> bool {
        true
    }

    fn children(&self, node: &NodePath) -> Vec<NodePath> {
        self.child_labels(node)
            .into_iter()
            .map(|l| node.child(l))
            .collect()
    }

    /// A cursor positioned at the root.
    fn cursor(&self) -> Box<dyn Cursor + '_>;
}

impl<O: ProblemOracle + ?Sized> ProblemOracle for &O {
    fn shape(&self) -> TreeShape {
        (**self).shape()
    }
    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        (**self).child_labels(node)
    }
    fn cost(&self, node: &NodePath) -> Cost {
        (**self).cost(node)
    }
    fn is_solution(&self, node: &NodePath) -> bool {
        (**self).is_solution(node)
    }
    fn root_present(&self) -> bool {
        (**self).root_present()
    }
    fn cursor(&self) -> Box<dyn Cursor + '_> {
        (**self).cursor()
    }
}

/// Stateful walker over an oracle's tree.
///
/// `descend` must only be called with a label returned by `child_labels` at
/// the current node, and `ascend` never at the root.
pub trait Cursor {
    fn path(&self) -> &NodePath;
    fn cost(&self) -> Cost;
    fn is_solution(&self) -> bool;
    fn child_labels(&mut self, out: &mut Vec<u32>);
    fn descend(&mut self, label: u32);
    fn ascend(&mut self);

    fn depth(&self) -> usize {
        self.path().depth()
    }
}

/// Cursor that answers every query through the oracle's path interface.
pub struct PathCursor<'a> {
    oracle: &'a dyn ProblemOracle,
    path: NodePath,
    costs: Vec<Cost>,
}

impl<'a> PathCursor<'a> {
    pub fn new(oracle: &'a dyn ProblemOracle) -> Self {
        let path = NodePath::root();
        let root = oracle.cost(&path);
        PathCursor {
            oracle,
            path,
            costs: vec![root],
        }
    }
}

impl Cursor for PathCursor<'_> {
    fn path(&self) -> &NodePath {
        &self.path
    }

    fn cost(&self) -> Cost {
        *self.costs.last().expect("cursor stack is never empty")
    }

    fn is_solution(&self) -> bool {
        self.oracle.is_solution(&self.path)
    }

    fn child_labels(&mut self, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.oracle.child_labels(&self.path));
    }

    fn descend(&mut self, label: u32) {
        self.path.push(label);
        self.costs.push(self.oracle.cost(&self.path));
    }

    fn ascend(&mut self) {
        self.path.pop();
        self.costs.pop();
    }
}

/// Order in which [`walk`] visits the children of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildOrder {
    /// The oracle's label order (left to right).
    #[default]
    Label,
    /// Cheapest child first; ties keep label order.
    CostAscending,
}

/// What [`walk`] should do after visiting a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Prune,
    Stop,
}

/// Depth-first preorder traversal driven by `visit`.
///
/// Returns `false` if the visitor stopped the walk early.
pub fn walk<F>(oracle: &dyn ProblemOracle, order: ChildOrder, mut visit: F) -> bool
where
    F: FnMut(&dyn Cursor) -> Visit,
{
    if !oracle.root_present() {
        return true;
    }
    let mut cur = oracle.cursor();
    match visit(&*cur) {
        Visit::Stop => return false,
        Visit::Prune => return true,
        Visit::Descend => {}
    }

    struct Frame {
        labels: Vec<u32>,
        next: usize,
    }
    let mut spare: Vec<Vec<u32>> = Vec::new();
    let mut probe: Vec<(Cost, u32)> = Vec::new();
    let mut expand = |cur: &mut dyn Cursor, spare: &mut Vec<Vec<u32>>| -> Frame {
        let mut labels = spare.pop().unwrap_or_default();
        cur.child_labels(&mut labels);
        if order == ChildOrder::CostAscending && labels.len() > 1 {
            probe.clear();
            for &l in &labels {
                cur.descend(l);
                probe.push((cur.cost(), l));
                cur.ascend();
            }
            probe.sort_by_key(|&(c, _)| c);
            labels.clear();
            labels.extend(probe.iter().map(|&(_, l)| l));
        }
        Frame { labels, next: 0 }
    };

    let mut stack = vec![expand(&mut *cur, &mut spare)];
    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.labels.len() {
            let done = stack.pop().expect("nonempty");
            spare.push(done.labels);
            if !stack.is_empty() {
                cur.ascend();
            }
            continue;
        }
        let label = frame.labels[frame.next];
        frame.next += 1;
        cur.descend(label);
        match visit(&*cur) {
            Visit::Stop => return false,
            Visit::Prune => cur.ascend(),
            Visit::Descend => {
                let f = expand(&mut *cur, &mut spare);
                stack.push(f);
            }
        }
    }
    true
}

/// Result of a node count that gives up past a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeProbe {
    Exact(u64),
    /// The tree has more than this many nodes.
    Exceeds(u64),
}

/// Exact number of nodes reachable from the root.
pub fn count_nodes(oracle: &dyn ProblemOracle) -> Result<u64> {
    let mut count: u64 = 0;
    let mut overflow = false;
    walk(oracle, ChildOrder::Label, |_| match count.checked_add(1) {
        Some(c) => {
            count = c;
            Visit::Descend
        }
        None => {
            overflow = true;
            Visit::Stop
        }
    });
    if overflow {
        return Err(Error::CountOverflow);
    }
    Ok(count)
}

/// Counts nodes with cost at most `bound`, stopping once `limit` is passed.
///
/// Equivalent to counting `truncate(oracle, bound)` but without probing
/// children twice.
pub fn count_truncated_up_to(oracle: &dyn ProblemOracle, bound: Cost, limit: u64) -> SizeProbe {
    let mut count = 0u64;
    let complete = walk(oracle, ChildOrder::Label, |cur| {
        if cur.cost() > bound {
            return Visit::Prune;
        }
        count += 1;
        if count > limit {
            Visit::Stop
        } else {
            Visit::Descend
        }
    });
    if complete {
        SizeProbe::Exact(count)
    } else {
        SizeProbe::Exceeds(limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_order() {
        assert!(Cost::Finite(3) < Cost::Finite(4));
        assert!(Cost::Finite(u64::MAX) < Cost::Infinite);
        assert_eq!(Cost::Infinite.max(Cost::Finite(2)), Cost::Infinite);
        assert_eq!(Cost::Finite(7).to_string(), "7");
        assert_eq!(serde_json::to_string(&Cost::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn path_basics() {
        let p = NodePath::root().child(1).child(0);
        assert_eq!(p.depth(), 2);
        assert_eq!(p.parent().unwrap().labels(), &[1]);
        assert_eq!(p.prefixes().count(), 3);
        assert_eq!(p.to_string(), "/1.0");
        assert!(NodePath::root() < p);
        assert!(NodePath::from(vec![0, 5]) < NodePath::from(vec![1]));
    }

    #[test]
    fn full_tree_sizes() {
        assert_eq!(full_tree_size(0, 2), 1);
        assert_eq!(full_tree_size(3, 2), 15);
        assert_eq!(full_tree_size(200, 2), u64::MAX);
    }

    #[test]
    fn bounded_count_on_fig1() {
        let t = ExplicitTree::fig1();
        assert_eq!(count_truncated_up_to(&t, Cost::Infinite, 100), SizeProbe::Exact(13));
        assert_eq!(count_truncated_up_to(&t, Cost::Finite(4), 6), SizeProbe::Exact(6));
        assert_eq!(count_truncated_up_to(&t, Cost::Finite(4), 5), SizeProbe::Exceeds(5));
        assert_eq!(count_truncated_up_to(&t, Cost::Finite(0), 5), SizeProbe::Exact(0));
    }

    #[test]
    fn cost_ordered_walk_visits_cheapest_child_first() {
        let t = ExplicitTree::fig1();
        let mut seen = Vec::new();
        walk(&t, ChildOrder::CostAscending, |c| {
            seen.push(c.cost());
            Visit::Descend
        });
        let f = Cost::Finite;
        let expected = vec![
            f(1),
            f(1),
            f(2),
            f(7),
            Cost::Infinite,
            Cost::Infinite,
            f(3),
            f(3),
            f(4),
            f(6),
            f(5),
            f(6),
            f(8),
        ];
        assert_eq!(seen, expected);
    }
}
