use super::{Cost, Cursor, NodePath, PathCursor, ProblemOracle, TreeShape};

/// Degree reduction: every node with more than two children is replaced by a
/// balanced binary tree of splitter nodes.
///
/// Splitters carry their parent's cost and are never solutions. A node with
/// `m > 2` children gains `m - 2` splitters, so the node count at most
/// doubles and depth grows by a factor of at most `ceil(log2 k)`.
#[derive(Debug, Clone)]
pub struct Binarized<O> {
    inner: O,
}

pub fn binarize<O: ProblemOracle>(inner: O) -> Binarized<O> {
    Binarized { inner }
}

/// Where a binarized path lands in the inner tree.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Site {
    Real(NodePath),
    /// Splitter covering positions `lo..hi` of the inner node's child list.
    Splitter { node: NodePath, lo: usize, hi: usize },
}

fn halves(lo: usize, hi: usize) -> [(usize, usize); 2] {
    let mid = lo + (hi - lo).div_ceil(2);
    [(lo, mid), (mid, hi)]
}

impl<O: ProblemOracle> Binarized<O> {
    fn part(&self, node: &NodePath, labels: &[u32], lo: usize, hi: usize) -> Site {
        if hi - lo == 1 {
            Site::Real(node.child(labels[lo]))
        } else {
            Site::Splitter {
                node: node.clone(),
                lo,
                hi,
            }
        }
    }

    fn sub_sites(&self, site: &Site) -> Vec<Site> {
        match site {
            Site::Real(node) => {
                let labels = self.inner.child_labels(node);
                if labels.len() <= 2 {
                    labels.iter().map(|&l| Site::Real(node.child(l))).collect()
                } else {
                    halves(0, labels.len())
                        .iter()
                        .map(|&(lo, hi)| self.part(node, &labels, lo, hi))
                        .collect()
                }
            }
            Site::Splitter { node, lo, hi } => {
                let labels = self.inner.child_labels(node);
                halves(*lo, *hi)
                    .iter()
                    .map(|&(a, b)| self.part(node, &labels, a, b))
                    .collect()
            }
        }
    }

    fn resolve(&self, path: &NodePath) -> Site {
        let mut site = Site::Real(NodePath::root());
        for &l in path.labels() {
            site = self.sub_sites(&site).swap_remove(l as usize);
        }
        site
    }
}

impl<O: ProblemOracle> ProblemOracle for Binarized<O> {
    fn shape(&self) -> TreeShape {
        let s = self.inner.shape();
        let levels = s.branching.max(2).next_power_of_two().trailing_zeros() as usize;
        TreeShape {
            depth: s.depth * levels,
            branching: 2,
            c_max: s.c_max,
            max_nodes: s.max_nodes.saturating_mul(2),
        }
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        let n = self.sub_sites(&self.resolve(node)).len();
        (0..n as u32).collect()
    }

    fn cost(&self, node: &NodePath) -> Cost {
        match self.resolve(node) {
            Site::Real(p) | Site::Splitter { node: p, .. } => self.inner.cost(&p),
        }
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        match self.resolve(node) {
            Site::Real(p) => self.inner.is_solution(&p),
            Site::Splitter { .. } => false,
        }
    }

    fn root_present(&self) -> bool {
        self.inner.root_present()
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        Box::new(PathCursor::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{count_nodes, ExplicitTree};

    #[test]
    fn three_children_gain_one_splitter() {
        let mut t = ExplicitTree::new(Cost::Finite(0));
        for c in [1, 2, 3] {
            t.add_child(ExplicitTree::ROOT, Cost::Finite(c));
        }
        let b = binarize(&t);
        assert_eq!(count_nodes(&b).unwrap(), 5);
        // splitter is the first child of the root, holding the first two leaves
        let splitter = NodePath::root().child(0);
        assert!(!b.is_solution(&splitter));
        assert_eq!(b.cost(&splitter), Cost::Finite(0));
        assert_eq!(b.cost(&splitter.child(1)), Cost::Finite(2));
        assert_eq!(b.cost(&NodePath::root().child(1)), Cost::Finite(3));
        assert!(b.child_labels(&splitter.child(0)).is_empty());
    }

    #[test]
    fn binary_tree_is_unchanged() {
        let t = ExplicitTree::fig1();
        let b = binarize(&t);
        assert_eq!(count_nodes(&b).unwrap(), 13);
        let leaf = NodePath::from(vec![1, 0, 1]);
        assert_eq!(b.cost(&leaf), t.cost(&leaf));
        assert!(b.is_solution(&leaf));
    }
}
