use super::{Cost, Cursor, NodePath, ProblemOracle, TreeShape};

/// The subtree of nodes whose cost is at most `bound`.
///
/// Children above the bound are dropped; surviving children keep their
/// original labels. If the root itself exceeds the bound the tree is empty.
/// The inner oracle should be monotone, otherwise a removed node may hide
/// cheaper descendants.
#[derive(Debug, Clone)]
pub struct Truncated<O> {
    inner: O,
    bound: Cost,
}

pub fn truncate<O: ProblemOracle>(inner: O, bound: Cost) -> Truncated<O> {
    Truncated { inner, bound }
}

impl<O> Truncated<O> {
    pub fn bound(&self) -> Cost {
        self.bound
    }
}

impl<O: ProblemOracle> ProblemOracle for Truncated<O> {
    fn shape(&self) -> TreeShape {
        self.inner.shape()
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        self.inner
            .child_labels(node)
            .into_iter()
            .filter(|&l| self.inner.cost(&node.child(l)) <= self.bound)
            .collect()
    }

    fn cost(&self, node: &NodePath) -> Cost {
        self.inner.cost(node)
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        self.inner.is_solution(node)
    }

    fn root_present(&self) -> bool {
        self.inner.root_present() && self.inner.cost(&NodePath::root()) <= self.bound
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        Box::new(TruncatedCursor {
            inner: self.inner.cursor(),
            bound: self.bound,
        })
    }
}

struct TruncatedCursor<'a> {
    inner: Box<dyn Cursor + 'a>,
    bound: Cost,
}

impl Cursor for TruncatedCursor<'_> {
    fn path(&self) -> &NodePath {
        self.inner.path()
    }

    fn cost(&self) -> Cost {
        self.inner.cost()
    }

    fn is_solution(&self) -> bool {
        self.inner.is_solution()
    }

    fn child_labels(&mut self, out: &mut Vec<u32>) {
        self.inner.child_labels(out);
        let mut keep = Vec::with_capacity(out.len());
        for &l in out.iter() {
            self.inner.descend(l);
            if self.inner.cost() <= self.bound {
                keep.push(l);
            }
            self.inner.ascend();
        }
        *out = keep;
    }

    fn descend(&mut self, label: u32) {
        self.inner.descend(label)
    }

    fn ascend(&mut self) {
        self.inner.ascend()
    }
}
