use super::{Cost, Cursor, NodePath, ProblemOracle, TreeShape};

/// Oracle whose cost is the running maximum of the inner cost along the path.
///
/// Costs become nondecreasing on every root-to-leaf path. The bound stays
/// valid: an ancestor's label already bounds every solution below it.
#[derive(Debug, Clone)]
pub struct Monotone<O> {
    inner: O,
}

pub fn monotone_wrap<O: ProblemOracle>(inner: O) -> Monotone<O> {
    Monotone { inner }
}

impl<O> Monotone<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: ProblemOracle> ProblemOracle for Monotone<O> {
    fn shape(&self) -> TreeShape {
        self.inner.shape()
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        self.inner.child_labels(node)
    }

    fn cost(&self, node: &NodePath) -> Cost {
        node.prefixes()
            .map(|p| self.inner.cost(&p))
            .max()
            .expect("at least the root prefix")
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        self.inner.is_solution(node)
    }

    fn root_present(&self) -> bool {
        self.inner.root_present()
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        let inner = self.inner.cursor();
        let root = inner.cost();
        Box::new(MonotoneCursor {
            inner,
            maxima: vec![root],
        })
    }
}

struct MonotoneCursor<'a> {
    inner: Box<dyn Cursor + 'a>,
    maxima: Vec<Cost>,
}

impl Cursor for MonotoneCursor<'_> {
    fn path(&self) -> &NodePath {
        self.inner.path()
    }

    fn cost(&self) -> Cost {
        *self.maxima.last().expect("nonempty")
    }

    fn is_solution(&self) -> bool {
        self.inner.is_solution()
    }

    fn child_labels(&mut self, out: &mut Vec<u32>) {
        self.inner.child_labels(out)
    }

    fn descend(&mut self, label: u32) {
        self.inner.descend(label);
        let c = self.cost().max(self.inner.cost());
        self.maxima.push(c);
    }

    fn ascend(&mut self) {
        self.inner.ascend();
        self.maxima.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::ExplicitTree;

    fn chain(costs: &[Cost]) -> ExplicitTree {
        let mut t = ExplicitTree::new(costs[0]);
        let mut at = ExplicitTree::ROOT;
        for &c in &costs[1..] {
            at = t.add_child(at, c);
        }
        t
    }

    fn wrapped_costs(raw: &[Cost]) -> Vec<Cost> {
        let t = monotone_wrap(chain(raw));
        let mut path = NodePath::root();
        let mut out = vec![t.cost(&path)];
        for _ in 1..raw.len() {
            path.push(0);
            out.push(t.cost(&path));
        }
        // cursor route must agree with the path route
        let mut cur = t.cursor();
        let mut via_cursor = vec![cur.cost()];
        for _ in 1..raw.len() {
            cur.descend(0);
            via_cursor.push(cur.cost());
        }
        assert_eq!(out, via_cursor);
        out
    }

    #[test]
    fn running_max() {
        let f = Cost::Finite;
        assert_eq!(wrapped_costs(&[f(1), f(3), f(2)]), vec![f(1), f(3), f(3)]);
        assert_eq!(wrapped_costs(&[f(1), f(1), f(3)]), vec![f(1), f(1), f(3)]);
        assert_eq!(
            wrapped_costs(&[f(0), Cost::Infinite, f(5)]),
            vec![f(0), Cost::Infinite, Cost::Infinite]
        );
    }
}
