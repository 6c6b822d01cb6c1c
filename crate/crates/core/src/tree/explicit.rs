use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cost, Cursor, NodePath, PathCursor, ProblemOracle, TreeShape};

#[derive(Debug, Clone)]
struct Node {
    cost: Cost,
    children: Vec<usize>,
}

/// A fully materialised tree, for fixtures and small property tests.
///
/// Child labels are positions in the parent's child list. Leaves with finite
/// cost are solutions.
#[derive(Debug, Clone)]
pub struct ExplicitTree {
    nodes: Vec<Node>,
    c_max: u64,
}

impl ExplicitTree {
    pub fn new(root_cost: Cost) -> Self {
        ExplicitTree {
            nodes: vec![Node {
                cost: root_cost,
                children: Vec::new(),
            }],
            c_max: root_cost.finite().unwrap_or(0),
        }
    }

    pub const ROOT: usize = 0;

    /// Appends a child under `parent` and returns its id.
    pub fn add_child(&mut self, parent: usize, cost: Cost) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            cost,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        if let Cost::Finite(c) = cost {
            self.c_max = self.c_max.max(c);
        }
        id
    }

    /// The thirteen-node example tree used throughout the documentation:
    ///
    /// ```text
    ///                1
    ///         1             3
    ///     inf     2      3      5
    ///           7  inf  6  4   6  8
    /// ```
    ///
    /// Its optimal solution has cost 4 and the tree truncated at 4 keeps six
    /// nodes.
    pub fn fig1() -> Self {
        let f = Cost::Finite;
        let mut t = ExplicitTree::new(f(1));
        let a = t.add_child(Self::ROOT, f(1));
        let b = t.add_child(Self::ROOT, f(3));
        t.add_child(a, Cost::Infinite);
        let a1 = t.add_child(a, f(2));
        let b0 = t.add_child(b, f(3));
        let b1 = t.add_child(b, f(5));
        t.add_child(a1, f(7));
        t.add_child(a1, Cost::Infinite);
        t.add_child(b0, f(6));
        t.add_child(b0, f(4));
        t.add_child(b1, f(6));
        t.add_child(b1, f(8));
        t
    }

    /// Random tree with monotone labels. Each node below `depth` gets between
    /// 0 and `max_children` children (the root at least one); each child adds
    /// a random increment to its parent's cost, or becomes infinite with
    /// probability `p_inf`.
    pub fn random(seed: u64, depth: usize, max_children: usize, max_step: u64, p_inf: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = ExplicitTree::new(Cost::Finite(rng.random_range(0..=max_step)));
        let mut frontier = vec![(Self::ROOT, 0usize)];
        while let Some((id, d)) = frontier.pop() {
            let parent = t.nodes[id].cost;
            let Cost::Finite(pc) = parent else { continue };
            if d == depth {
                continue;
            }
            let lo = usize::from(id == Self::ROOT);
            let k = rng.random_range(lo..=max_children);
            for _ in 0..k {
                let cost = if rng.random_bool(p_inf) {
                    Cost::Infinite
                } else {
                    Cost::Finite(pc + rng.random_range(0..=max_step))
                };
                let c = t.add_child(id, cost);
                frontier.push((c, d + 1));
            }
        }
        t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn resolve(&self, path: &NodePath) -> usize {
        path.labels()
            .iter()
            .fold(Self::ROOT, |id, &l| self.nodes[id].children[l as usize])
    }

    fn height(&self, id: usize) -> usize {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| 1 + self.height(c))
            .max()
            .unwrap_or(0)
    }
}

impl ProblemOracle for ExplicitTree {
    fn shape(&self) -> TreeShape {
        let k = self
            .nodes
            .iter()
            .map(|n| n.children.len())
            .max()
            .unwrap_or(0)
            .max(1);
        TreeShape {
            depth: self.height(Self::ROOT),
            branching: k,
            c_max: self.c_max,
            max_nodes: self.nodes.len() as u64,
        }
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        let id = self.resolve(node);
        (0..self.nodes[id].children.len() as u32).collect()
    }

    fn cost(&self, node: &NodePath) -> Cost {
        self.nodes[self.resolve(node)].cost
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        let n = &self.nodes[self.resolve(node)];
        n.children.is_empty() && n.cost.is_finite()
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        Box::new(PathCursor::new(self))
    }
}
