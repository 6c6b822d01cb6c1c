use super::{DiscretizedSkInstance, SuffixMinima};
use crate::tree::{monotone_wrap, Cost, Cursor, Monotone, NodePath, ProblemOracle, TreeShape};

/// Three-term lower bound on every completion of the partial assignment `x`
/// of spins `0..x.len()`: fixed interactions, minus the cross-term absolute
/// values, plus the minimum of the remaining sub-Hamiltonian.
pub fn bound_a(inst: &DiscretizedSkInstance, suffix: &SuffixMinima, x: &[i8]) -> i64 {
    block_bound(inst, suffix.energies(), 0, x)
}

/// Same bound for the block of spins `start..n` with `x` fixing
/// `start..start + x.len()`.
fn block_bound(inst: &DiscretizedSkInstance, e: &[i64], start: usize, x: &[i8]) -> i64 {
    let n = inst.n();
    let k = start + x.len();
    let mut fixed = 0;
    for (a, &xa) in x.iter().enumerate() {
        let row = inst.row(start + a);
        for (b, &xb) in x.iter().enumerate().skip(a + 1) {
            fixed += row[start + b] * i64::from(xa * xb);
        }
    }
    let mut cross = 0;
    for j in k..n {
        let h: i64 = x
            .iter()
            .enumerate()
            .map(|(a, &xa)| inst.coupling(start + a, j) * i64::from(xa))
            .sum();
        cross += h.abs();
    }
    fixed - cross + e[k]
}

fn spin(label: u32) -> i8 {
    if label == 0 {
        1
    } else {
        -1
    }
}

/// Binary branch-and-bound tree over the spins `start..n` of an instance.
///
/// Depth-`k` nodes fix the next `k` spins, label 0 meaning `+1` and label 1
/// meaning `-1`. With `fix_first` the first spin of the block is pinned to
/// `+1` (the energy is invariant under global flip) and the tree is one
/// level shallower. Costs are the bound plus the instance shift; the root
/// costs 0. Not monotone on its own, see [`sk_oracle`].
///
/// `e` must hold the exact suffix minima for every index above `start`.
#[derive(Debug, Clone, Copy)]
pub struct SkBoundOracle<'a> {
    inst: &'a DiscretizedSkInstance,
    e: &'a [i64],
    start: usize,
    fix_first: bool,
}

pub type SkOracle<'a> = Monotone<SkBoundOracle<'a>>;

/// Monotone oracle for the whole instance.
pub fn sk_oracle<'a>(inst: &'a DiscretizedSkInstance, suffix: &'a SuffixMinima, fix_first_spin: bool) -> SkOracle<'a> {
    monotone_wrap(SkBoundOracle::new(inst, suffix.energies(), 0, fix_first_spin))
}

impl<'a> SkBoundOracle<'a> {
    pub(crate) fn new(inst: &'a DiscretizedSkInstance, e: &'a [i64], start: usize, fix_first: bool) -> Self {
        assert_eq!(e.len(), inst.n() + 1);
        assert!(start < inst.n() || (start == inst.n() && !fix_first));
        SkBoundOracle {
            inst,
            e,
            start,
            fix_first,
        }
    }

    fn pinned(&self) -> usize {
        usize::from(self.fix_first)
    }

    /// Depth of the leaves.
    pub fn leaf_depth(&self) -> usize {
        self.inst.n() - self.start - self.pinned()
    }

    /// Spin values of the block encoded by `path`.
    pub fn assignment(&self, path: &NodePath) -> Vec<i8> {
        let mut x = Vec::with_capacity(path.depth() + 1);
        if self.fix_first {
            x.push(1);
        }
        x.extend(path.labels().iter().map(|&l| spin(l)));
        x
    }

    fn shifted(&self, bound: i64) -> Cost {
        let c = bound + self.inst.shift();
        debug_assert!(c >= 0, "shifted bound {c} is negative");
        Cost::Finite(c as u64)
    }
}

impl ProblemOracle for SkBoundOracle<'_> {
    fn shape(&self) -> TreeShape {
        TreeShape::new(self.leaf_depth(), 2, self.inst.c_max())
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        if node.depth() < self.leaf_depth() {
            vec![0, 1]
        } else {
            Vec::new()
        }
    }

    fn cost(&self, node: &NodePath) -> Cost {
        if node.depth() == 0 {
            return Cost::ZERO;
        }
        self.shifted(block_bound(self.inst, self.e, self.start, &self.assignment(node)))
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        node.depth() == self.leaf_depth()
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        Box::new(SkCursor::new(*self))
    }
}

/// Incremental walker: keeps the local fields `h_j` of the fixed spins on
/// every free spin, so each edge costs `O(n)`.
struct SkCursor<'a> {
    o: SkBoundOracle<'a>,
    path: NodePath,
    x: Vec<i8>,
    h: Vec<i64>,
    fixed: i64,
    undo: Vec<i64>,
    costs: Vec<Cost>,
}

impl<'a> SkCursor<'a> {
    fn new(o: SkBoundOracle<'a>) -> Self {
        let n = o.inst.n();
        let mut x = vec![0i8; n];
        let mut h = vec![0i64; n];
        if o.fix_first {
            x[o.start] = 1;
            h.copy_from_slice(o.inst.row(o.start));
        }
        SkCursor {
            o,
            path: NodePath::root(),
            x,
            h,
            fixed: 0,
            undo: Vec::new(),
            costs: vec![Cost::ZERO],
        }
    }

    /// Index of the spin set by the next descent.
    fn next_spin(&self) -> usize {
        self.o.start + self.o.pinned() + self.path.depth()
    }
}

impl Cursor for SkCursor<'_> {
    fn path(&self) -> &NodePath {
        &self.path
    }

    fn cost(&self) -> Cost {
        *self.costs.last().expect("cursor stack is never empty")
    }

    fn is_solution(&self) -> bool {
        self.path.depth() == self.o.leaf_depth()
    }

    fn child_labels(&mut self, out: &mut Vec<u32>) {
        out.clear();
        if self.path.depth() < self.o.leaf_depth() {
            out.extend([0, 1]);
        }
    }

    fn descend(&mut self, label: u32) {
        let i = self.next_spin();
        let s = spin(label);
        let s64 = i64::from(s);
        self.undo.push(self.fixed);
        self.fixed += s64 * self.h[i];
        let row = self.o.inst.row(i);
        let mut cross = 0;
        for (h, a) in self.h[i + 1..].iter_mut().zip(&row[i + 1..]) {
            *h += s64 * a;
            cross += h.abs();
        }
        self.x[i] = s;
        self.path.push(label);
        let bound = self.fixed - cross + self.o.e[i + 1];
        self.costs.push(self.o.shifted(bound));
    }

    fn ascend(&mut self) {
        self.path.pop();
        let i = self.next_spin();
        let s64 = i64::from(self.x[i]);
        let row = self.o.inst.row(i);
        for (h, a) in self.h[i + 1..].iter_mut().zip(&row[i + 1..]) {
            *h -= s64 * a;
        }
        self.x[i] = 0;
        self.fixed = self.undo.pop().expect("ascend below root");
        self.costs.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sk::{discretize, suffix_minima, SkInstance};
    use crate::tree::{walk, ChildOrder, Visit};

    #[test]
    fn two_spins() {
        let inst = DiscretizedSkInstance::from_integers(2, 1, |_, _| 4);
        let suffix = suffix_minima(&inst);
        assert_eq!(suffix.energies(), &[-4, 0, 0]);
        let o = sk_oracle(&inst, &suffix, false);
        let leaves: Vec<Cost> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|l| o.cost(&NodePath::from(l.to_vec())))
            .collect();
        let f = Cost::Finite;
        assert_eq!(leaves, vec![f(8), f(0), f(0), f(8)]);
    }

    #[test]
    fn cursor_matches_path_costs() {
        let inst = discretize(&SkInstance::generate(7, 11), 8).unwrap();
        let suffix = suffix_minima(&inst);
        for fix in [false, true] {
            let o = SkBoundOracle::new(&inst, suffix.energies(), 0, fix);
            let mut seen = 0;
            walk(&o, ChildOrder::CostAscending, |cur| {
                assert_eq!(cur.cost(), o.cost(cur.path()), "{}", cur.path());
                seen += 1;
                Visit::Descend
            });
            assert_eq!(seen, (1 << (o.leaf_depth() + 1)) - 1);
        }
    }

    #[test]
    fn leaves_are_exact_energies() {
        let inst = discretize(&SkInstance::generate(6, 2), 7).unwrap();
        let suffix = suffix_minima(&inst);
        let o = SkBoundOracle::new(&inst, suffix.energies(), 0, false);
        for bits in 0u32..64 {
            let labels: Vec<u32> = (0..6).map(|k| (bits >> k) & 1).collect();
            let path = NodePath::from(labels);
            let x = o.assignment(&path);
            assert_eq!(o.cost(&path), Cost::Finite((inst.energy(&x) + inst.shift()) as u64));
            assert_eq!(bound_a(&inst, &suffix, &x), inst.energy(&x));
        }
    }
}
