use super::bound::SkBoundOracle;
use super::DiscretizedSkInstance;
use crate::search::depth_first_incumbent;
use crate::tree::{monotone_wrap, ChildOrder, Cost};

/// Exact minima `E[l]` of the sub-Hamiltonians on spins `l..n`, with one
/// minimising assignment each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixMinima {
    e: Vec<i64>,
    states: Vec<Vec<i8>>,
}

impl SuffixMinima {
    /// `E[0..=n]`; `E[n] = E[n-1] = 0`.
    pub fn energies(&self) -> &[i64] {
        &self.e
    }

    /// Minimising assignment of spins `l..n`, first spin `+1`.
    pub fn state(&self, l: usize) -> &[i8] {
        &self.states[l]
    }

    pub fn min_energy(&self) -> i64 {
        self.e[0]
    }

    pub fn ground_state(&self) -> &[i8] {
        &self.states[0]
    }
}

/// Solves the suffix problems from the shortest up. Each one is a
/// depth-first branch-and-bound whose bound uses the minima already found,
/// seeded with the previous ground state extended by the best choice of the
/// new spin.
pub fn suffix_minima(inst: &DiscretizedSkInstance) -> SuffixMinima {
    let n = inst.n();
    let mut e = vec![0i64; n + 1];
    let mut states = vec![Vec::new(); n + 1];
    if n >= 1 {
        states[n - 1] = vec![1];
    }
    for l in (0..n.saturating_sub(1)).rev() {
        let row = inst.row(l);
        let z = &states[l + 1];
        let m: i64 = z.iter().enumerate().map(|(k, &s)| row[l + 1 + k] * i64::from(s)).sum();
        let warm = e[l + 1] - m.abs() + inst.shift();
        let oracle = monotone_wrap(SkBoundOracle::new(inst, &e, l, true));
        let out = depth_first_incumbent(&oracle, Cost::Finite(warm as u64), ChildOrder::CostAscending);
        let path = out.solution.expect("the warm start is attainable, so a solution exists");
        let cost = out.cost.finite().expect("solutions have finite cost") as i64;
        states[l] = oracle.inner().assignment(&path);
        e[l] = cost - inst.shift();
    }
    SuffixMinima { e, states }
}
