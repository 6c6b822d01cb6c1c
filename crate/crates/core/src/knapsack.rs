//! 0/1 knapsack as a branch-and-bound tree over its fractional relaxation.
//!
//! Each node fixes some items in or out. Its bound is the greedy (Dantzig)
//! LP relaxation of the remaining problem; when that relaxation takes one
//! item fractionally, the node branches on that item. Maximisation is turned
//! into the nonnegative minimisation the tree model needs by reporting
//! `sum(v) - floor(relaxation)`.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::tree::{monotone_wrap, Cost, Cursor, Monotone, NodePath, PathCursor, ProblemOracle, TreeShape};
use crate::{Error, Result};

/// Largest table `dp_optimum` will allocate.
pub const DP_CELL_LIMIT: u128 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Item {
    pub weight: u64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    items: Vec<Item>,
    capacity: u64,
    /// Item indices by decreasing value density, ties to the smaller index.
    order: Vec<usize>,
    total_value: u64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<Item>, capacity: u64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidInstance("knapsack needs at least one item".into()));
        }
        if let Some(k) = items.iter().position(|it| it.weight == 0 || it.value == 0) {
            return Err(Error::InvalidInstance(format!(
                "item {} has a zero weight or value",
                k + 1
            )));
        }
        let total_value = items
            .iter()
            .try_fold(0u64, |s, it| s.checked_add(it.value))
            .ok_or_else(|| Error::InvalidInstance("total value overflows".into()))?;
        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by(|&a, &b| {
            let (ia, ib) = (items[a], items[b]);
            // v_a / w_a > v_b / w_b, compared exactly
            let lhs = u128::from(ia.value) * u128::from(ib.weight);
            let rhs = u128::from(ib.value) * u128::from(ia.weight);
            rhs.cmp(&lhs).then(a.cmp(&b))
        });
        Ok(KnapsackInstance {
            items,
            capacity,
            order,
            total_value,
        })
    }

    /// Builds from `(weight, value)` pairs.
    pub fn from_pairs(pairs: &[(u64, u64)], capacity: u64) -> Result<Self> {
        Self::new(
            pairs.iter().map(|&(weight, value)| Item { weight, value }).collect(),
            capacity,
        )
    }

    /// Random instance with weights and values uniform in `1..=max_w` and
    /// `1..=max_v`.
    pub fn random(seed: u64, n: usize, max_w: u64, max_v: u64, capacity: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let items = (0..n.max(1))
            .map(|_| Item {
                weight: rng.random_range(1..=max_w.max(1)),
                value: rng.random_range(1..=max_v.max(1)),
            })
            .collect();
        Self::new(items, capacity).expect("random items are positive")
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn total_value(&self) -> u64 {
        self.total_value
    }

    /// Text format: `n W`, then one `w v` line per item.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.items.len(), self.capacity);
        for it in &self.items {
            s.push_str(&format!("{} {}\n", it.weight, it.value));
        }
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_string(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let nums = |ln: usize, line: &str| -> Result<(u64, u64)> {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(err(ln, format!("expected two integers, got {line:?}")));
            }
            let a = f[0].parse().map_err(|e| err(ln, format!("{e}")))?;
            let b = f[1].parse().map_err(|e| err(ln, format!("{e}")))?;
            Ok((a, b))
        };
        let (n, capacity) = nums(1, header)?;
        let mut pairs = Vec::new();
        for (k, line) in lines {
            pairs.push(nums(k + 1, line)?);
        }
        if pairs.len() as u64 != n {
            return Err(err(0, format!("header announces {n} items, found {}", pairs.len())));
        }
        Self::from_pairs(&pairs, capacity)
    }
}

/// Items decided so far: `Some(true)` packed, `Some(false)` left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedVars(Vec<Option<bool>>);

impl FixedVars {
    pub fn free(n: usize) -> Self {
        FixedVars(vec![None; n])
    }

    pub fn set(&mut self, item: usize, packed: bool) {
        self.0[item] = Some(packed);
    }

    pub fn get(&self, item: usize) -> Option<bool> {
        self.0[item]
    }
}

/// The one item the relaxation takes partially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    /// 0-based item index.
    pub item: usize,
    /// Capacity left for it, strictly between 0 and its weight.
    pub taken_weight: u64,
}

/// Value of the LP relaxation: `whole + v_f * taken / w_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relaxation {
    pub whole: u64,
    pub fractional: Option<Fraction>,
}

impl Relaxation {
    pub fn floor(&self, inst: &KnapsackInstance) -> u64 {
        self.whole
            + self.fractional.map_or(0, |f| {
                let it = inst.items[f.item];
                (u128::from(it.value) * u128::from(f.taken_weight) / u128::from(it.weight)) as u64
            })
    }

    pub fn to_f64(&self, inst: &KnapsackInstance) -> f64 {
        self.whole as f64
            + self.fractional.map_or(0.0, |f| {
                let it = inst.items[f.item];
                it.value as f64 * f.taken_weight as f64 / it.weight as f64
            })
    }

    pub fn is_integral(&self) -> bool {
        self.fractional.is_none()
    }
}

/// Greedy LP relaxation with the fixed items honoured.
pub fn dantzig_bound(inst: &KnapsackInstance, fixed: &FixedVars) -> Result<Relaxation> {
    greedy(inst, fixed, |_| {})
}

/// The relaxation, reporting every item it packs whole to `pack`.
fn greedy(inst: &KnapsackInstance, fixed: &FixedVars, mut pack: impl FnMut(usize)) -> Result<Relaxation> {
    let mut weight = 0u64;
    let mut whole = 0u64;
    for (k, it) in inst.items.iter().enumerate() {
        if fixed.get(k) == Some(true) {
            weight += it.weight;
            whole += it.value;
            pack(k);
        }
    }
    if weight > inst.capacity {
        return Err(Error::Infeasible {
            weight,
            capacity: inst.capacity,
        });
    }
    let mut room = inst.capacity - weight;
    for &k in &inst.order {
        if fixed.get(k).is_some() {
            continue;
        }
        let it = inst.items[k];
        if it.weight <= room {
            room -= it.weight;
            whole += it.value;
            pack(k);
        } else {
            let fractional = (room > 0).then_some(Fraction {
                item: k,
                taken_weight: room,
            });
            return Ok(Relaxation { whole, fractional });
        }
    }
    Ok(Relaxation {
        whole,
        fractional: None,
    })
}

/// Branch-and-bound tree of an instance. Label 0 packs the branching item,
/// label 1 leaves it out.
#[derive(Debug, Clone, Copy)]
pub struct KnapsackBoundOracle<'a> {
    inst: &'a KnapsackInstance,
}

pub type KnapsackOracle<'a> = Monotone<KnapsackBoundOracle<'a>>;

pub fn knapsack_oracle(inst: &KnapsackInstance) -> KnapsackOracle<'_> {
    monotone_wrap(KnapsackBoundOracle { inst })
}

impl KnapsackBoundOracle<'_> {
    /// Replays `path` from the root; `None` if some step was infeasible.
    fn node(&self, path: &NodePath) -> (FixedVars, Option<Relaxation>) {
        let mut fixed = FixedVars::free(self.inst.len());
        let mut relax = dantzig_bound(self.inst, &fixed).ok();
        for &l in path.labels() {
            let f = relax
                .and_then(|r| r.fractional)
                .expect("path only follows branching nodes");
            fixed.set(f.item, l == 0);
            relax = dantzig_bound(self.inst, &fixed).ok();
        }
        (fixed, relax)
    }

    /// Packed items of a solution node.
    pub fn packed_items(&self, path: &NodePath) -> Vec<usize> {
        let (fixed, _) = self.node(path);
        let mut packed = Vec::new();
        greedy(self.inst, &fixed, |k| packed.push(k)).expect("solution nodes are feasible");
        packed.sort_unstable();
        packed
    }
}

impl ProblemOracle for KnapsackBoundOracle<'_> {
    fn shape(&self) -> TreeShape {
        TreeShape::new(self.inst.len(), 2, self.inst.total_value)
    }

    fn child_labels(&self, node: &NodePath) -> Vec<u32> {
        match self.node(node).1 {
            Some(r) if !r.is_integral() => vec![0, 1],
            _ => Vec::new(),
        }
    }

    fn cost(&self, node: &NodePath) -> Cost {
        match self.node(node).1 {
            Some(r) => Cost::Finite(self.inst.total_value - r.floor(self.inst)),
            None => Cost::Infinite,
        }
    }

    fn is_solution(&self, node: &NodePath) -> bool {
        self.node(node).1.is_some_and(|r| r.is_integral())
    }

    fn cursor(&self) -> Box<dyn Cursor + '_> {
        Box::new(PathCursor::new(self))
    }
}

/// Exact optimum by dynamic programming over residual capacity.
pub fn dp_optimum(inst: &KnapsackInstance) -> Result<u64> {
    let cells = inst.len() as u128 * (u128::from(inst.capacity) + 1);
    if cells > DP_CELL_LIMIT {
        return Err(Error::TableTooLarge {
            cells,
            limit: DP_CELL_LIMIT,
        });
    }
    let cap = inst.capacity as usize;
    let mut best = vec![0u64; cap + 1];
    for it in &inst.items {
        let w = it.weight as usize;
        if w > cap {
            continue;
        }
        for c in (w..=cap).rev() {
            best[c] = best[c].max(best[c - w] + it.value);
        }
    }
    Ok(best[cap])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::best_first;

    #[test]
    fn relaxation_examples() {
        let a = KnapsackInstance::from_pairs(&[(2, 3), (3, 4), (4, 5)], 5).unwrap();
        let r = dantzig_bound(&a, &FixedVars::free(3)).unwrap();
        assert_eq!((r.whole, r.fractional), (7, None));
        let b = KnapsackInstance::from_pairs(&[(4, 8), (5, 5)], 6).unwrap();
        let r = dantzig_bound(&b, &FixedVars::free(2)).unwrap();
        assert_eq!(r.whole, 8);
        assert_eq!(
            r.fractional,
            Some(Fraction {
                item: 1,
                taken_weight: 2
            })
        );
        assert_eq!(r.floor(&b), 10);
        assert!((r.to_f64(&b) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_items() {
        let b = KnapsackInstance::from_pairs(&[(4, 8), (5, 5)], 6).unwrap();
        let mut all = FixedVars::free(2);
        all.set(0, false);
        all.set(1, true);
        let r = dantzig_bound(&b, &all).unwrap();
        assert_eq!((r.whole, r.fractional), (5, None));
        all.set(0, true);
        assert!(matches!(
            dantzig_bound(&b, &all),
            Err(Error::Infeasible { weight: 9, capacity: 6 })
        ));
    }

    #[test]
    fn oracle_optimum() {
        let a = KnapsackInstance::from_pairs(&[(2, 3), (3, 4), (4, 5)], 5).unwrap();
        let out = best_first(&knapsack_oracle(&a)).unwrap();
        assert_eq!(out.cost, Cost::Finite(5));
        assert_eq!(dp_optimum(&a).unwrap(), 7);
        let zero = KnapsackInstance::from_pairs(&[(2, 3), (3, 4)], 0).unwrap();
        assert_eq!(best_first(&knapsack_oracle(&zero)).unwrap().cost, Cost::Finite(7));
        let roomy = KnapsackInstance::from_pairs(&[(2, 3), (3, 4)], 9).unwrap();
        assert_eq!(knapsack_oracle(&roomy).cost(&NodePath::root()), Cost::ZERO);
        assert!(knapsack_oracle(&roomy).is_solution(&NodePath::root()));
    }

    #[test]
    fn packed_items_of_optimum() {
        let b = KnapsackInstance::from_pairs(&[(4, 8), (5, 5), (2, 3)], 6).unwrap();
        let o = knapsack_oracle(&b);
        let out = best_first(&o).unwrap();
        let items = o.inner().packed_items(&out.solution.unwrap());
        assert_eq!(items, vec![0, 2]);
        assert_eq!(out.cost, Cost::Finite(16 - 11));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let a = KnapsackInstance::random(3, 6, 10, 10, 20);
        assert_eq!(KnapsackInstance::parse(&a.to_text(), "m").unwrap(), a);
        assert!(KnapsackInstance::parse("2 5\n1 1\n", "m").is_err());
        assert!(KnapsackInstance::from_pairs(&[(0, 1)], 5).is_err());
        let huge = KnapsackInstance::from_pairs(&[(1, 1)], u64::MAX / 2).unwrap();
        assert!(matches!(dp_optimum(&huge), Err(Error::TableTooLarge { .. })));
    }
}
