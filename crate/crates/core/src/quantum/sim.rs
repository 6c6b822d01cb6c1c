use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cost::{count_cost, treesearch_cost};
use crate::tree::{count_truncated_up_to, walk, ChildOrder, Cost, NodePath, ProblemOracle, SizeProbe, Visit};

pub const LEDGER_SCHEMA_VERSION: u32 = 1;

/// Parameters shared by every subroutine call of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubroutineParams {
    /// Per-call failure probability.
    pub epsilon_prime: f64,
    /// Relative accuracy of size estimation.
    pub delta: f64,
}

impl SubroutineParams {
    pub fn new(epsilon_prime: f64, delta: f64) -> Self {
        assert!(
            epsilon_prime > 0.0 && epsilon_prime < 1.0,
            "epsilon' must lie in (0, 1), got {epsilon_prime}"
        );
        assert!(delta > 0.0, "delta must be positive, got {delta}");
        SubroutineParams { epsilon_prime, delta }
    }
}

/// How size estimation answers when the true size is within a factor
/// `1 + delta` of the threshold, where its contract allows either answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GrayZonePolicy {
    /// Report "exceeds" exactly when the size is above the threshold.
    #[default]
    Truthful,
    AlwaysExceeds,
    AlwaysEstimate,
    /// Fair coin per call from a ChaCha8 stream with this seed.
    SeededRandom(u64),
}

impl GrayZonePolicy {
    /// The four policies, with `seed` for the random one.
    pub fn all(seed: u64) -> [GrayZonePolicy; 4] {
        [
            GrayZonePolicy::Truthful,
            GrayZonePolicy::AlwaysExceeds,
            GrayZonePolicy::AlwaysEstimate,
            GrayZonePolicy::SeededRandom(seed),
        ]
    }
}

impl fmt::Display for GrayZonePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrayZonePolicy::Truthful => f.write_str("truthful"),
            GrayZonePolicy::AlwaysExceeds => f.write_str("always-exceeds"),
            GrayZonePolicy::AlwaysEstimate => f.write_str("always-estimate"),
            GrayZonePolicy::SeededRandom(s) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for GrayZonePolicy {
    type Err = String;

    /// Accepts `truthful`, `always-exceeds`, `always-estimate`, `random` and
    /// `random:<seed>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "truthful" => Ok(GrayZonePolicy::Truthful),
            "always-exceeds" => Ok(GrayZonePolicy::AlwaysExceeds),
            "always-estimate" => Ok(GrayZonePolicy::AlwaysEstimate),
            "random" => Ok(GrayZonePolicy::SeededRandom(0)),
            _ => match s.strip_prefix("random:").map(str::parse) {
                Some(Ok(seed)) => Ok(GrayZonePolicy::SeededRandom(seed)),
                _ => Err(format!("unknown gray-zone policy {s:?}")),
            },
        }
    }
}

impl Serialize for GrayZonePolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountAnswer {
    Estimate(u64),
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchAnswer {
    Found(NodePath, Cost),
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountCall {
    pub c: Cost,
    pub t0: u64,
    pub answer: CountAnswer,
    pub charged: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchCall {
    pub c: Cost,
    pub t_c: u64,
    pub found: Option<Cost>,
    pub charged: u64,
}

/// One pass of the outer loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerIteration {
    #[serde(rename = "T")]
    pub t: u64,
    pub c_old: u64,
    pub c_new: u64,
    /// Size of the tree truncated at `c_new`.
    pub t_c_new: u64,
    pub count_calls: Vec<CountCall>,
    pub search_calls: Vec<SearchCall>,
}

/// Modeled quantum query charges of one run, grouped by outer iteration.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct QueryLedger {
    pub iterations: Vec<LedgerIteration>,
    pub total: u64,
}

impl QueryLedger {
    pub fn count_calls(&self) -> impl Iterator<Item = &CountCall> {
        self.iterations.iter().flat_map(|it| it.count_calls.iter())
    }

    pub fn search_calls(&self) -> impl Iterator<Item = &SearchCall> {
        self.iterations.iter().flat_map(|it| it.search_calls.iter())
    }

    fn charge(&mut self, q: u64) {
        self.total = self.total.saturating_add(q);
    }
}

/// Idealised Count and Search subroutines over one oracle.
///
/// Both are answered by exact classical traversal, so they never fail; the
/// failure probability only enters through the charged query costs. Exact
/// and lower-bound size facts are cached per cost bound.
pub struct Simulator<'a> {
    oracle: &'a dyn ProblemOracle,
    depth: usize,
    params: SubroutineParams,
    policy: GrayZonePolicy,
    coin: Option<ChaCha8Rng>,
    noise: Option<ChaCha8Rng>,
    exact: HashMap<Cost, u64>,
    above: HashMap<Cost, u64>,
}

impl<'a> Simulator<'a> {
    pub fn new(oracle: &'a dyn ProblemOracle, params: SubroutineParams, policy: GrayZonePolicy) -> Self {
        let coin = match policy {
            GrayZonePolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Simulator {
            oracle,
            depth: oracle.shape().depth,
            params,
            policy,
            coin,
            noise: None,
            exact: HashMap::new(),
            above: HashMap::new(),
        }
    }

    /// Perturb contract-forced estimates by a uniform relative error in
    /// `[-delta, delta]`, capped at the threshold.
    pub fn with_estimate_noise(mut self, seed: u64) -> Self {
        self.noise = Some(ChaCha8Rng::seed_from_u64(seed));
        self
    }

    fn size_up_to(&mut self, c: Cost, limit: u64) -> SizeProbe {
        if let Some(&t) = self.exact.get(&c) {
            return if t > limit {
                SizeProbe::Exceeds(limit)
            } else {
                SizeProbe::Exact(t)
            };
        }
        if self.above.get(&c).is_some_and(|&l| l >= limit) {
            return SizeProbe::Exceeds(limit);
        }
        let probe = count_truncated_up_to(self.oracle, c, limit);
        match probe {
            SizeProbe::Exact(t) => {
                self.exact.insert(c, t);
            }
            SizeProbe::Exceeds(l) => {
                let e = self.above.entry(c).or_insert(l);
                *e = (*e).max(l);
            }
        }
        probe
    }

    /// Tree-size estimation of the tree truncated at `c` against threshold
    /// `t0`.
    pub fn count(&mut self, c: Cost, t0: u64) -> (CountAnswer, u64) {
        let delta = self.params.delta;
        let charged = count_cost(t0, self.depth, delta, self.params.epsilon_prime);
        let upper = (1.0 + delta) * t0 as f64;
        let limit = upper.floor() as u64;
        let answer = match self.size_up_to(c, limit) {
            SizeProbe::Exceeds(_) => CountAnswer::Exceeds,
            SizeProbe::Exact(t) if t as f64 * (1.0 + delta) <= t0 as f64 => {
                CountAnswer::Estimate(self.perturb(t, t0))
            }
            SizeProbe::Exact(t) => match self.policy {
                GrayZonePolicy::Truthful if t <= t0 => CountAnswer::Estimate(t),
                GrayZonePolicy::Truthful => CountAnswer::Exceeds,
                GrayZonePolicy::AlwaysExceeds => CountAnswer::Exceeds,
                GrayZonePolicy::AlwaysEstimate => CountAnswer::Estimate(t),
                GrayZonePolicy::SeededRandom(_) => {
                    let coin = self.coin.as_mut().expect("seeded policy has a coin");
                    if coin.random_bool(0.5) {
                        CountAnswer::Estimate(t)
                    } else {
                        CountAnswer::Exceeds
                    }
                }
            },
        };
        (answer, charged)
    }

    fn perturb(&mut self, t: u64, t0: u64) -> u64 {
        let Some(rng) = self.noise.as_mut() else {
            return t;
        };
        let d = self.params.delta;
        let rel: f64 = rng.random_range(-d..=d);
        ((t as f64 * (1.0 + rel)).round().max(0.0) as u64).min(t0)
    }

    /// Quantum tree search in the tree truncated at `c` for a solution node.
    ///
    /// Returns the lowest-cost solution (ties by path order), the charge and
    /// the size of the searched tree.
    pub fn search(&mut self, c: Cost) -> (SearchAnswer, u64, u64) {
        let mut size = 0u64;
        let mut best: Option<(Cost, NodePath)> = None;
        walk(self.oracle, ChildOrder::Label, |cur| {
            let cost = cur.cost();
            if cost > c {
                return Visit::Prune;
            }
            size += 1;
            if cost.is_finite() && cur.is_solution() && best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, cur.path().clone()));
            }
            Visit::Descend
        });
        self.exact.insert(c, size);
        let charged = treesearch_cost(size, self.depth, self.params.epsilon_prime);
        let answer = match best {
            Some((cost, path)) => SearchAnswer::Found(path, cost),
            None => SearchAnswer::NotFound,
        };
        (answer, charged, size)
    }
}

/// One-off size estimation call.
pub fn count_sim(
    oracle: &dyn ProblemOracle,
    c: Cost,
    t0: u64,
    params: SubroutineParams,
    policy: GrayZonePolicy,
) -> (CountAnswer, u64) {
    Simulator::new(oracle, params, policy).count(c, t0)
}

/// One-off tree search call.
pub fn search_sim(oracle: &dyn ProblemOracle, c: Cost, params: SubroutineParams) -> (SearchAnswer, u64) {
    let (answer, charged, _) = Simulator::new(oracle, params, GrayZonePolicy::Truthful).search(c);
    (answer, charged)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QbbConfig {
    /// Overall failure probability.
    pub eps: f64,
    /// Constant `K` in `eps' = eps / (K d log2 c_max)`.
    pub k_const: f64,
    pub delta: f64,
    pub policy: GrayZonePolicy,
    pub estimate_noise: Option<u64>,
}

impl Default for QbbConfig {
    fn default() -> Self {
        QbbConfig {
            eps: 0.1,
            k_const: 10.0,
            delta: 0.5,
            policy: GrayZonePolicy::Truthful,
            estimate_noise: None,
        }
    }
}

impl QbbConfig {
    pub fn with_policy(policy: GrayZonePolicy) -> Self {
        QbbConfig {
            policy,
            ..QbbConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QbbResult {
    Solution { path: NodePath, cost: u64 },
    NoSolution,
}

impl QbbResult {
    pub fn cost(&self) -> Cost {
        match self {
            QbbResult::Solution { cost, .. } => Cost::Finite(*cost),
            QbbResult::NoSolution => Cost::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QbbParams {
    pub eps: f64,
    pub epsilon_prime: f64,
    pub delta: f64,
    #[serde(rename = "K")]
    pub k_const: f64,
    pub c_max: u64,
    pub t_max: u64,
    pub depth: usize,
    pub policy: GrayZonePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QbbOutcome {
    pub result: QbbResult,
    pub ledger: QueryLedger,
    pub iterations: usize,
    pub params: QbbParams,
}

impl QbbOutcome {
    /// JSON ledger document: `{schema_version, params, iterations, total, result}`.
    pub fn ledger_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": LEDGER_SCHEMA_VERSION,
            "params": self.params,
            "iterations": self.ledger.iterations,
            "total": self.ledger.total,
            "result": self.result,
        })
    }
}

/// Classical execution of the quantum branch-and-bound algorithm.
///
/// `c_max` is rounded up to a power of two (at least 2); every solution
/// should cost strictly less than it. `t_max` bounds the tree size. The
/// oracle must be monotone.
pub fn qbb(oracle: &dyn ProblemOracle, c_max: u64, t_max: u64, config: QbbConfig) -> QbbOutcome {
    let c_max = c_max.max(2).next_power_of_two();
    let log_c = c_max.trailing_zeros();
    let depth = oracle.shape().depth;
    let eps_prime = config.eps / (config.k_const * depth.max(1) as f64 * log_c as f64);
    let params = SubroutineParams::new(eps_prime, config.delta);
    let mut sim = Simulator::new(oracle, params, config.policy);
    if let Some(seed) = config.estimate_noise {
        sim = sim.with_estimate_noise(seed);
    }
    let record = QbbParams {
        eps: config.eps,
        epsilon_prime: eps_prime,
        delta: config.delta,
        k_const: config.k_const,
        c_max,
        t_max,
        depth,
        policy: config.policy,
    };

    let mut ledger = QueryLedger::default();
    let mut t: u64 = 1;
    let mut c_old: u64 = 0;
    while t <= t_max {
        let mut it = LedgerIteration {
            t,
            c_old,
            c_new: 0,
            t_c_new: 0,
            count_calls: Vec::new(),
            search_calls: Vec::new(),
        };
        let c_new = if t as u128 * 2 > t_max as u128 {
            c_max
        } else {
            let mut c_new = 0u64;
            for i in 1..=log_c {
                let candidate = c_new + (c_max >> i);
                let (answer, charged) = sim.count(Cost::Finite(candidate), t);
                ledger.charge(charged);
                it.count_calls.push(CountCall {
                    c: Cost::Finite(candidate),
                    t0: t,
                    answer,
                    charged,
                });
                if answer != CountAnswer::Exceeds {
                    c_new = candidate;
                }
            }
            c_new
        };
        it.c_new = c_new;

        let mut search = |c: u64, it: &mut LedgerIteration, ledger: &mut QueryLedger| {
            let (answer, charged, size) = sim.search(Cost::Finite(c));
            ledger.charge(charged);
            it.search_calls.push(SearchCall {
                c: Cost::Finite(c),
                t_c: size,
                found: match &answer {
                    SearchAnswer::Found(_, cost) => Some(*cost),
                    SearchAnswer::NotFound => None,
                },
                charged,
            });
            (answer, size)
        };

        let (answer, size) = search(c_new, &mut it, &mut ledger);
        it.t_c_new = size;
        if let SearchAnswer::Found(path, cost) = answer {
            // smallest c in [c_old, c_new] whose truncated tree holds a solution
            let mut best = (path, cost);
            let (mut lo, mut hi) = (c_old, c_new);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                match search(mid, &mut it, &mut ledger).0 {
                    SearchAnswer::Found(p, c) => {
                        hi = mid;
                        best = (p, c);
                    }
                    SearchAnswer::NotFound => lo = mid + 1,
                }
            }
            ledger.iterations.push(it);
            let cost = best.1.finite().expect("solutions have finite cost");
            return QbbOutcome {
                result: QbbResult::Solution { path: best.0, cost },
                iterations: ledger.iterations.len(),
                ledger,
                params: record,
            };
        }
        ledger.iterations.push(it);
        t = match t.checked_mul(2) {
            Some(t) => t,
            None => break,
        };
        c_old = c_new;
    }
    QbbOutcome {
        result: QbbResult::NoSolution,
        iterations: ledger.iterations.len(),
        ledger,
        params: record,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::ExplicitTree;

    /// Chain of `n` zero-cost nodes: truncated size at any c >= 0 is `n`.
    fn chain(n: usize) -> ExplicitTree {
        let mut t = ExplicitTree::new(Cost::ZERO);
        let mut at = ExplicitTree::ROOT;
        for _ in 1..n {
            at = t.add_child(at, Cost::ZERO);
        }
        t
    }

    fn params() -> SubroutineParams {
        SubroutineParams::new(0.01, 0.5)
    }

    #[test]
    fn count_forced_regions() {
        let small = chain(4);
        let (a, q) = count_sim(&small, Cost::ZERO, 10, params(), GrayZonePolicy::AlwaysExceeds);
        assert_eq!(a, CountAnswer::Estimate(4));
        assert!(q >= 1);
        let big = chain(20);
        let (a, _) = count_sim(&big, Cost::ZERO, 10, params(), GrayZonePolicy::AlwaysEstimate);
        assert_eq!(a, CountAnswer::Exceeds);
    }

    #[test]
    fn count_gray_zone_follows_policy() {
        let t = chain(12);
        let p = params();
        let ask = |policy| count_sim(&t, Cost::ZERO, 10, p, policy).0;
        assert_eq!(ask(GrayZonePolicy::AlwaysExceeds), CountAnswer::Exceeds);
        assert_eq!(ask(GrayZonePolicy::AlwaysEstimate), CountAnswer::Estimate(12));
        assert_eq!(ask(GrayZonePolicy::Truthful), CountAnswer::Exceeds);
        let ten = chain(10);
        assert_eq!(
            count_sim(&ten, Cost::ZERO, 10, p, GrayZonePolicy::Truthful).0,
            CountAnswer::Estimate(10)
        );
        // boundary: 15 = 1.5 * 10 is still gray, 16 is forced
        let fifteen = chain(15);
        assert_eq!(
            count_sim(&fifteen, Cost::ZERO, 10, p, GrayZonePolicy::AlwaysEstimate).0,
            CountAnswer::Estimate(15)
        );
        let sixteen = chain(16);
        assert_eq!(
            count_sim(&sixteen, Cost::ZERO, 10, p, GrayZonePolicy::AlwaysEstimate).0,
            CountAnswer::Exceeds
        );
    }

    #[test]
    fn random_policy_is_reproducible() {
        let t = chain(12);
        let answers = |seed| {
            let mut sim = Simulator::new(&t, params(), GrayZonePolicy::SeededRandom(seed));
            (0..32).map(|_| sim.count(Cost::ZERO, 10).0).collect::<Vec<_>>()
        };
        assert_eq!(answers(5), answers(5));
        let a = answers(5);
        assert!(a.contains(&CountAnswer::Exceeds));
        assert!(a.contains(&CountAnswer::Estimate(12)));
    }

    #[test]
    fn noisy_estimates_stay_within_delta() {
        let t = chain(40);
        let mut sim = Simulator::new(&t, params(), GrayZonePolicy::Truthful).with_estimate_noise(9);
        for _ in 0..50 {
            match sim.count(Cost::ZERO, 100).0 {
                CountAnswer::Estimate(e) => assert!((20..=60).contains(&e), "{e}"),
                CountAnswer::Exceeds => panic!("40 <= 100/1.5 is forced"),
            }
        }
    }

    #[test]
    fn search_on_fig1() {
        let t = ExplicitTree::fig1();
        let (a, q) = search_sim(&t, Cost::Finite(3), params());
        assert_eq!(a, SearchAnswer::NotFound);
        assert!(q >= 1);
        let (a, _) = search_sim(&t, Cost::Finite(4), params());
        assert_eq!(a, SearchAnswer::Found(NodePath::from(vec![1, 0, 1]), Cost::Finite(4)));
        let (a, q) = search_sim(&t, Cost::Finite(0), params());
        assert_eq!(a, SearchAnswer::NotFound);
        assert!(q >= 1);
    }

    #[test]
    fn policy_names_round_trip() {
        for p in GrayZonePolicy::all(17) {
            assert_eq!(p.to_string().parse::<GrayZonePolicy>().unwrap(), p);
        }
        assert!("sometimes".parse::<GrayZonePolicy>().is_err());
    }
}
