use rayon::prelude::*;
use serde::Serialize;

use super::{SweepConfig, REPORT_SCHEMA_VERSION};
use crate::quantum::{qbb, theorem1_bound, QbbConfig, QbbOutcome};
use crate::search::{depth_first_incumbent, truncated_size};
use crate::sk::{default_precision, discretize, sk_oracle, suffix_minima, sweep_seed, SkInstance};
use crate::tree::{ChildOrder, Cost, ExplicitTree, ProblemOracle};
use crate::{Error, Result};

/// Modeled quantum cost of one instance next to the analytic bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QcostRecord {
    pub schema_version: u32,
    pub n: usize,
    pub instance_index: u64,
    pub seed: u64,
    pub policy: String,
    pub depth: usize,
    /// After rounding up to a power of two.
    pub c_max: u64,
    pub t_min: u64,
    pub optimum_cost: Cost,
    pub ledger_total: u64,
    pub theorem1_bound: u64,
    /// `ledger_total / theorem1_bound`.
    pub ratio: f64,
    pub iterations: usize,
}

/// Runs the quantum algorithm on `oracle` and checks its answer against
/// depth-first search. Returns the outcome and a record with `n`, index and
/// seed left zero.
pub fn qcost_oracle(oracle: &dyn ProblemOracle, c_max: u64, config: QbbConfig) -> Result<(QbbOutcome, QcostRecord)> {
    let shape = oracle.shape();
    let classical = depth_first_incumbent(oracle, Cost::Infinite, ChildOrder::CostAscending).cost;
    let t_min = truncated_size(oracle, classical)?;
    let out = qbb(oracle, c_max, shape.max_nodes, config);
    let quantum = out.result.cost();
    if quantum != classical {
        return Err(Error::OptimumMismatch {
            quantum: quantum.to_string(),
            classical: classical.to_string(),
        });
    }
    let bound = theorem1_bound(t_min, shape.depth, out.params.c_max, config.eps);
    let record = QcostRecord {
        schema_version: REPORT_SCHEMA_VERSION,
        n: 0,
        instance_index: 0,
        seed: 0,
        policy: config.policy.to_string(),
        depth: shape.depth,
        c_max: out.params.c_max,
        t_min,
        optimum_cost: classical,
        ledger_total: out.ledger.total,
        theorem1_bound: bound,
        ratio: out.ledger.total as f64 / bound as f64,
        iterations: out.iterations,
    };
    Ok((out, record))
}

/// Spin-glass instance with the first spin pinned.
pub fn qcost_instance(
    inst: &SkInstance,
    instance_index: u64,
    p_bits: Option<u32>,
    config: QbbConfig,
) -> Result<(QbbOutcome, QcostRecord)> {
    let n = inst.n();
    let d = discretize(inst, p_bits.unwrap_or_else(|| default_precision(n)))?;
    let suffix = suffix_minima(&d);
    let oracle = sk_oracle(&d, &suffix, true);
    let (out, mut rec) = qcost_oracle(&oracle, d.c_max(), config)?;
    rec.n = n;
    rec.instance_index = instance_index;
    rec.seed = inst.seed();
    Ok((out, rec))
}

/// The thirteen-node example tree, with costs below 8.
pub fn fig1_qcost(config: QbbConfig) -> Result<(QbbOutcome, QcostRecord)> {
    qcost_oracle(&ExplicitTree::fig1(), 8, config)
}

/// Every instance of a sweep configuration, in parallel.
pub fn qcost_sweep(cfg: &SweepConfig, config: QbbConfig) -> Result<Vec<QcostRecord>> {
    let jobs: Vec<(usize, u64)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.per_n as u64).map(move |i| (n, i)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, i)| {
            let inst = SkInstance::generate(n, sweep_seed(cfg.base_seed, n, i));
            Ok(qcost_instance(&inst, i, cfg.p_bits, config)?.1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::GrayZonePolicy;

    #[test]
    fn fig1_under_every_policy() {
        for policy in GrayZonePolicy::all(3) {
            let (out, rec) = fig1_qcost(QbbConfig::with_policy(policy)).unwrap();
            assert_eq!(rec.optimum_cost, Cost::Finite(4));
            assert_eq!(rec.t_min, 6);
            assert_eq!(out.result.cost(), Cost::Finite(4));
            assert!(rec.ledger_total > 0);
        }
    }

    #[test]
    fn small_spin_glass_matches_classical() {
        let inst = SkInstance::generate(12, 8);
        let (_, rec) = qcost_instance(&inst, 0, None, QbbConfig::with_policy(GrayZonePolicy::AlwaysExceeds)).unwrap();
        assert_eq!(rec.depth, 11);
        assert!(rec.ratio > 0.0);
    }
}
