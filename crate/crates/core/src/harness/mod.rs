//! Experiment harness: instance files, spin-glass sweeps, scaling fits and
//! quantum cost reports. Every entry point is deterministic given its seeds,
//! apart from wall-clock fields.

mod fit;
mod qcost;
mod sweep;

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::search::{best_first, depth_first_incumbent, truncated_size, SearchOutcome};
use crate::sk::{default_precision, discretize, sk_oracle, suffix_minima, SkInstance, SkOracle};
use crate::tree::{ChildOrder, Cost};
use crate::{Error, Result};

pub use fit::{fit_points, fit_records, median, medians_by_n, pooled_slope, FitResult};
pub use qcost::{fig1_qcost, qcost_instance, qcost_oracle, qcost_sweep, QcostRecord};
pub use sweep::{read_sweep_csv, run_sweep, sweep_csv_bytes, write_sweep_csv, SweepConfig, SweepRecord, SWEEP_SCHEMA_VERSION};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    BestFirst,
    #[default]
    DepthFirst,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "best-first" => Ok(Strategy::BestFirst),
            "dfs" => Ok(Strategy::DepthFirst),
            _ => Err(format!("unknown strategy {s:?}, expected best-first or dfs")),
        }
    }
}

/// Result of solving one spin-glass instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub n: usize,
    pub p: u32,
    pub seed: u64,
    /// Discretized ground-state energy, unshifted.
    pub e_min: i64,
    /// `e_min / 2^p / n^{3/2}`.
    pub e_norm: f64,
    /// Cost queries made by the solver.
    pub explored: u64,
    /// Size of the tree truncated at the optimum, when requested.
    pub t_min: Option<u64>,
    pub ground_state: Vec<i8>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Precision bits; the size-based default when `None`.
    pub p_bits: Option<u32>,
    pub fix_first_spin: bool,
    pub exact_tmin: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::DepthFirst,
            p_bits: None,
            fix_first_spin: true,
            exact_tmin: false,
        }
    }
}

/// Normalised energy `e / 2^p / n^{3/2}`.
pub fn normalised_energy(e: i64, p: u32, n: usize) -> f64 {
    e as f64 / f64::from(p).exp2() / (n as f64).powf(1.5)
}

/// Discretizes, precomputes suffix minima and runs the chosen solver on the
/// whole-instance tree.
pub fn solve_instance(inst: &SkInstance, opts: SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let n = inst.n();
    let p = opts.p_bits.unwrap_or_else(|| default_precision(n));
    let d = discretize(inst, p)?;
    let suffix = suffix_minima(&d);
    let oracle = sk_oracle(&d, &suffix, opts.fix_first_spin);
    let out = run_strategy(&oracle, opts.strategy)?;
    let path = out.solution.expect("every spin assignment is a solution");
    let c_min = out.cost;
    let e_min = c_min.finite().expect("solutions have finite cost") as i64 - d.shift();
    let t_min = if opts.exact_tmin {
        Some(truncated_size(&oracle, c_min)?)
    } else {
        None
    };
    Ok(SolveReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n,
        p,
        seed: inst.seed(),
        e_min,
        e_norm: normalised_energy(e_min, p, n),
        explored: out.explored_nodes,
        t_min,
        ground_state: oracle.inner().assignment(&path),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn run_strategy(oracle: &SkOracle<'_>, strategy: Strategy) -> Result<SearchOutcome> {
    match strategy {
        Strategy::BestFirst => best_first(oracle),
        Strategy::DepthFirst => Ok(depth_first_incumbent(oracle, Cost::Infinite, ChildOrder::CostAscending)),
    }
}

/// Writes `count` instances of size `n` to `dir/sk_n{n}_{index}.txt`.
pub fn generate_instances(dir: &Path, n: usize, count: usize, base_seed: u64, p_bits: Option<u32>) -> Result<Vec<std::path::PathBuf>> {
    if n == 0 {
        return Err(Error::InvalidInstance("n must be at least 1".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let p = p_bits.unwrap_or_else(|| default_precision(n));
    (0..count as u64)
        .map(|i| {
            let inst = SkInstance::generate(n, crate::sk::sweep_seed(base_seed, n, i));
            let path = dir.join(format!("sk_n{n}_{i:04}.txt"));
            inst.save(&path, p)?;
            Ok(path)
        })
        .collect()
}

/// Writes `contents` to `path` through a temporary sibling and a rename, so
/// a crash never leaves a truncated file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
