use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_instance, write_atomic, SolveOptions, Strategy};
use crate::sk::{sweep_seed, SkInstance};
use crate::{Error, Result};

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

/// One solved instance of a sweep; one CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub schema_version: u32,
    pub n: usize,
    pub instance_index: u64,
    pub seed: u64,
    /// Nodes explored by depth-first branch-and-bound.
    pub tree_size_dfs: u64,
    pub t_min: Option<u64>,
    /// Discretized ground-state energy, unshifted.
    pub e_min: i64,
    pub e_norm: f64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub per_n: usize,
    pub base_seed: u64,
    pub p_bits: Option<u32>,
    pub fix_first_spin: bool,
    pub exact_tmin: bool,
}

impl Default for SweepConfig {
    /// `n = 16, 18, ..., 34`, 25 instances each.
    fn default() -> Self {
        SweepConfig {
            ns: (16..=34).step_by(2).collect(),
            per_n: 25,
            base_seed: 1,
            p_bits: None,
            fix_first_spin: true,
            exact_tmin: true,
        }
    }
}

/// Solves every instance, in parallel; records come back sorted by
/// `(n, instance_index)`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let jobs: Vec<(usize, u64)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.per_n as u64).map(move |i| (n, i)))
        .collect();
    if let Some(&(n, _)) = jobs.iter().find(|(n, _)| *n == 0) {
        return Err(Error::InvalidInstance(format!("cannot sweep n = {n}")));
    }
    let opts = SolveOptions {
        strategy: Strategy::DepthFirst,
        p_bits: cfg.p_bits,
        fix_first_spin: cfg.fix_first_spin,
        exact_tmin: cfg.exact_tmin,
    };
    jobs.into_par_iter()
        .map(|(n, i)| {
            let seed = sweep_seed(cfg.base_seed, n, i);
            let r = solve_instance(&SkInstance::generate(n, seed), opts)?;
            Ok(SweepRecord {
                schema_version: SWEEP_SCHEMA_VERSION,
                n,
                instance_index: i,
                seed,
                tree_size_dfs: r.explored,
                t_min: r.t_min,
                e_min: r.e_min,
                e_norm: r.e_norm,
                wall_time_ms: r.wall_time_ms,
            })
        })
        .collect()
}

pub fn sweep_csv_bytes(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::InvalidInstance(format!("csv buffer: {e}")))
}

/// Writes the records as CSV, atomically.
pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    write_atomic(path, &sweep_csv_bytes(records)?)
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let records = r.deserialize().collect::<std::result::Result<Vec<SweepRecord>, _>>()?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            ns: vec![6, 8],
            per_n: 3,
            base_seed: 4,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn rerun_is_identical_apart_from_timing() {
        let strip = |mut v: Vec<SweepRecord>| {
            v.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
            v
        };
        let a = strip(run_sweep(&small()).unwrap());
        let b = strip(run_sweep(&small()).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!(a.windows(2).all(|w| (w[0].n, w[0].instance_index) < (w[1].n, w[1].instance_index)));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let recs = run_sweep(&small()).unwrap();
        write_sweep_csv(&path, &recs).unwrap();
        assert_eq!(read_sweep_csv(&path).unwrap(), recs);
        let header = std::fs::read_to_string(&path).unwrap();
        assert!(header.starts_with("schema_version,n,instance_index,seed,tree_size_dfs,t_min,e_min,e_norm,wall_time_ms"));
    }
}
