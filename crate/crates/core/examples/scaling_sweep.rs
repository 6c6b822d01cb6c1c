//! Depth-first tree sizes over a range of spin counts and the exponential
//! fit of their medians.
//!
//! cargo run --release --example scaling_sweep -- [n_max] [per_n]

use bnb_lab::harness::{fit_records, medians_by_n, run_sweep, SweepConfig};

fn main() -> bnb_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_max: usize = args.next().map_or(30, |s| s.parse().expect("n_max"));
    let per_n: usize = args.next().map_or(15, |s| s.parse().expect("per_n"));
    let cfg = SweepConfig {
        ns: (12..=n_max).step_by(2).collect(),
        per_n,
        ..SweepConfig::default()
    };
    let records = run_sweep(&cfg)?;
    let energies = medians_by_n(&records, |r| r.e_norm);
    let tmins = medians_by_n(&records, |r| r.t_min.unwrap_or(0) as f64);
    for ((n, size), ((_, e), (_, t))) in medians_by_n(&records, |r| r.tree_size_dfs as f64)
        .into_iter()
        .zip(energies.into_iter().zip(tmins))
    {
        println!("n={n:<3} median explored {size:>9} median T_min {t:>8} median E/n^1.5 {e:.4}");
    }
    let fit = fit_records(&records, 16)?;
    println!(
        "fit: size ~ 2^({:.3} n + {:.3}), rms residual {:.3}",
        fit.slope, fit.intercept, fit.residual
    );
    Ok(())
}
