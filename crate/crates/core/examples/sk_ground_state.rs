//! Exact ground state of one random spin glass, checked against exhaustive
//! enumeration.
//!
//! cargo run --release --example sk_ground_state -- [n] [seed]

use bnb_lab::harness::{solve_instance, SolveOptions, Strategy};
use bnb_lab::sk::{brute_force_min_discrete, default_precision, discretize, SkInstance, PARISI};

fn main() -> bnb_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let inst = SkInstance::generate(n, seed);
    for strategy in [Strategy::DepthFirst, Strategy::BestFirst] {
        let r = solve_instance(
            &inst,
            SolveOptions {
                strategy,
                exact_tmin: true,
                ..SolveOptions::default()
            },
        )?;
        println!(
            "{strategy:?}: E_min = {} (2^-{} units), E/n^1.5 = {:.4}, explored {}, T_min {:?}, {:.1} ms",
            r.e_min, r.p, r.e_norm, r.explored, r.t_min, r.wall_time_ms
        );
    }
    println!("limiting value {PARISI}");
    if n <= 24 {
        let d = discretize(&inst, default_precision(n))?;
        println!("exhaustive: {}", brute_force_min_discrete(&d).0);
    }
    Ok(())
}
