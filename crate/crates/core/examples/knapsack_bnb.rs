//! 0/1 knapsack through its fractional relaxation, cross-checked by dynamic
//! programming.

use bnb_lab::knapsack::{dantzig_bound, dp_optimum, knapsack_oracle, FixedVars, KnapsackInstance};
use bnb_lab::search::best_first;

fn main() -> bnb_lab::Result<()> {
    let small = KnapsackInstance::from_pairs(&[(2, 3), (3, 4), (4, 5)], 5)?;
    let root = dantzig_bound(&small, &FixedVars::free(small.len()))?;
    println!("root relaxation {:?}", root);

    for seed in 0..5 {
        let inst = KnapsackInstance::random(seed, 15, 30, 50, 120);
        let oracle = knapsack_oracle(&inst);
        let out = best_first(&oracle)?;
        let value = inst.total_value() - out.cost.finite().expect("feasible");
        let items = oracle.inner().packed_items(out.solution.as_ref().expect("solution"));
        println!(
            "seed {seed}: value {value} (dp {}), {} nodes explored, items {items:?}",
            dp_optimum(&inst)?,
            out.explored_nodes
        );
    }
    Ok(())
}
