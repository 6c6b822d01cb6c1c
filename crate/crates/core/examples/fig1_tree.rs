//! The thirteen-node example tree: classical solvers, truncation and the
//! degree-reduction transform.

use bnb_lab::search::{best_first, depth_first_incumbent, tree_stats, truncated_size};
use bnb_lab::tree::{binarize, count_nodes, walk, ChildOrder, Cost, ExplicitTree, Visit};

fn main() -> bnb_lab::Result<()> {
    let tree = ExplicitTree::fig1();

    println!("preorder (path: cost)");
    walk(&tree, ChildOrder::Label, |cur| {
        println!("  {:<8} {}", cur.path().to_string(), cur.cost());
        Visit::Descend
    });

    let bf = best_first(&tree)?;
    println!(
        "best-first: cost {} at {}, {} cost queries",
        bf.cost,
        bf.solution.as_ref().map(|p| p.to_string()).unwrap_or_default(),
        bf.explored_nodes
    );
    let dfs = depth_first_incumbent(&tree, Cost::Infinite, ChildOrder::Label);
    println!("depth-first: cost {}, {} cost queries", dfs.cost, dfs.explored_nodes);

    for c in 0..=8 {
        println!("  |T_{c}| = {}", truncated_size(&tree, Cost::Finite(c))?);
    }
    let stats = tree_stats(&tree)?;
    println!("{stats:?}");
    println!("binarized node count: {}", count_nodes(&binarize(&tree))?);
    Ok(())
}
