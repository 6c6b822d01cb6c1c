//! Branch-and-bound laboratory.
//!
//! The crate is organised around one abstraction, [`ProblemOracle`]: an
//! implicit rooted tree whose nodes carry integer lower-bound labels
//! ([`Cost`]) and which can only be explored through two queries, "children
//! of a node" and "cost of a node". On top of it sit
//!
//! * tree transforms ([`tree::monotone_wrap`], [`tree::truncate`],
//!   [`tree::binarize`]) and exact node counting,
//! * classical solvers ([`search::best_first`],
//!   [`search::depth_first_incumbent`]) and truncated-tree statistics,
//! * a classical execution of the quantum branch-and-bound algorithm with a
//!   ledger of modeled quantum query charges ([`quantum`]),
//! * two problem adapters: Sherrington-Kirkpatrick spin glasses ([`sk`]) and
//!   0/1 knapsack through its fractional relaxation ([`knapsack`]),
//! * numerical checks of the tree-size analysis for spin glasses
//!   ([`bounds`]) and the experiment harness behind the `bnb-lab` binary
//!   ([`harness`]).
//!
//! Runnable walkthroughs live in `examples/`.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod knapsack;
pub mod quantum;
pub mod search;
pub mod sk;
pub mod tree;

pub use error::{Error, Result};
pub use search::{best_first, depth_first_incumbent, truncated_size, tree_stats, SearchOutcome};
pub use tree::{count_nodes, ChildOrder, Cost, Cursor, NodePath, ProblemOracle, TreeShape};
