//! Classical simulation of quantum branch-and-bound with a query-cost ledger.

mod cost;
mod sim;

pub use cost::{count_cost, jarret_wan_cost, theorem1_bound, treesearch_cost};
pub use sim::{
    count_sim, qbb, search_sim, CountAnswer, CountCall, GrayZonePolicy, LedgerIteration, QbbConfig, QbbOutcome,
    QbbParams, QbbResult, QueryLedger, SearchAnswer, SearchCall, Simulator, SubroutineParams, LEDGER_SCHEMA_VERSION,
};
