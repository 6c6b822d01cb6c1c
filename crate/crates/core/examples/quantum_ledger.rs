//! Query ledger of the simulated quantum branch-and-bound on the example
//! tree and on a small spin glass, under every gray-zone policy.

use bnb_lab::harness::{fig1_qcost, qcost_instance};
use bnb_lab::quantum::{GrayZonePolicy, QbbConfig};
use bnb_lab::sk::SkInstance;

fn main() -> bnb_lab::Result<()> {
    for policy in GrayZonePolicy::all(11) {
        let (out, rec) = fig1_qcost(QbbConfig::with_policy(policy))?;
        println!(
            "fig1 {policy:<16} optimum {} ledger {} bound {} ratio {:.2}",
            rec.optimum_cost, rec.ledger_total, rec.theorem1_bound, rec.ratio
        );
        for it in &out.ledger.iterations {
            println!(
                "    T={:<3} c_new={} |T_c_new|={} count calls {} search calls {}",
                it.t,
                it.c_new,
                it.t_c_new,
                it.count_calls.len(),
                it.search_calls.len()
            );
        }
    }

    let inst = SkInstance::generate(16, 3);
    let (out, rec) = qcost_instance(&inst, 0, None, QbbConfig::with_policy(GrayZonePolicy::AlwaysExceeds))?;
    println!("\nspin glass n=16: {rec:#?}");
    println!("{}", serde_json::to_string_pretty(&out.ledger_json()["params"])?);
    Ok(())
}
