//! Extrema of the tree-size exponent functions, the expectation bound and
//! the concentration check.

use bnb_lab::bounds::{concentration_check, default_t_grid, lemma3_check, tmin_tail_check, verify_alpha_claims};

fn main() -> bnb_lab::Result<()> {
    for c in verify_alpha_claims(100_000, true) {
        println!(
            "{} on [{}, {}]: {} at alpha {:.6} = {:.7} (+/- {:.1e}), threshold {} -> {}",
            c.function,
            c.interval.0,
            c.interval.1,
            c.claim,
            c.extremum.alpha,
            c.extremum.value,
            c.extremum.resolution,
            c.threshold,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    for n in [8, 10, 12] {
        let r = lemma3_check(n, 500, 1);
        println!(
            "n={n}: mean ground energy {:.3} +/- {:.3}, bound {:.3} -> {}",
            r.mean, r.std_err, r.bound, r.pass
        );
    }
    let conc = concentration_check(10, 2000, &default_t_grid(10), 1);
    for row in &conc.rows {
        println!(
            "t={:6.2} upper {:.4} lower {:.4} bound {:.4}",
            row.t, row.upper_tail, row.lower_tail, row.bound
        );
    }
    for n in [14, 16, 18] {
        let r = tmin_tail_check(n, 100, 1, 0.451, 0.05)?;
        println!("n={n}: {} of 100 with T_min >= {:.0}", r.exceeding, r.threshold);
    }
    Ok(())
}
