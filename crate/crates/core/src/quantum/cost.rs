//! Closed-form query costs of the quantum subroutines.
//!
//! Only asymptotic bounds are known for these algorithms, so every hidden
//! constant is fixed to 1, logarithms are base 2 and each logarithmic factor
//! is clamped below at 1. The numbers are a reproducible cost model, not
//! predictions of real gate counts.

/// `max(1, log2 x)`
pub(crate) fn lg(x: f64) -> f64 {
    x.log2().max(1.0)
}

/// Ceiling that ignores float noise of a few ulps around integers; never
/// below 1.
pub(crate) fn charge(x: f64) -> u64 {
    let r = x.round();
    let v = if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        x.ceil()
    };
    (v as u64).max(1)
}

/// Quantum tree search over a tree with `t` nodes and depth `d`, failing
/// with probability at most `eps`: `sqrt(T) d^{3/2} log d log(1/eps)`.
pub fn treesearch_cost(t: u64, d: usize, eps: f64) -> u64 {
    let d = d.max(1) as f64;
    charge((t.max(1) as f64).sqrt() * d * d.sqrt() * lg(d) * lg(1.0 / eps))
}

/// Quantum tree-size estimation against threshold `t0` with relative
/// accuracy `delta`: `sqrt(T0 d) delta^{-3/2} log^2(1/eps)`.
pub fn count_cost(t0: u64, d: usize, delta: f64, eps: f64) -> u64 {
    let d = d.max(1) as f64;
    let l = lg(1.0 / eps);
    charge((t0.max(1) as f64 * d).sqrt() / (delta * delta.sqrt()) * l * l)
}

/// The alternative tree-search bound with `m` marked nodes:
/// `sqrt(T d) log^4(m d) log(m/eps)`. For comparison only.
pub fn jarret_wan_cost(t: u64, d: usize, m: u64, eps: f64) -> u64 {
    let d = d.max(1) as f64;
    let m = m.max(1) as f64;
    charge((t.max(1) as f64 * d).sqrt() * lg(m * d).powi(4) * lg(m / eps))
}

/// Total query bound for the whole branch-and-bound algorithm:
/// `sqrt(T_min d) log c_max L (L + d log d)` with `L = log(d log c_max / eps)`.
pub fn theorem1_bound(t_min: u64, d: usize, c_max: u64, eps: f64) -> u64 {
    let d = d.max(1) as f64;
    let log_c = lg(c_max as f64);
    let l = lg(d * log_c / eps);
    charge((t_min.max(1) as f64 * d).sqrt() * log_c * l * (l + d * lg(d)))
}
