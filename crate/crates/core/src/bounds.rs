//! Numerical checks behind the spin-glass tree-size analysis.
//!
//! Four one-variable functions of the fraction `alpha` of fixed spins enter
//! the estimate of how many partial assignments survive pruning; their
//! extrema are checked on grids with golden-section refinement. Two Monte
//! Carlo checks cover the expectation bound on the ground-state energy and
//! its concentration.

use std::f64::consts::{FRAC_2_PI, LN_2};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::search::truncated_size;
use crate::sk::{
    brute_force_min, default_precision, discretize, instance_seed, sk_oracle, suffix_minima, sweep_seed, SkInstance,
    PARISI,
};
use crate::{Error, Result};

/// Ceiling claimed for `h1` and `h2`.
pub const H_CEILING: f64 = 0.45003;
/// Floor claimed for `g1` and `g2`.
pub const G_FLOOR: f64 = -0.763;
/// Coefficient of the cruder suffix-energy bound in `g2` and `h2`.
const CRUDE: f64 = 1.434;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaFunction {
    G1,
    G2,
    H1,
    H2,
}

impl fmt::Display for AlphaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaFunction::G1 => "g1",
            AlphaFunction::G2 => "g2",
            AlphaFunction::H1 => "h1",
            AlphaFunction::H2 => "h2",
        })
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(Error::Domain {
            what: "alpha",
            value: alpha,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// `(1 - alpha) sqrt(alpha) sqrt(2/pi)`: expected cross term per `n^{3/2}`.
fn cross(alpha: f64) -> f64 {
    (1.0 - alpha) * alpha.sqrt() * FRAC_2_PI.sqrt()
}

fn tail(alpha: f64) -> f64 {
    (1.0 - alpha).powf(1.5)
}

pub fn g1(alpha: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    Ok(-cross(a) + PARISI * tail(a))
}

pub fn g2(alpha: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    Ok(-cross(a) - CRUDE * tail(a))
}

pub fn h1(alpha: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    let s = -cross(a) - PARISI * (1.0 - tail(a));
    Ok(a - s * s / LN_2)
}

pub fn h2(alpha: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    let s = -cross(a) - PARISI - CRUDE * tail(a);
    Ok(a - s * s / LN_2)
}

impl AlphaFunction {
    pub const ALL: [AlphaFunction; 4] = [AlphaFunction::G1, AlphaFunction::G2, AlphaFunction::H1, AlphaFunction::H2];

    pub fn eval(self, alpha: f64) -> Result<f64> {
        match self {
            AlphaFunction::G1 => g1(alpha),
            AlphaFunction::G2 => g2(alpha),
            AlphaFunction::H1 => h1(alpha),
            AlphaFunction::H2 => h2(alpha),
        }
    }

    /// Interval on which the function's claim is made.
    pub fn claim_interval(self) -> (f64, f64) {
        match self {
            AlphaFunction::G1 => (0.4, 1.0),
            AlphaFunction::G2 | AlphaFunction::H2 => (0.9, 1.0),
            AlphaFunction::H1 => (0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanResult {
    pub alpha: f64,
    pub value: f64,
    /// Estimated bound on how far the true maximum may exceed `value`.
    pub resolution: f64,
}

const GOLDEN_TOL: f64 = 1e-8;

/// Maximum of `f` on `[lo, hi]` from a uniform grid of `grid_points`
/// points, optionally refined by golden-section search on the neighbouring
/// grid cells.
///
/// The resolution bound is `L h / 2` for the grid (or `L tol` after
/// refinement), with `L` the largest finite-difference slope seen on the
/// grid.
pub fn max_scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid_points: usize, refine: bool) -> ScanResult {
    assert!(grid_points >= 2 && hi > lo, "degenerate scan");
    let h = (hi - lo) / (grid_points - 1) as f64;
    let at = |i: usize| if i + 1 == grid_points { hi } else { lo + i as f64 * h };
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut slope: f64 = 0.0;
    let mut prev = f64::NAN;
    for i in 0..grid_points {
        let v = f(at(i));
        if i > 0 {
            slope = slope.max(((v - prev) / h).abs());
        }
        prev = v;
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, v) = best;
    if !refine {
        return ScanResult {
            alpha: at(i),
            value: v,
            resolution: slope * h / 2.0,
        };
    }
    let (mut a, mut b) = (at(i.saturating_sub(1)), at((i + 1).min(grid_points - 1)));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let (alpha, value) = [(at(i), v), (c, fc), (d, fd)]
        .into_iter()
        .fold((at(i), v), |acc, p| if p.1 > acc.1 { p } else { acc });
    ScanResult {
        alpha,
        value,
        resolution: slope * GOLDEN_TOL,
    }
}

/// Minimum through `max_scan` of `-f`.
pub fn min_scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid_points: usize, refine: bool) -> ScanResult {
    let m = max_scan(|x| -f(x), lo, hi, grid_points, refine);
    ScanResult { value: -m.value, ..m }
}

/// Outcome of one inequality checked on an interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub function: AlphaFunction,
    pub interval: (f64, f64),
    /// `"max < threshold"` or `"min >= threshold"`.
    pub claim: &'static str,
    pub threshold: f64,
    pub extremum: ScanResult,
    pub pass: bool,
}

/// Checks `max h1 < 0.45003` on `[0,1]`, `max h2 < 0.45003` on `[0.9,1]`,
/// `min g1 >= -0.763` on `[0.4,1]` and `min g2 >= -0.763` on `[0.9,1]`, each
/// with its resolution bound counted against it.
pub fn verify_alpha_claims(grid_points: usize, refine: bool) -> Vec<ClaimCheck> {
    AlphaFunction::ALL
        .iter()
        .map(|&func| {
            let (lo, hi) = func.claim_interval();
            let eval = |a: f64| func.eval(a).expect("grid stays inside [0, 1]");
            match func {
                AlphaFunction::H1 | AlphaFunction::H2 => {
                    let s = max_scan(eval, lo, hi, grid_points, refine);
                    ClaimCheck {
                        function: func,
                        interval: (lo, hi),
                        claim: "max < threshold",
                        threshold: H_CEILING,
                        pass: s.value + s.resolution < H_CEILING,
                        extremum: s,
                    }
                }
                AlphaFunction::G1 | AlphaFunction::G2 => {
                    let s = min_scan(eval, lo, hi, grid_points, refine);
                    ClaimCheck {
                        function: func,
                        interval: (lo, hi),
                        claim: "min >= threshold",
                        threshold: G_FLOOR,
                        pass: s.value - s.resolution >= G_FLOOR,
                        extremum: s,
                    }
                }
            }
        })
        .collect()
}

/// `(alpha, f(alpha))` on a uniform grid, for plotting.
pub fn alpha_table(func: AlphaFunction, lo: f64, hi: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let a = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            Ok((a, func.eval(a.clamp(0.0, 1.0))?))
        })
        .collect()
}

/// Lower bound `-0.601 sqrt(n) - 0.833 n^{3/2}` on the expected ground-state
/// energy of an `n`-spin instance.
pub fn lemma3_bound(n: usize) -> f64 {
    let n = n as f64;
    -0.601 * n.sqrt() - 0.833 * n.powf(1.5)
}

/// Exact continuous ground-state energies of `samples` instances, instance
/// `i` drawn with `instance_seed(seed, i)`.
pub fn sample_minima(n: usize, samples: usize, seed: u64) -> Vec<f64> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| brute_force_min(&SkInstance::generate(n, instance_seed(seed, i))).0)
        .collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma3Report {
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    pub bound: f64,
    /// `mean + 4 std_err >= bound`.
    pub pass: bool,
}

pub fn lemma3_check(n: usize, samples: usize, seed: u64) -> Lemma3Report {
    let (mean, std_err) = mean_and_se(&sample_minima(n, samples, seed));
    let bound = lemma3_bound(n);
    Lemma3Report {
        n,
        samples,
        mean,
        std_err,
        bound,
        pass: mean + 4.0 * std_err >= bound,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub t: f64,
    /// Fraction of samples with `f - mean >= t`.
    pub upper_tail: f64,
    /// Fraction of samples with `mean - f >= t`.
    pub lower_tail: f64,
    /// `exp(-t^2 / (2N))`, `N = n(n-1)/2`.
    pub bound: f64,
    /// Four binomial standard errors of a tail with probability `bound`.
    pub slack: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub rows: Vec<TailRow>,
}

impl ConcentrationReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| !r.violated)
    }
}

/// Default deviations: `k sqrt(N) / 2` for `k = 0..=8`, then `n^{3/2}`.
pub fn default_t_grid(n: usize) -> Vec<f64> {
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let mut t: Vec<f64> = (0..=8).map(|k| k as f64 * pairs.sqrt() / 2.0).collect();
    t.push((n as f64).powf(1.5));
    t
}

/// Empirical two-sided tails of the ground-state energy around its sample
/// mean against the bounded-differences tail bound.
pub fn concentration_check(n: usize, trials: usize, t_grid: &[f64], seed: u64) -> ConcentrationReport {
    let f = sample_minima(n, trials, seed);
    let (mean, _) = mean_and_se(&f);
    let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
    let m = trials as f64;
    let rows = t_grid
        .iter()
        .map(|&t| {
            let upper = f.iter().filter(|&&x| x - mean >= t).count() as f64 / m;
            let lower = f.iter().filter(|&&x| mean - x >= t).count() as f64 / m;
            let bound = (-t * t / (2.0 * pairs)).exp();
            let slack = 4.0 * (bound * (1.0 - bound) / m).sqrt();
            TailRow {
                t,
                upper_tail: upper,
                lower_tail: lower,
                bound,
                slack,
                violated: upper.max(lower) > bound + slack,
            }
        })
        .collect();
    ConcentrationReport {
        n,
        trials,
        mean,
        rows,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TminTailReport {
    pub n: usize,
    pub instances: usize,
    /// `2^{exponent n}`.
    pub threshold: f64,
    pub exceeding: usize,
    pub fraction: f64,
    pub max_fraction: f64,
    pub pass: bool,
}

/// Size of the full-tree (no spin pinned) truncated tree at the optimum,
/// for instance `index` of size `n` in a sweep with base `seed`.
pub fn full_tree_t_min(n: usize, seed: u64, index: u64) -> Result<u64> {
    let inst = SkInstance::generate(n, sweep_seed(seed, n, index));
    let d = discretize(&inst, default_precision(n))?;
    let suffix = suffix_minima(&d);
    let oracle = sk_oracle(&d, &suffix, false);
    let c_min = crate::Cost::Finite((suffix.min_energy() + d.shift()) as u64);
    truncated_size(&oracle, c_min)
}

/// Fraction of instances whose truncated tree at the optimum has at least
/// `2^{exponent n}` nodes, against `max_fraction`.
pub fn tmin_tail_check(n: usize, instances: usize, seed: u64, exponent: f64, max_fraction: f64) -> Result<TminTailReport> {
    let sizes: Vec<u64> = (0..instances as u64)
        .into_par_iter()
        .map(|i| full_tree_t_min(n, seed, i))
        .collect::<Result<_>>()?;
    let threshold = (exponent * n as f64).exp2();
    let exceeding = sizes.iter().filter(|&&t| t as f64 >= threshold).count();
    let fraction = exceeding as f64 / instances.max(1) as f64;
    Ok(TminTailReport {
        n,
        instances,
        threshold,
        exceeding,
        fraction,
        max_fraction,
        pass: fraction <= max_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        assert_eq!(g1(1.0).unwrap(), 0.0);
        assert_eq!(g2(1.0).unwrap(), 0.0);
        assert!((g1(0.0).unwrap() - PARISI).abs() < 1e-15);
        assert_eq!(h1(0.0).unwrap(), 0.0);
        let want = 1.0 - 0.763167f64.powi(2) / 2f64.ln();
        assert!((h1(1.0).unwrap() - want).abs() < 1e-12);
        assert!(matches!(h2(1.5), Err(Error::Domain { .. })));
        assert!(g1(-0.1).is_err());
    }

    #[test]
    fn scan_of_constant_and_parabola() {
        let c = max_scan(|_| 2.5, 0.0, 1.0, 1000, true);
        assert_eq!(c.value, 2.5);
        assert_eq!(c.resolution, 0.0);
        let p = max_scan(|x| -(x - 0.3137).powi(2), 0.0, 1.0, 1000, true);
        assert!((p.alpha - 0.3137).abs() < 1e-6);
        let coarse = max_scan(|x| -(x - 0.3137).powi(2), 0.0, 1.0, 1000, false);
        assert!(coarse.value <= p.value);
        assert!(p.value - coarse.value <= coarse.resolution);
    }

    #[test]
    fn claims_hold_at_moderate_grid() {
        for c in verify_alpha_claims(1000, true) {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn lemma3_bound_shape() {
        assert!((lemma3_bound(1) + 1.434).abs() < 1e-12);
        for n in 1..50 {
            assert!(lemma3_bound(n + 1) < lemma3_bound(n));
        }
    }

    #[test]
    fn zero_deviation_never_violates() {
        let r = concentration_check(6, 50, &[0.0], 1);
        assert_eq!(r.rows[0].bound, 1.0);
        assert!(r.pass());
    }
}
