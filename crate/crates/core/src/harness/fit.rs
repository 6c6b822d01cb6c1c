use std::collections::BTreeMap;

use serde::Serialize;

use super::SweepRecord;
use crate::{Error, Result};

/// Least-squares line `log2(median size) = slope n + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub n_min_used: usize,
    /// Root mean square of the log2 residuals.
    pub residual: f64,
    /// `(n, median)` pairs that entered the fit.
    pub points: Vec<(usize, f64)>,
}

pub fn median(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty(), "median of nothing");
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        (xs[m / 2 - 1] + xs[m / 2]) / 2.0
    }
}

/// Median of `value(record)` per `n`, in increasing `n`.
pub fn medians_by_n(records: &[SweepRecord], value: impl Fn(&SweepRecord) -> f64) -> Vec<(usize, f64)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(r.n).or_default().push(value(r));
    }
    groups.into_iter().map(|(n, mut v)| (n, median(&mut v))).collect()
}

/// Fits `log2 y` against `n` over the points with `n >= n_min`.
pub fn fit_points(points: &[(usize, f64)], n_min: usize) -> Result<FitResult> {
    let used: Vec<(usize, f64)> = points.iter().copied().filter(|&(n, _)| n >= n_min).collect();
    let mut distinct: Vec<usize> = used.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFewPoints(distinct.len()));
    }
    let m = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(FitResult {
        slope,
        intercept,
        n_min_used: used.iter().map(|p| p.0).min().unwrap_or(n_min),
        residual: (sse / m).sqrt(),
        points: used,
    })
}

/// Fit of the median depth-first tree size per `n`.
pub fn fit_records(records: &[SweepRecord], n_min: usize) -> Result<FitResult> {
    fit_points(&medians_by_n(records, |r| r.tree_size_dfs as f64), n_min)
}

/// Slope of `y` on `x` with a separate intercept per group (the pooled
/// within-group regression). Groups with fewer than two points or no
/// spread in `x` contribute nothing.
pub fn pooled_slope(groups: &[Vec<(f64, f64)>]) -> Option<f64> {
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for g in groups.iter().filter(|g| g.len() >= 2) {
        let m = g.len() as f64;
        let mx = g.iter().map(|p| p.0).sum::<f64>() / m;
        let my = g.iter().map(|p| p.1).sum::<f64>() / m;
        sxy += g.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>();
        sxx += g.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    }
    (sxx > 0.0).then(|| sxy / sxx)
}
