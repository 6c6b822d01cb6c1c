//! Sherrington-Kirkpatrick spin glasses.
//!
//! `H(x) = sum_{i<j} a_ij x_i x_j` over `x in {+1, -1}^n` with independent
//! standard-normal couplings. Instances are discretized to integers, the
//! exact minima of every suffix sub-Hamiltonian are precomputed bottom-up,
//! and the resulting three-term lower bound drives a binary branch-and-bound
//! tree.

mod bound;
mod brute;
mod discrete;
mod suffix;

use std::fs;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

pub use bound::{bound_a, sk_oracle, SkBoundOracle, SkOracle};
pub use brute::{brute_force_min, brute_force_min_discrete, gray_code_min, Weight};
pub use discrete::{default_precision, discretize, DiscretizedSkInstance};
pub use suffix::{suffix_minima, SuffixMinima};

/// Limiting ground-state energy per `n^{3/2}`.
pub const PARISI: f64 = -0.763167;

pub fn parisi_reference() -> f64 {
    PARISI
}

/// Instance with real couplings `a_ij`, `i < j` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SkInstance {
    n: usize,
    /// Row-major `n x n`, symmetric, zero diagonal.
    a: Vec<f64>,
    seed: u64,
}

impl SkInstance {
    /// Draws the couplings row by row (`a_01, a_02, ..., a_12, ...`) from a
    /// ChaCha8 stream seeded with `seed`.
    pub fn generate(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, seed, |_, _| StandardNormal.sample(&mut rng))
    }

    /// Builds an instance from `f(i, j)` called for `i < j` in row-major order.
    pub fn from_fn(n: usize, seed: u64, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        SkInstance { n, a, seed }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `a_ij`, symmetric in its arguments; zero on the diagonal.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn energy(&self, x: &[i8]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut e = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                e += self.coupling(i, j) * f64::from(x[i] * x[j]);
            }
        }
        e
    }

    /// Writes the text format: header `n p seed`, then one `i j a_ij` line
    /// per pair with 1-based indices.
    pub fn save(&self, path: &Path, p: u32) -> Result<()> {
        fs::write(path, self.to_text(p)).map_err(|e| Error::io(path, e))
    }

    pub fn to_text(&self, p: u32) -> String {
        let mut s = format!("{} {} {}\n", self.n, p, self.seed);
        for i in 0..self.n {
            for j in i + 1..self.n {
                s.push_str(&format!("{} {} {}\n", i + 1, j + 1, self.coupling(i, j)));
            }
        }
        s
    }

    /// Reads an instance file; returns the instance and its precision bits.
    pub fn load(path: &Path) -> Result<(SkInstance, u32)> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<(SkInstance, u32)> {
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_string(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(err(1, format!("expected `n p seed`, got {header:?}")));
        }
        let n: usize = h[0].parse().map_err(|e| err(1, format!("n: {e}")))?;
        let p: u32 = h[1].parse().map_err(|e| err(1, format!("p: {e}")))?;
        let seed: u64 = h[2].parse().map_err(|e| err(1, format!("seed: {e}")))?;
        if n == 0 {
            return Err(err(1, "n must be at least 1".into()));
        }
        let mut a = vec![f64::NAN; n * n];
        for i in 0..n {
            a[i * n + i] = 0.0;
        }
        for (k, line) in lines {
            let ln = k + 1;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err(ln, format!("expected `i j a_ij`, got {line:?}")));
            }
            let i: usize = f[0].parse().map_err(|e| err(ln, format!("i: {e}")))?;
            let j: usize = f[1].parse().map_err(|e| err(ln, format!("j: {e}")))?;
            let v: f64 = f[2].parse().map_err(|e| err(ln, format!("a_ij: {e}")))?;
            if !(1 <= i && i < j && j <= n) {
                return Err(err(ln, format!("pair ({i}, {j}) is not 1 <= i < j <= {n}")));
            }
            if !v.is_finite() {
                return Err(err(ln, format!("coupling {v} is not finite")));
            }
            a[(i - 1) * n + (j - 1)] = v;
            a[(j - 1) * n + (i - 1)] = v;
        }
        if let Some(k) = a.iter().position(|v| v.is_nan()) {
            return Err(err(0, format!("missing coupling ({}, {})", k / n + 1, k % n + 1)));
        }
        Ok((SkInstance { n, a, seed }, p))
    }
}

/// Seed of instance `index` in a sweep with base seed `base`: the first word
/// of ChaCha8 stream `index` under key `base`.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

/// Seed of instance `index` of size `n` in a sweep: streams are keyed by
/// `n` as well, so instances of different sizes share no couplings.
pub fn sweep_seed(base: u64, n: usize, index: u64) -> u64 {
    instance_seed(base, ((n as u64) << 32) | (index & 0xffff_ffff))
}
