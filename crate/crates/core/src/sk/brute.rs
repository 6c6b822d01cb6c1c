use std::ops::{Add, Mul, Sub};

use super::{DiscretizedSkInstance, SkInstance};

/// Scalar type a spin-glass energy can be accumulated in.
pub trait Weight: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    const ZERO: Self;
    fn from_spin(s: i8) -> Self;
}

impl Weight for f64 {
    const ZERO: f64 = 0.0;
    fn from_spin(s: i8) -> f64 {
        f64::from(s)
    }
}

impl Weight for i64 {
    const ZERO: i64 = 0;
    fn from_spin(s: i8) -> i64 {
        i64::from(s)
    }
}

/// Exhaustive minimum of `sum_{i<j} a(i, j) x_i x_j` by Gray-code
/// enumeration with the first spin pinned to `+1`.
///
/// Each step flips one spin and updates the local fields in `O(n)`, so the
/// whole scan is `O(n 2^n)`. Returns the minimum and a minimiser.
pub fn gray_code_min<W: Weight>(n: usize, a: impl Fn(usize, usize) -> W) -> (W, Vec<i8>) {
    assert!(n <= 40, "exhaustive search over {n} spins");
    if n <= 1 {
        return (W::ZERO, vec![1; n]);
    }
    let mut x = vec![1i8; n];
    let mut field = vec![W::ZERO; n];
    let mut e = W::ZERO;
    for (i, f) in field.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            *f = *f + a(i, j);
        }
        for j in i + 1..n {
            e = e + a(i, j);
        }
    }
    let mut best = (e, x.clone());
    let two = W::from_spin(1) + W::from_spin(1);
    for step in 1u64..1 << (n - 1) {
        // spins 1..n follow the reflected Gray code
        let k = step.trailing_zeros() as usize + 1;
        let s = W::from_spin(x[k]);
        e = e - two * s * field[k];
        for (j, f) in field.iter_mut().enumerate() {
            if j != k {
                *f = *f - two * s * a(j, k);
            }
        }
        x[k] = -x[k];
        if e < best.0 {
            best = (e, x.clone());
        }
    }
    best
}

/// Exact continuous ground-state energy and a minimiser.
pub fn brute_force_min(inst: &SkInstance) -> (f64, Vec<i8>) {
    gray_code_min(inst.n(), |i, j| inst.coupling(i, j))
}

/// Exact discretized ground-state energy (unshifted) and a minimiser.
pub fn brute_force_min_discrete(inst: &DiscretizedSkInstance) -> (i64, Vec<i8>) {
    gray_code_min(inst.n(), |i, j| inst.coupling(i, j))
}
