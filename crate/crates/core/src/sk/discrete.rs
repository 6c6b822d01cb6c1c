use super::SkInstance;
use crate::{Error, Result};

/// Integer couplings `floor(a_ij 2^p)` plus the shift that makes every bound
/// nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizedSkInstance {
    n: usize,
    a: Vec<i64>,
    p: u32,
    shift: i64,
    c_max: u64,
}

/// `ceil(log2 n) + 6`.
pub fn default_precision(n: usize) -> u32 {
    n.max(1).next_power_of_two().trailing_zeros() + 6
}

pub fn discretize(inst: &SkInstance, p: u32) -> Result<DiscretizedSkInstance> {
    if !(1..=40).contains(&p) {
        return Err(Error::Domain {
            what: "precision bits",
            value: f64::from(p),
            lo: 1.0,
            hi: 40.0,
        });
    }
    let n = inst.n();
    let scale = (p as f64).exp2();
    let mut a = vec![0i64; n * n];
    let mut shift = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let v = (inst.coupling(i, j) * scale).floor() as i64;
            a[i * n + j] = v;
            a[j * n + i] = v;
            shift += v.abs();
        }
    }
    Ok(DiscretizedSkInstance::from_parts(n, a, p, shift))
}

impl DiscretizedSkInstance {
    fn from_parts(n: usize, a: Vec<i64>, p: u32, shift: i64) -> Self {
        let c_max = (2 * shift as u64 + 1).next_power_of_two();
        DiscretizedSkInstance { n, a, p, shift, c_max }
    }

    /// Builds an instance directly from integer couplings `f(i, j)`, `i < j`.
    pub fn from_integers(n: usize, p: u32, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut a = vec![0i64; n * n];
        let mut shift = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                a[i * n + j] = v;
                a[j * n + i] = v;
                shift += v.abs();
            }
        }
        Self::from_parts(n, a, p, shift)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn c_max(&self) -> u64 {
        self.c_max
    }

    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    /// Row `i` of the symmetric coupling matrix.
    pub fn row(&self, i: usize) -> &[i64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn energy(&self, x: &[i8]) -> i64 {
        assert_eq!(x.len(), self.n);
        let mut e = 0;
        for i in 0..self.n {
            let r = self.row(i);
            for j in i + 1..self.n {
                e += r[j] * i64::from(x[i] * x[j]);
            }
        }
        e
    }

    /// Integer energy back in continuous units.
    pub fn to_continuous(&self, e: i64) -> f64 {
        e as f64 / (self.p as f64).exp2()
    }
}
