//! Counting nonnegative integer matrices with prescribed row and column sums.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// A tuple of nonnegative line sums with its total cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumVector {
    entries: Vec<u32>,
    total: u64,
}

impl SumVector {
    pub fn new(entries: Vec<u32>) -> Self {
        let total = entries.iter().map(|&e| u64::from(e)).sum();
        Self { entries, total }
    }

    /// The constant tuple `(t, ..., t)` of length `len`.
    pub fn constant(len: usize, t: u32) -> Self {
        Self::new(vec![t; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted into weakly increasing order.
    pub fn normalized(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        Self {
            entries,
            total: self.total,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }
}

impl From<Vec<u32>> for SumVector {
    fn from(entries: Vec<u32>) -> Self {
        Self::new(entries)
    }
}

impl<const N: usize> From<[u32; N]> for SumVector {
    fn from(entries: [u32; N]) -> Self {
        Self::new(entries.to_vec())
    }
}

/// Number of distinct rearrangements of `y`: `k! / (k_1! ... k_l!)`.
pub fn multiplicity(y: &SumVector) -> BigInt {
    BigInt::from(multiplicity_of(y.entries()))
}

pub(crate) fn multiplicity_of(y: &[u32]) -> BigUint {
    let mut sorted = y.to_vec();
    sorted.sort_unstable();
    let mut result = factorial(sorted.len());
    for run in sorted.chunk_by(|a, b| a == b) {
        result /= factorial(run.len());
    }
    result
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `N((x1, x2), (y1, y2)) = min(x1, x2, y1, y2) + 1` when the totals agree.
pub fn count_2x2(x: &SumVector, y: &SumVector) -> BigInt {
    assert!(x.len() == 2 && y.len() == 2, "count_2x2 needs 2-long sum vectors");
    if x.total() != y.total() {
        return BigInt::zero();
    }
    let e = x.entries();
    let f = y.entries();
    BigInt::from(e[0].min(e[1]).min(f[0]).min(f[1]) + 1)
}

/// Where the rows are split in the recursion
/// `N(r, c) = sum_x N(r_top, x) N(r_bottom, c - x)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Split {
    /// `k = floor(m / 2)`.
    #[default]
    Half,
    /// `k = 1`.
    First,
}

impl Split {
    fn point(self, m: usize) -> usize {
        match self {
            Self::Half => m / 2,
            Self::First => 1,
        }
    }
}

/// Number of nonnegative integer matrices with row sums `r` and column sums
/// `c`; zero when the totals differ.
pub fn count_contingency(r: &SumVector, c: &SumVector) -> BigInt {
    count_contingency_split(r, c, Split::Half)
}

pub fn count_contingency_split(r: &SumVector, c: &SumVector, split: Split) -> BigInt {
    let mut counter = ContingencyCounter::new(split);
    BigInt::from(counter.count(r.entries(), c.entries()))
}

/// Memoized evaluator for [`count_contingency`].
pub(crate) struct ContingencyCounter {
    split: Split,
    memo: HashMap<(Vec<u32>, Vec<u32>), BigUint>,
}

impl ContingencyCounter {
    pub(crate) fn new(split: Split) -> Self {
        Self {
            split,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn count(&mut self, r: &[u32], c: &[u32]) -> BigUint {
        let total_r: u64 = r.iter().map(|&x| u64::from(x)).sum();
        let total_c: u64 = c.iter().map(|&x| u64::from(x)).sum();
        if total_r != total_c {
            return BigUint::zero();
        }
        // Zero lines carry no freedom; order is irrelevant; and transposing
        // lets the recursion split the shorter side.
        let mut r: Vec<u32> = r.iter().copied().filter(|&x| x > 0).collect();
        let mut c: Vec<u32> = c.iter().copied().filter(|&x| x > 0).collect();
        r.sort_unstable();
        c.sort_unstable();
        if r.len() > c.len() {
            std::mem::swap(&mut r, &mut c);
        }
        match r.len() {
            0 | 1 => return BigUint::one(),
            2 => return BigUint::from(bounded_compositions(u64::from(r[0]), &c)),
            _ => {}
        }
        let key = (r, c);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (r, c) = &key;
        let k = self.split.point(r.len());
        let (top, bottom) = r.split_at(k);
        let top_total: u32 = top.iter().sum();
        let mut sum = BigUint::zero();
        let mut x = vec![0u32; c.len()];
        let mut parts = Vec::new();
        for_each_bounded_composition(top_total, c, &mut x, 0, &mut |x| {
            parts.push(x.to_vec());
        });
        for x in parts {
            let upper = self.count(top, &x);
            if upper.is_zero() {
                continue;
            }
            let rest: Vec<u32> = c.iter().zip(&x).map(|(a, b)| a - b).collect();
            sum += upper * self.count(bottom, &rest);
        }
        self.memo.insert(key, sum.clone());
        sum
    }
}

/// Calls `f` on every `x` with `x[i] <= bounds[i]` and `sum(x) == total`.
pub(crate) fn for_each_bounded_composition(
    total: u32,
    bounds: &[u32],
    x: &mut [u32],
    at: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if at + 1 == bounds.len() {
        if total <= bounds[at] {
            x[at] = total;
            f(x);
        }
        return;
    }
    if at == bounds.len() {
        if total == 0 {
            f(x);
        }
        return;
    }
    let room: u32 = bounds[at + 1..].iter().sum();
    let lo = total.saturating_sub(room);
    for v in lo..=bounds[at].min(total) {
        x[at] = v;
        for_each_bounded_composition(total - v, bounds, x, at + 1, f);
    }
}

/// Number of `u` with `0 <= u[i] <= bounds[i]` and `sum(u) == total`, i.e. the
/// number of two-row tables with first row sum `total` and column sums `bounds`.
pub(crate) fn bounded_compositions(total: u64, bounds: &[u32]) -> u64 {
    let mut ways = vec![0u64; total as usize + 1];
    ways[0] = 1;
    for &b in bounds {
        let b = b as usize;
        // Prefix sums turn the bounded convolution into O(total).
        let mut next = vec![0u64; ways.len()];
        let mut window = 0u64;
        for s in 0..ways.len() {
            window += ways[s];
            if s > b {
                window -= ways[s - b - 1];
            }
            next[s] = window;
        }
        ways = next;
    }
    ways[total as usize]
}
