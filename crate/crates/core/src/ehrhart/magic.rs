//! Magic-square counting by splitting the square into a top and bottom half
//! and each half into left and right column blocks.
//!
//! With `a` top rows, `b = n - a` bottom rows, `kl` left and `kr` right
//! columns:
//!
//! ```text
//! e(B_n, t)  = sum_y M(y) N(R_a, y) N(R_b, T - y)          y sorted, |y| = a t
//! N(R_a, y)  = sum_x M(x) N(x, y_left) N(t - x, y_right)   x sorted, |x| = |y_left|
//! ```
//!
//! The inner `N(x, y)` for sorted `x`, `y` of length at most 4 are tabulated
//! once per counter, grouped by total so each group is a dense block.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::MAX_ORDER;

use super::sums::for_each_bounded_composition;

/// How `N((p, q), z)` (two rows, up to four columns) is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TwoRowCounts {
    /// Tabulated for every `p` and bounded `z` before counting starts.
    #[default]
    Cached,
    /// Recomputed by inclusion-exclusion at every use.
    OnDemand,
}

const MAX_CACHED_TWO_ROW: usize = 1 << 26;

/// `C(v, k)` for small arguments, as a dense table.
#[derive(Clone, Debug)]
struct Binomials {
    table: Vec<Vec<u64>>,
}

impl Binomials {
    fn new(max_v: usize, max_k: usize) -> Self {
        let mut table = vec![vec![0u64; max_k + 1]; max_v + 1];
        for v in 0..=max_v {
            table[v][0] = 1;
            for k in 1..=max_k.min(v) {
                table[v][k] = table[v - 1][k - 1] + if k < v { table[v - 1][k] } else { 0 };
            }
        }
        Self { table }
    }

    fn get(&self, v: i64, k: usize) -> u64 {
        if v < 0 || (v as usize) < k {
            0
        } else {
            self.table[v as usize][k]
        }
    }
}

/// Ranks weakly increasing tuples of a fixed length with entries `<= max`.
///
/// `x` maps to the strictly increasing `x[i] + i`, ranked in the
/// combinatorial number system, so ranks are dense in `0..C(max + len, len)`.
#[derive(Clone, Debug)]
struct Ranker {
    len: usize,
    max: u32,
    binom: Binomials,
}

impl Ranker {
    fn new(len: usize, max: u32) -> Self {
        Self {
            len,
            max,
            binom: Binomials::new(max as usize + len + 1, len + 1),
        }
    }

    fn size(&self) -> usize {
        self.binom.get(i64::from(self.max) + self.len as i64, self.len) as usize
    }

    #[inline]
    fn rank(&self, x: &[u32]) -> usize {
        debug_assert_eq!(x.len(), self.len);
        let mut r = 0u64;
        for (i, &v) in x.iter().enumerate() {
            r += self.binom.table[v as usize + i][i + 1];
        }
        r as usize
    }

    /// All sorted tuples, bucketed by total.
    fn by_sum(&self) -> Vec<Vec<Vec<u32>>> {
        let mut out = vec![Vec::new(); self.len * self.max as usize + 1];
        let mut x = vec![0u32; self.len];
        sorted_tuples(self.len, self.max, &mut x, 0, 0, &mut |x| {
            let s: u32 = x.iter().sum();
            out[s as usize].push(x.to_vec());
        });
        out
    }
}

fn sorted_tuples(len: usize, max: u32, x: &mut [u32], at: usize, lo: u32, f: &mut impl FnMut(&[u32])) {
    if at == len {
        f(x);
        return;
    }
    for v in lo..=max {
        x[at] = v;
        sorted_tuples(len, max, x, at + 1, v, f);
    }
}

/// Sorted tuples of length `len`, entries `<= max`, total exactly `total`.
fn sorted_tuples_with_sum(len: usize, max: u32, total: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, max: u32, left: u32, lo: u32, x: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let remaining = (len - x.len()) as u32;
        if remaining == 0 {
            if left == 0 {
                out.push(x.clone());
            }
            return;
        }
        for v in lo..=max {
            // Every later entry is at least v and at most max.
            if v * remaining > left {
                break;
            }
            if left - v > max * (remaining - 1) {
                continue;
            }
            x.push(v);
            go(len, max, left - v, v, x, out);
            x.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, total, 0, &mut Vec::with_capacity(len), &mut out);
    out
}

/// `N((p, q), z)`: number of `u <= z` with `|u| = p`, for `z` of length at
/// most `cols` and entries at most `max`.
#[derive(Clone, Debug)]
struct TwoRow {
    mode: TwoRowCounts,
    cols: usize,
    side: usize,
    table: Vec<u32>,
    binom: Binomials,
}

impl TwoRow {
    fn new(mode: TwoRowCounts, cols: usize, max: u32) -> Self {
        let side = max as usize + 1;
        // Past this size the table costs more memory than it saves time.
        let mode = match side.checked_pow(cols as u32 + 1) {
            Some(size) if size <= MAX_CACHED_TWO_ROW => mode,
            _ => TwoRowCounts::OnDemand,
        };
        let binom = Binomials::new(cols * side + cols + 1, cols + 1);
        let mut this = Self {
            mode,
            cols,
            side,
            table: Vec::new(),
            binom,
        };
        if mode == TwoRowCounts::Cached {
            let size = side.pow(cols as u32 + 1);
            let table: Vec<u32> = (0..size)
                .into_par_iter()
                .map(|idx| {
                    let mut rest = idx;
                    let mut z = [0u32; 4];
                    for i in (0..cols).rev() {
                        z[i] = (rest % side) as u32;
                        rest /= side;
                    }
                    this.inclusion_exclusion(rest as u32, &z[..cols]) as u32
                })
                .collect();
            this.table = table;
        }
        this
    }

    fn inclusion_exclusion(&self, p: u32, z: &[u32]) -> u64 {
        let k = z.len();
        if k == 0 {
            return u64::from(p == 0);
        }
        let mut total: i64 = 0;
        for mask in 0u32..(1 << k) {
            let shift: i64 = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i64::from(z[i]) + 1)
                .sum();
            let top = i64::from(p) - shift + k as i64 - 1;
            let term = self.binom.get(top, k - 1) as i64;
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total as u64
    }

    /// `z` may be shorter than `cols`; missing entries are zero.
    #[inline]
    fn get(&self, p: u32, z: &[u32]) -> u64 {
        match self.mode {
            TwoRowCounts::OnDemand => self.inclusion_exclusion(p, z),
            TwoRowCounts::Cached => {
                let mut idx = p as usize;
                for i in 0..self.cols {
                    idx = idx * self.side + z.get(i).copied().unwrap_or(0) as usize;
                }
                u64::from(self.table[idx])
            }
        }
    }

    /// `N(x, y)` for sorted `x`, `y` of length at most 4, equal totals.
    fn count(&self, x: &[u32], y: &[u32]) -> u64 {
        let (mut x, mut y) = (x, y);
        if x.len() == 4 && y.len() == 4 && y[0] + y[1] < x[0] + x[1] {
            std::mem::swap(&mut x, &mut y);
        }
        match x.len() {
            0 => u64::from(y.iter().all(|&v| v == 0)),
            1 => 1,
            2 => self.get(x[0], y),
            3 => {
                let mut acc = 0u64;
                let mut z = [0u32; 4];
                let mut rest = [0u32; 4];
                for_each_bounded_composition(x[0], y, &mut z[..y.len()], 0, &mut |z| {
                    for i in 0..y.len() {
                        rest[i] = y[i] - z[i];
                    }
                    acc += self.get(x[1], &rest[..y.len()]);
                });
                acc
            }
            4 => {
                let mut acc = 0u64;
                let mut z = [0u32; 4];
                let mut rest = [0u32; 4];
                for_each_bounded_composition(x[0] + x[1], y, &mut z[..y.len()], 0, &mut |z| {
                    let upper = self.get(x[0], z);
                    if upper == 0 {
                        return;
                    }
                    for i in 0..y.len() {
                        rest[i] = y[i] - z[i];
                    }
                    acc += upper * self.get(x[2], &rest[..y.len()]);
                });
                acc
            }
            _ => unreachable!("tables hold at most four rows"),
        }
    }
}

/// Stored `N(x, y)` for all sorted `x` (length `rows`) and sorted `y`
/// (length `cols`) with entries at most `max_entry` and `|x| = |y|`.
#[derive(Clone, Debug)]
pub struct CountTable {
    rows: usize,
    cols: usize,
    max_entry: u32,
    row_ranker: Ranker,
    col_ranker: Ranker,
    row_pos: Vec<u32>,
    col_pos: Vec<u32>,
    block_offset: Vec<usize>,
    block_width: Vec<usize>,
    values: Vec<u64>,
}

impl CountTable {
    fn build(rows: usize, cols: usize, max_entry: u32, two_row: &TwoRow) -> Self {
        let row_ranker = Ranker::new(rows, max_entry);
        let col_ranker = Ranker::new(cols, max_entry);
        let row_groups = row_ranker.by_sum();
        let col_groups = col_ranker.by_sum();
        let sums = row_groups.len().min(col_groups.len());

        let mut row_pos = vec![0u32; row_ranker.size()];
        let mut col_pos = vec![0u32; col_ranker.size()];
        for group in &row_groups {
            for (i, x) in group.iter().enumerate() {
                row_pos[row_ranker.rank(x)] = i as u32;
            }
        }
        for group in &col_groups {
            for (j, y) in group.iter().enumerate() {
                col_pos[col_ranker.rank(y)] = j as u32;
            }
        }

        let mut block_offset = Vec::with_capacity(sums);
        let mut block_width = Vec::with_capacity(sums);
        let mut jobs = Vec::new();
        let mut offset = 0;
        for s in 0..sums {
            block_offset.push(offset);
            block_width.push(col_groups[s].len());
            offset += row_groups[s].len() * col_groups[s].len();
            jobs.extend(row_groups[s].iter().map(|x| (x, &col_groups[s])));
        }
        let values: Vec<u64> = jobs
            .par_iter()
            .flat_map_iter(|(x, ys)| ys.iter().map(|y| two_row.count(x, y)))
            .collect();
        debug_assert_eq!(values.len(), offset);

        Self {
            rows,
            cols,
            max_entry,
            row_ranker,
            col_ranker,
            row_pos,
            col_pos,
            block_offset,
            block_width,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn max_entry(&self) -> u32 {
        self.max_entry
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `N(x, y)` if the table covers the pair. Inputs need not be sorted.
    pub fn get(&self, x: &[u32], y: &[u32]) -> Option<BigInt> {
        if x.len() != self.rows || y.len() != self.cols {
            return None;
        }
        if x.iter().chain(y).any(|&v| v > self.max_entry) {
            return None;
        }
        let sx: u32 = x.iter().sum();
        let sy: u32 = y.iter().sum();
        if sx != sy {
            return Some(BigInt::zero());
        }
        let mut xs = x.to_vec();
        let mut ys = y.to_vec();
        xs.sort_unstable();
        ys.sort_unstable();
        let r = self.row_ranker.rank(&xs);
        let c = self.col_ranker.rank(&ys);
        Some(BigInt::from(self.lookup(sx as usize, r, c)))
    }

    #[inline]
    fn lookup(&self, sum: usize, row_rank: usize, col_rank: usize) -> u64 {
        self.values[self.block_offset[sum]
            + self.row_pos[row_rank] as usize * self.block_width[sum]
            + self.col_pos[col_rank] as usize]
    }
}

/// A table possibly read with rows and columns exchanged.
#[derive(Clone, Copy)]
struct View<'a> {
    table: &'a CountTable,
    transposed: bool,
}

impl View<'_> {
    /// `x_rank` ranks a tuple of the view's row length, `y_rank` one of its
    /// column length.
    #[inline]
    fn lookup(&self, sum: usize, x_rank: usize, y_rank: usize) -> u64 {
        if self.transposed {
            self.table.lookup(sum, y_rank, x_rank)
        } else {
            self.table.lookup(sum, x_rank, y_rank)
        }
    }

    fn rank_rows(&self, x: &[u32]) -> usize {
        if self.transposed {
            self.table.col_ranker.rank(x)
        } else {
            self.table.row_ranker.rank(x)
        }
    }

    fn rank_cols(&self, y: &[u32]) -> usize {
        if self.transposed {
            self.table.row_ranker.rank(y)
        } else {
            self.table.col_ranker.rank(y)
        }
    }
}

/// Counts `n x n` magic squares for every line sum up to `t_max`, sharing
/// one set of precomputed tables.
#[derive(Clone, Debug)]
pub struct MagicCounter {
    n: usize,
    t_max: u32,
    top: usize,
    left: usize,
    tables: Vec<CountTable>,
}

impl MagicCounter {
    pub fn new(n: usize, t_max: u32) -> Result<Self> {
        Self::with_two_row(n, t_max, TwoRowCounts::default())
    }

    pub fn with_two_row(n: usize, t_max: u32, two_row: TwoRowCounts) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&n) {
            return Err(Error::OrderOutOfRange(n));
        }
        let top = n.div_ceil(2);
        let left = n.div_ceil(2);
        let mut shapes: Vec<(usize, usize)> = Vec::new();
        if n >= 2 {
            for rows in [top, n - top] {
                for cols in [left, n - left] {
                    let shape = (rows.max(cols), rows.min(cols));
                    if !shapes.contains(&shape) {
                        shapes.push(shape);
                    }
                }
            }
        }
        let helper = TwoRow::new(two_row, left, t_max);
        let tables = shapes
            .into_iter()
            .map(|(r, c)| CountTable::build(r, c, t_max, &helper))
            .collect();
        Ok(Self {
            n,
            t_max,
            top,
            left,
            tables,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn tables(&self) -> &[CountTable] {
        &self.tables
    }

    fn view(&self, rows: usize, cols: usize) -> View<'_> {
        let (r, c) = (rows.max(cols), rows.min(cols));
        let table = self
            .tables
            .iter()
            .find(|tb| tb.rows == r && tb.cols == c)
            .expect("table for every block shape");
        View {
            table,
            transposed: rows < cols,
        }
    }

    /// `e(B_n, t)`, the number of `n x n` magic squares with line sum `t`.
    pub fn count(&self, t: u32) -> Result<BigInt> {
        if t > self.t_max {
            return Err(Error::Unsupported(format!(
                "line sum {t} exceeds the precomputed bound {}",
                self.t_max
            )));
        }
        if self.n == 1 {
            return Ok(BigInt::from(1));
        }
        let n = self.n;
        let top = self.top;
        let bottom = n - top;
        let upper = self.half_counts(top, t);
        let lower_owned;
        let lower = if bottom == top {
            &upper
        } else {
            lower_owned = self.half_counts(bottom, t);
            &lower_owned
        };
        let total = upper
            .par_iter()
            .map(|(y, &count)| {
                let mut complement: Vec<u32> = y.iter().rev().map(|&v| t - v).collect();
                complement.sort_unstable();
                let other = lower[&complement];
                super::sums::multiplicity_of(y) * BigUint::from(count) * BigUint::from(other)
            })
            .reduce(BigUint::zero, |a, b| a + b);
        Ok(BigInt::from(total))
    }

    /// `N(R, y)` for `R` the `rows`-tuple of `t`'s and every sorted `y` with
    /// entries at most `t` and `|y| = rows * t`.
    fn half_counts(&self, rows: usize, t: u32) -> HashMap<Vec<u32>, u128> {
        let n = self.n;
        let left = self.left;
        let right = n - left;
        let left_view = self.view(rows, left);
        let right_view = self.view(rows, right);

        // Every sorted x with entries <= t, with the ranks of x and of the
        // sorted complement t - x, grouped by |x|.
        let mut xs: Vec<Vec<(usize, usize, u64)>> = vec![Vec::new(); rows * t as usize + 1];
        for s in 0..=rows as u32 * t {
            for x in sorted_tuples_with_sum(rows, t, s) {
                let complement: Vec<u32> = x.iter().rev().map(|&v| t - v).collect();
                let m = u64::try_from(super::sums::multiplicity_of(&x)).expect("small multiplicity");
                xs[s as usize].push((left_view.rank_rows(&x), right_view.rank_rows(&complement), m));
            }
        }

        let ys = sorted_tuples_with_sum(n, t, rows as u32 * t);
        ys.into_par_iter()
            .map(|y| {
                let (yl, yr) = y.split_at(left);
                let sl: u32 = yl.iter().sum();
                let sr = rows as u32 * t - sl;
                let rl = left_view.rank_cols(yl);
                let rr = right_view.rank_cols(yr);
                let mut acc = 0u128;
                for &(xl, xr, m) in &xs[sl as usize] {
                    let a = left_view.lookup(sl as usize, xl, rl);
                    if a == 0 {
                        continue;
                    }
                    let b = right_view.lookup(sr as usize, xr, rr);
                    acc += u128::from(m) * u128::from(a) * u128::from(b);
                }
                (y, acc)
            })
            .collect()
    }
}

/// `e(B_n, t)`.
pub fn magic_count(n: usize, t: u32) -> Result<BigInt> {
    MagicCounter::new(n, t)?.count(t)
}
