//! Canonical representatives of faces up to row/column permutation and
//! transposition.
//!
//! The score-based form is cheap but approximate: equivalent faces usually,
//! not always, end up with the same representative. Volumes never depend on
//! it, only the amount of duplicated work does. [`canonicalize_exact`] is the
//! true orbit minimum and serves as a reference.

use crate::matrix::{gather_bits, BinaryMatrix, MAX_ORDER};

/// Per-row and per-column integer scores of a 0-1 matrix.
///
/// Permuting rows permutes `row_scores` the same way and leaves `col_scores`
/// alone; symmetrically for columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScorePair {
    n: u8,
    rows: [u64; MAX_ORDER],
    cols: [u64; MAX_ORDER],
}

impl ScorePair {
    pub fn row_scores(&self) -> &[u64] {
        &self.rows[..self.n as usize]
    }

    pub fn col_scores(&self) -> &[u64] {
        &self.cols[..self.n as usize]
    }
}

const REFINEMENT_ROUNDS: usize = 2;

/// Row and column sums, refined twice: each new row score is the old score
/// paired with the sum of the old column scores at that row's ones (and
/// symmetrically), the pair packed as `old * base + sum`.
pub fn compute_scores(f: &BinaryMatrix) -> ScorePair {
    let n = f.n();
    let mut row_masks = [0u8; MAX_ORDER];
    let mut col_masks = [0u8; MAX_ORDER];
    for (i, mask) in row_masks.iter_mut().enumerate().take(n) {
        let r = f.row(i);
        *mask = r;
        let mut rest = r;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            col_masks[j] |= 1 << i;
        }
    }

    let mut rows = [0u64; MAX_ORDER];
    let mut cols = [0u64; MAX_ORDER];
    for i in 0..n {
        rows[i] = u64::from(row_masks[i].count_ones());
        cols[i] = u64::from(col_masks[i].count_ones());
    }

    // Largest score any row or column can have after the current round.
    let mut bound = n as u64;
    for _ in 0..REFINEMENT_ROUNDS {
        let base = n as u64 * bound + 1;
        let mut next_rows = [0u64; MAX_ORDER];
        let mut next_cols = [0u64; MAX_ORDER];
        for i in 0..n {
            next_rows[i] = rows[i] * base + masked_sum(&cols, row_masks[i]);
            next_cols[i] = cols[i] * base + masked_sum(&rows, col_masks[i]);
        }
        rows = next_rows;
        cols = next_cols;
        bound = bound * base + n as u64 * bound;
    }

    ScorePair {
        n: n as u8,
        rows,
        cols,
    }
}

#[inline]
fn masked_sum(values: &[u64; MAX_ORDER], mut mask: u8) -> u64 {
    let mut sum = 0;
    while mask != 0 {
        sum += values[mask.trailing_zeros() as usize];
        mask &= mask - 1;
    }
    sum
}

/// Row bits read with column 0 as the most significant bit.
#[inline]
fn row_key(row: u8, n: usize) -> u8 {
    row.reverse_bits() >> (8 - n)
}

/// Columns sorted by score, then rows sorted by score with ties broken by
/// the row's bit string.
fn standard_form(f: &BinaryMatrix) -> BinaryMatrix {
    let n = f.n();
    let scores = compute_scores(f);

    let mut col_order: [usize; MAX_ORDER] = std::array::from_fn(|j| j);
    col_order[..n].sort_by_key(|&j| scores.cols[j]);

    let mut rows = [0u8; MAX_ORDER];
    for (i, r) in rows.iter_mut().enumerate().take(n) {
        *r = gather_bits(f.row(i), &col_order[..n]);
    }

    let mut row_order: [usize; MAX_ORDER] = std::array::from_fn(|i| i);
    row_order[..n].sort_by_key(|&i| (scores.rows[i], row_key(rows[i], n)));

    let sorted: [u8; MAX_ORDER] = std::array::from_fn(|i| if i < n { rows[row_order[i]] } else { 0 });
    BinaryMatrix::from_row_masks(n, &sorted[..n])
}

/// Score-based canonical form: the standard forms of `f` and its transpose,
/// whichever packed word is smaller.
///
/// The result is iterated to a fixed point so that applying the function
/// twice changes nothing.
pub fn canonicalize(f: &BinaryMatrix) -> BinaryMatrix {
    let a = standard_form(f);
    let b = standard_form(&f.transpose());
    let mut best = if b.bits() < a.bits() { b } else { a };
    loop {
        let other = standard_form(&best.transpose());
        if other.bits() < best.bits() {
            best = other;
        } else {
            return best;
        }
    }
}

/// The numerically smallest packed word over all row permutations, column
/// permutations and transposition of `f`. Costs `O(n! * n log n)`.
pub fn canonicalize_exact(f: &BinaryMatrix) -> BinaryMatrix {
    let n = f.n();
    let mut best = u64::MAX;
    for g in [*f, f.transpose()] {
        let mut col_perm: Vec<usize> = (0..n).collect();
        loop {
            let mut rows: Vec<u8> = (0..n).map(|i| gather_bits(g.row(i), &col_perm)).collect();
            // Row n - 1 is the most significant, so it gets the smallest row.
            rows.sort_unstable_by(|a, b| b.cmp(a));
            best = best.min(BinaryMatrix::from_row_masks(n, &rows).bits());
            if !next_permutation(&mut col_perm) {
                break;
            }
        }
    }
    BinaryMatrix::from_raw(n, best)
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
