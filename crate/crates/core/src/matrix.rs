//! Packed 0-1 matrices of order at most 8.
//!
//! A face of the Birkhoff polytope `B_n` is identified with the 0-1 matrix
//! whose set of ones is the union of its vertices (permutation matrices).
//! Every such matrix fits in a single `u64`: cell `(i, j)` lives at bit
//! `i * n + j`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported matrix order.
pub const MAX_ORDER: usize = 8;

fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange(n))
    }
}

#[inline]
pub(crate) fn word_mask(n: usize) -> u64 {
    if n * n == 64 {
        u64::MAX
    } else {
        (1u64 << (n * n)) - 1
    }
}

#[inline]
pub(crate) fn row_mask(n: usize) -> u8 {
    ((1u16 << n) - 1) as u8
}

/// An `n x n` 0-1 matrix packed row-major into one machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    n: u8,
    bits: u64,
}

impl BinaryMatrix {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_order(n)?;
        if bits & !word_mask(n) != 0 {
            return Err(Error::InvalidFace(format!(
                "bits {bits:#x} set outside an order-{n} matrix"
            )));
        }
        Ok(Self::from_raw(n, bits))
    }

    /// Caller guarantees `1 <= n <= 8` and no stray high bits.
    #[inline]
    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_ORDER).contains(&n));
        debug_assert_eq!(bits & !word_mask(n), 0);
        Self { n: n as u8, bits }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// The all-ones matrix, i.e. `B_n` itself.
    pub fn full(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self::from_raw(n, word_mask(n)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(PermutationMatrix::identity(n)?.to_matrix())
    }

    pub fn from_fn(n: usize, mut cell: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_order(n)?;
        let mut bits = 0u64;
        for i in 0..n {
            for j in 0..n {
                if cell(i, j) {
                    bits |= 1 << (i * n + j);
                }
            }
        }
        Ok(Self::from_raw(n, bits))
    }

    /// Builds a matrix from rows of `0`/`1` entries; any nonzero entry counts as one.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        for (i, r) in rows.iter().enumerate() {
            if r.as_ref().len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {n} entries, found {}", r.as_ref().len()),
                });
            }
        }
        Self::from_fn(n, |i, j| rows[i].as_ref()[j] != 0)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        self.bits >> (i * n + j) & 1 == 1
    }

    #[must_use]
    pub fn with_cell(self, i: usize, j: usize, value: bool) -> Self {
        let bit = 1u64 << (i * self.n() + j);
        let bits = if value { self.bits | bit } else { self.bits & !bit };
        Self { bits, ..self }
    }

    /// Row `i` as a column bitmask (bit `j` is cell `(i, j)`).
    #[inline]
    pub fn row(&self, i: usize) -> u8 {
        let n = self.n();
        ((self.bits >> (i * n)) as u8) & row_mask(n)
    }

    /// Column `j` as a row bitmask (bit `i` is cell `(i, j)`).
    pub fn col(&self, j: usize) -> u8 {
        let n = self.n();
        (0..n).fold(0u8, |acc, i| acc | ((self.get(i, j) as u8) << i))
    }

    pub(crate) fn rows(&self) -> [u8; MAX_ORDER] {
        let mut rows = [0u8; MAX_ORDER];
        for (i, r) in rows.iter_mut().enumerate().take(self.n()) {
            *r = self.row(i);
        }
        rows
    }

    pub(crate) fn from_row_masks(n: usize, rows: &[u8]) -> Self {
        let bits = rows
            .iter()
            .take(n)
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | (u64::from(r) << (i * n)));
        Self::from_raw(n, bits)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.n(), other.n()))
        }
    }

    /// True iff every one of `other` is a one of `self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.same_order(other)?;
        Ok(other.bits & !self.bits == 0)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self::from_raw(self.n(), self.bits | other.bits))
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let n = self.n();
        let mut bits = 0u64;
        let mut rest = self.bits;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (i, j) = (p / n, p % n);
            bits |= 1 << (j * n + i);
        }
        Self::from_raw(n, bits)
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        validate_perm(n, perm)?;
        let rows: Vec<u8> = perm.iter().map(|&src| self.row(src)).collect();
        Ok(Self::from_row_masks(n, &rows))
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        validate_perm(n, perm)?;
        let rows: Vec<u8> = (0..n).map(|i| gather_bits(self.row(i), perm)).collect();
        Ok(Self::from_row_masks(n, &rows))
    }

    /// Backtracking search for a permutation matrix inside `self`.
    ///
    /// Rows are filled in index order and, within a row, columns are tried in
    /// ascending order, so the witness is deterministic. With `required =
    /// Some((i, j))` only permutations using cell `(i, j)` are accepted.
    pub fn find_permutation(&self, required: Option<(usize, usize)>) -> Option<PermutationMatrix> {
        let n = self.n();
        let mut rows = self.rows();
        if let Some((i, j)) = required {
            if i >= n || j >= n || !self.get(i, j) {
                return None;
            }
            let col = 1u8 << j;
            for (k, r) in rows.iter_mut().enumerate().take(n) {
                *r = if k == i { col } else { *r & !col };
            }
        }
        let mut perm = [0u8; MAX_ORDER];
        if search_rows(&rows[..n], 0, 0, &mut perm) {
            Some(PermutationMatrix { n: self.n, perm })
        } else {
            None
        }
    }

    /// The largest face contained in `self`: the union of all permutation
    /// matrices inside it. Cells no such permutation can use are forced to zero.
    #[must_use]
    pub fn face_closure(&self) -> Self {
        let n = self.n();
        let mut closed = 0u64;
        let mut pending = self.bits;
        while pending != 0 {
            let p = pending.trailing_zeros() as usize;
            pending &= pending - 1;
            if closed >> p & 1 == 1 {
                continue;
            }
            if let Some(pi) = self.find_permutation(Some((p / n, p % n))) {
                closed |= pi.to_matrix().bits;
            }
        }
        Self::from_raw(n, closed)
    }

    /// A face is a nonzero union of permutation matrices.
    pub fn is_face(&self) -> bool {
        !self.is_zero() && self.face_closure() == *self
    }

    /// `e + k - 2n`, with `e` the number of ones and `k` the number of
    /// connected components of the bipartite row/column graph.
    ///
    /// Only meaningful when `self` is a face.
    pub fn dimension(&self) -> usize {
        let n = self.n();
        let mut parent: [usize; 2 * MAX_ORDER] = std::array::from_fn(|i| i);
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = 2 * n;
        let mut rest = self.bits;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let a = find(&mut parent, p / n);
            let b = find(&mut parent, n + p % n);
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        self.count_ones() + components - 2 * n
    }

    /// All permutation matrices contained in `self`, in lexicographic order.
    pub fn vertices(&self) -> Vec<PermutationMatrix> {
        let n = self.n();
        let rows = self.rows();
        let mut out = Vec::new();
        let mut perm = [0u8; MAX_ORDER];
        collect_perms(&rows[..n], 0, 0, &mut perm, &mut |p| {
            out.push(PermutationMatrix { n: self.n, perm: *p })
        });
        out
    }
}

fn validate_perm(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = 0u16;
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    for &p in perm {
        if p >= n || seen >> p & 1 == 1 {
            return Err(Error::InvalidPermutation(n));
        }
        seen |= 1 << p;
    }
    Ok(())
}

#[inline]
pub(crate) fn gather_bits(row: u8, perm: &[usize]) -> u8 {
    perm.iter()
        .enumerate()
        .fold(0u8, |acc, (j, &src)| acc | (((row >> src) & 1) << j))
}

fn search_rows(rows: &[u8], row: usize, used: u8, perm: &mut [u8; MAX_ORDER]) -> bool {
    if row == rows.len() {
        return true;
    }
    let mut avail = rows[row] & !used;
    while avail != 0 {
        let j = avail.trailing_zeros() as u8;
        avail &= avail - 1;
        let used = used | (1 << j);
        // Dead end if some later row has no free column left.
        if rows[row + 1..].iter().any(|&r| r & !used == 0) {
            continue;
        }
        perm[row] = j;
        if search_rows(rows, row + 1, used, perm) {
            return true;
        }
    }
    false
}

fn collect_perms(
    rows: &[u8],
    row: usize,
    used: u8,
    perm: &mut [u8; MAX_ORDER],
    emit: &mut impl FnMut(&[u8; MAX_ORDER]),
) {
    if row == rows.len() {
        emit(perm);
        return;
    }
    let mut avail = rows[row] & !used;
    while avail != 0 {
        let j = avail.trailing_zeros() as u8;
        avail &= avail - 1;
        perm[row] = j;
        collect_perms(rows, row + 1, used | (1 << j), perm, emit);
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            for j in 0..self.n() {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n())
            .map(|i| {
                (0..self.n())
                    .map(|j| if self.get(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect();
        write!(f, "BinaryMatrix[{}]", rows.join("/"))
    }
}

/// Parses the face text format: `n` lines of `n` characters from `{0, 1}`.
impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_suffix('\n').unwrap_or(s);
        if body.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "empty input".into(),
            });
        }
        let lines: Vec<&str> = body
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        let n = lines.len();
        if n > MAX_ORDER {
            return Err(Error::OrderOutOfRange(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            for c in line.chars() {
                match c {
                    '0' => row.push(0u8),
                    '1' => row.push(1u8),
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            if row.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {n} characters, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// A permutation matrix, stored as the column of the one in each row.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PermutationMatrix {
    n: u8,
    perm: [u8; MAX_ORDER],
}

impl PermutationMatrix {
    pub fn new(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        check_order(n)?;
        validate_perm(n, perm)?;
        let mut p = [0u8; MAX_ORDER];
        for (dst, &src) in p.iter_mut().zip(perm) {
            *dst = src as u8;
        }
        Ok(Self { n: n as u8, perm: p })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            n: n as u8,
            perm: std::array::from_fn(|i| if i < n { i as u8 } else { 0 }),
        })
    }

    /// All `n!` permutation matrices of order `n`, lexicographically.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        Ok(BinaryMatrix::full(n)?.vertices())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Column holding the one in row `i`.
    pub fn col_of(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    pub fn as_vec(&self) -> Vec<usize> {
        self.perm[..self.n()].iter().map(|&c| c as usize).collect()
    }

    pub fn to_matrix(&self) -> BinaryMatrix {
        let n = self.n();
        let bits = (0..n).fold(0u64, |acc, i| acc | 1 << (i * n + self.perm[i] as usize));
        BinaryMatrix::from_raw(n, bits)
    }
}
