//! Explicit simplices of standard triangulations, lattice volumes of
//! simplices, and the census of minimal simplices of `B_4`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{choose_vertex, opposite_facets};
use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, PermutationMatrix};

/// Every simplex (as its vertex list, cone point first) of the standard
/// triangulation that always cones from [`choose_vertex`].
///
/// The list has as many entries as the relative volume, so this is only
/// practical for small faces.
pub fn standard_simplices(top: &BinaryMatrix) -> Result<Vec<Vec<PermutationMatrix>>> {
    standard_simplices_with(top, &mut |f| choose_vertex(f))
}

/// Like [`standard_simplices`] with a caller-chosen cone vertex for each face.
pub fn standard_simplices_with(
    top: &BinaryMatrix,
    pick: &mut dyn FnMut(&BinaryMatrix) -> Result<PermutationMatrix>,
) -> Result<Vec<Vec<PermutationMatrix>>> {
    if !top.is_face() {
        return Err(Error::InvalidFace(format!("{top:?}")));
    }
    let mut out = Vec::new();
    let mut chain = Vec::new();
    descend(top, pick, &mut chain, &mut out)?;
    Ok(out)
}

fn descend(
    f: &BinaryMatrix,
    pick: &mut dyn FnMut(&BinaryMatrix) -> Result<PermutationMatrix>,
    chain: &mut Vec<PermutationMatrix>,
    out: &mut Vec<Vec<PermutationMatrix>>,
) -> Result<()> {
    let v = pick(f)?;
    chain.push(v);
    if f.dimension() == 0 {
        out.push(chain.clone());
    } else {
        for g in opposite_facets(f, &v)? {
            descend(&g, pick, chain, out)?;
        }
    }
    chain.pop();
    Ok(())
}

/// Volume of the simplex spanned by `vertices`, in units of a minimal
/// simplex of the integer lattice in its affine span; zero when the
/// vertices are affinely dependent.
///
/// Computed as the product of the invariant factors of the matrix of edge
/// vectors `v_i - v_0`, i.e. the gcd of its maximal minors.
pub fn simplex_lattice_volume(vertices: &[PermutationMatrix]) -> BigInt {
    let Some(first) = vertices.first() else {
        return BigInt::from(0);
    };
    let n = first.n();
    let coords = |p: &PermutationMatrix| -> Vec<i128> {
        let m = p.to_matrix();
        (0..n * n).map(|k| i128::from(m.bits() >> k & 1 == 1)).collect()
    };
    let origin = coords(first);
    let rows: Vec<Vec<i128>> = vertices[1..]
        .iter()
        .map(|p| coords(p).iter().zip(&origin).map(|(a, b)| a - b).collect())
        .collect();
    BigInt::from(invariant_factor_product(rows))
}

/// Product of the Smith invariant factors of an `r x c` integer matrix with
/// `r <= c`; zero if its rank is below `r`.
fn invariant_factor_product(mut a: Vec<Vec<i128>>) -> i128 {
    let r = a.len();
    if r == 0 {
        return 1;
    }
    let c = a[0].len();
    if r > c {
        return 0;
    }
    let mut product = 1i128;
    for t in 0..r {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return 0;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..c {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..c {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().take(r).skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        product *= a[t][t].abs();
    }
    product
}

/// Whether the simplex with these (affinely independent) vertices occurs in
/// some standard triangulation of the face they span.
///
/// That holds iff some vertex `v` of the simplex is such that the other
/// vertices span a facet of the current face not containing `v`, and
/// recursively so for that facet.
pub fn is_in_standard_triangulation(vertices: &[PermutationMatrix]) -> bool {
    let mats: Vec<BinaryMatrix> = vertices.iter().map(PermutationMatrix::to_matrix).collect();
    if mats.is_empty() || mats.len() > 32 {
        return false;
    }
    let all = if mats.len() == 32 { u32::MAX } else { (1u32 << mats.len()) - 1 };
    if span(&mats, all).dimension() + 1 != mats.len() {
        return false;
    }
    standard_rec(&mats, all, &mut HashMap::new())
}

fn span(mats: &[BinaryMatrix], mask: u32) -> BinaryMatrix {
    let n = mats[0].n();
    let bits = (0..mats.len())
        .filter(|&k| mask >> k & 1 == 1)
        .fold(0u64, |acc, k| acc | mats[k].bits());
    BinaryMatrix::from_raw(n, bits)
}

fn standard_rec(mats: &[BinaryMatrix], mask: u32, memo: &mut HashMap<u32, bool>) -> bool {
    let size = mask.count_ones() as usize;
    if size == 1 {
        return true;
    }
    if let Some(&known) = memo.get(&mask) {
        return known;
    }
    let mut found = false;
    let mut rest_bits = mask;
    while rest_bits != 0 {
        let k = rest_bits.trailing_zeros();
        rest_bits &= rest_bits - 1;
        let rest = mask & !(1 << k);
        let facet = span(mats, rest);
        if facet.dimension() + 2 == size
            && facet.bits() & mats[k as usize].bits() != mats[k as usize].bits()
            && standard_rec(mats, rest, memo)
        {
            found = true;
            break;
        }
    }
    memo.insert(mask, found);
    found
}

/// Counts of minimal lattice simplices with vertices among those of `B_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    /// Minimal-volume full-dimensional simplices.
    pub total: u64,
    /// Of those, the ones occurring in some standard triangulation.
    pub in_standard: u64,
}

/// Census of minimal simplices of `B_n` for `2 <= n <= 4`. Larger orders are
/// rejected: `n = 5` would mean scanning `C(120, 17)` vertex subsets.
pub fn census_minimal_simplices(n: usize) -> Result<Census> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!(
            "minimal-simplex census is only available for n = 2..=4, not {n}"
        )));
    }
    Ok(census(n))
}

/// Exhaustive scan over all `((n-1)^2 + 1)`-subsets of vertices.
///
/// Volumes are taken in the upper-left `(n-1) x (n-1)` coordinates, where the
/// affine lattice of `B_n` becomes the full integer lattice, so a simplex is
/// minimal iff its edge-vector determinant is `+-1`.
pub(crate) fn census(n: usize) -> Census {
    let perms = PermutationMatrix::all(n).expect("valid order");
    let mats: Vec<BinaryMatrix> = perms.iter().map(PermutationMatrix::to_matrix).collect();
    let m = (n - 1) * (n - 1);
    let coords: Vec<Vec<i64>> = perms
        .iter()
        .map(|p| {
            let mut c = vec![0i64; m];
            for i in 0..n - 1 {
                if p.col_of(i) < n - 1 {
                    c[i * (n - 1) + p.col_of(i)] = 1;
                }
            }
            c
        })
        .collect();

    let (total, in_standard) = subsets(perms.len(), m + 1)
        .par_iter()
        .map_init(HashMap::new, |memo, &mask| {
            let idx: Vec<usize> = (0..perms.len()).filter(|&k| mask >> k & 1 == 1).collect();
            let origin = &coords[idx[0]];
            let mut a: Vec<i64> = Vec::with_capacity(m * m);
            for &k in &idx[1..] {
                a.extend(coords[k].iter().zip(origin).map(|(x, y)| x - y));
            }
            if det_bareiss(&mut a, m).abs() != 1 {
                return (0u64, 0u64);
            }
            let local: Vec<BinaryMatrix> = idx.iter().map(|&k| mats[k]).collect();
            let full = (1u32 << local.len()) - 1;
            memo.clear();
            (1, u64::from(standard_rec(&local, full, memo)))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    Census {
        n,
        total,
        in_standard,
    }
}

/// All `k`-subsets of `0..size` as bitmasks, in increasing numeric order.
fn subsets(size: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k == 0 || k > size {
        return out;
    }
    let limit = 1u64 << size;
    let mut x: u64 = (1 << k) - 1;
    while x < limit {
        out.push(x as u32);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Fraction-free Gaussian elimination on a row-major `m x m` matrix.
fn det_bareiss(a: &mut [i64], m: usize) -> i64 {
    let mut sign = 1;
    let mut prev = 1i64;
    for k in 0..m {
        if a[k * m + k] == 0 {
            let Some(swap) = (k + 1..m).find(|&i| a[i * m + k] != 0) else {
                return 0;
            };
            for j in 0..m {
                a.swap(k * m + j, swap * m + j);
            }
            sign = -sign;
        }
        let pivot = a[k * m + k];
        for i in k + 1..m {
            for j in k + 1..m {
                a[i * m + j] = (a[i * m + j] * pivot - a[i * m + k] * a[k * m + j]) / prev;
            }
            a[i * m + k] = 0;
        }
        prev = pivot;
    }
    sign * a[m * m - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_known_determinants() {
        let mut a = vec![2, 0, 1, 1, 3, 2, 1, 1, 2];
        assert_eq!(det_bareiss(&mut a, 3), 6);
        let mut b = vec![0, 1, 1, 0];
        assert_eq!(det_bareiss(&mut b, 2), -1);
        let mut c = vec![1, 2, 2, 4];
        assert_eq!(det_bareiss(&mut c, 2), 0);
    }

    #[test]
    fn invariant_factors() {
        assert_eq!(invariant_factor_product(vec![vec![2, 0], vec![0, 3]]), 6);
        assert_eq!(invariant_factor_product(vec![vec![2, 4, 0]]), 2);
        assert_eq!(invariant_factor_product(vec![vec![1, 1], vec![2, 2]]), 0);
        // gcd of the 2x2 minors (2, 4, 2) of this matrix is 2.
        assert_eq!(invariant_factor_product(vec![vec![1, 1, 1], vec![1, 3, -1]]), 2);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(subsets(24, 10).len(), 1_961_256);
    }

    #[test]
    fn b2_edge_is_unimodular() {
        let v = PermutationMatrix::all(2).unwrap();
        assert_eq!(simplex_lattice_volume(&v), BigInt::from(1));
        assert!(is_in_standard_triangulation(&v));
    }

    #[test]
    fn b3_census_by_hand() {
        // The six vertices of B_3 satisfy the single affine relation
        // (even perms) - (odd perms) = 0 with unit coefficients, so dropping
        // any one vertex leaves a unimodular simplex. Coning from an even
        // vertex yields the three simplices missing an odd vertex and vice
        // versa, so all six are standard.
        let c = census(3);
        assert_eq!(c.total, 6);
        assert_eq!(c.in_standard, 6);
    }

    #[test]
    fn census_supported_orders() {
        let c = census_minimal_simplices(2).unwrap();
        assert_eq!((c.total, c.in_standard), (1, 1));
        assert_eq!(census_minimal_simplices(3).unwrap().total, 6);
        assert!(matches!(census_minimal_simplices(1), Err(Error::Unsupported(_))));
        assert!(matches!(census_minimal_simplices(5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn standard_simplices_of_b3() {
        let simplices = standard_simplices(&BinaryMatrix::full(3).unwrap()).unwrap();
        assert_eq!(simplices.len(), 3);
        for s in &simplices {
            assert_eq!(s.len(), 5);
            assert_eq!(simplex_lattice_volume(s), BigInt::from(1));
            assert!(is_in_standard_triangulation(s));
        }
    }
}
