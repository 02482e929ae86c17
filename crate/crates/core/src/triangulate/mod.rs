//! Relative volumes of faces of `B_n` by standard triangulation.
//!
//! A standard triangulation picks a vertex `v` of a face `F` and cones `v`
//! over standard triangulations of the facets of `F` opposite `v`. Every
//! simplex produced this way is unimodular in the affine lattice of `F`, so
//! the relative volume of `F` is the sum of the relative volumes of the
//! facets opposite any of its vertices, and vertices have volume one.
//!
//! [`build_lattice`] runs this recursion level by level on canonical faces,
//! recording for each face which faces above produced it and how often;
//! [`FaceLattice::relative_volume`] then sums volumes bottom-up.

mod canonical;
mod lattice;
mod simplex;

pub use canonical::{canonicalize, canonicalize_exact, compute_scores, ScorePair};
pub use lattice::{
    build_lattice, relative_volume, BuildOptions, Canonicalization, FaceLattice, FaceRecord,
    LatticeStats, LevelStats, ParentLink, DEFAULT_RECORD_CAP,
};
pub use simplex::{
    census_minimal_simplices, is_in_standard_triangulation, simplex_lattice_volume,
    standard_simplices, standard_simplices_with, Census,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, PermutationMatrix};

/// The first permutation matrix found inside `f` by the deterministic
/// backtracking search.
pub fn choose_vertex(f: &BinaryMatrix) -> Result<PermutationMatrix> {
    f.find_permutation(None)
        .ok_or_else(|| Error::InvalidFace(format!("no permutation matrix inside {f:?}")))
}

/// Facets of `f` not containing the vertex `v`.
///
/// For each one of `v`, that cell is zeroed and the other ones of `v` that no
/// remaining permutation can use are forced to zero, giving at most `n`
/// candidates. The facets are exactly the candidates maximal under
/// containment.
pub fn opposite_facets(f: &BinaryMatrix, v: &PermutationMatrix) -> Result<Vec<BinaryMatrix>> {
    if f.n() != v.n() {
        return Err(Error::OrderMismatch(f.n(), v.n()));
    }
    if !f.contains(&v.to_matrix())? {
        return Err(Error::InvalidFace(format!("{v:?} is not a vertex of {f:?}")));
    }
    if f.dimension() == 0 {
        return Err(Error::InvalidFace("a vertex has no facets".into()));
    }
    Ok(opposite_facet_words(f, v)
        .into_iter()
        .map(|w| BinaryMatrix::from_raw(f.n(), w))
        .collect())
}

/// Unchecked core of [`opposite_facets`], returning packed words.
pub(crate) fn opposite_facet_words(f: &BinaryMatrix, v: &PermutationMatrix) -> Vec<u64> {
    let n = f.n();
    let cell = |i: usize| 1u64 << (i * n + v.col_of(i));
    let mut candidates: Vec<u64> = (0..n)
        .map(|i| {
            let g = BinaryMatrix::from_raw(n, f.bits() & !cell(i));
            let mut candidate = g.bits();
            for k in (0..n).filter(|&k| k != i) {
                if g.find_permutation(Some((k, v.col_of(k)))).is_none() {
                    candidate &= !cell(k);
                }
            }
            candidate
        })
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .iter()
        .copied()
        .filter(|&c| !candidates.iter().any(|&d| d != c && d & c == c))
        .collect()
}

/// Converts the relative volume of `B_n` to its Euclidean volume in
/// `n^2`-space: a minimal simplex has volume `n^(n-1) / ((n-1)^2)!`.
pub fn true_volume(n: usize, relative_volume: &BigInt) -> BigRational {
    let scale = BigInt::from(n).pow((n as u32).saturating_sub(1));
    BigRational::new(relative_volume * scale, factorial((n - 1) * (n - 1)))
}

pub(crate) fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}
