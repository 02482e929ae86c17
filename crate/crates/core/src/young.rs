//! The staircase faces `F_n` (ones where `j <= i + 1`) and the observation
//! that their relative volume is the product of the first `n - 1` Catalan
//! numbers.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, MAX_ORDER};
use crate::triangulate::{build_lattice, BuildOptions};

/// `F_n`: a face of dimension `n(n-1)/2` with `2^(n-1)` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StaircaseFace {
    pub n: usize,
    pub matrix: BinaryMatrix,
}

pub fn staircase_face(n: usize) -> Result<StaircaseFace> {
    if !(2..=MAX_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    Ok(StaircaseFace {
        n,
        matrix: BinaryMatrix::from_fn(n, |i, j| j <= i + 1)?,
    })
}

pub fn catalan(i: u32) -> BigInt {
    // C(2i, i) / (i + 1), built incrementally: C_{k+1} = C_k * 2(2k+1) / (k+2).
    (0..i).fold(BigInt::one(), |c, k| c * (2 * (2 * k + 1)) / (k + 2))
}

/// `prod_{i=0}^{n-2} Catalan(i)`.
pub fn catalan_product(n: usize) -> BigInt {
    (0..n.saturating_sub(1) as u32).map(catalan).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub n: usize,
    pub volume: BigInt,
    pub expected: BigInt,
}

impl ConjectureCheck {
    pub fn holds(&self) -> bool {
        self.volume == self.expected
    }
}

/// Computes the relative volume of `F_n` by triangulation and compares it
/// with the Catalan product.
pub fn verify_conjecture(n: usize, options: &BuildOptions) -> Result<ConjectureCheck> {
    let face = staircase_face(n)?;
    let volume = build_lattice(&face.matrix, options)?.relative_volume();
    Ok(ConjectureCheck {
        n,
        volume,
        expected: catalan_product(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase_face(2).unwrap().matrix, BinaryMatrix::full(2).unwrap());
        assert_eq!(
            staircase_face(3).unwrap().matrix,
            BinaryMatrix::from_rows(&[[1u8, 1, 0], [1, 1, 1], [1, 1, 1]]).unwrap()
        );
        assert_eq!(staircase_face(4).unwrap().matrix.dimension(), 6);
        assert!(staircase_face(1).is_err());
        assert!(staircase_face(9).is_err());
    }

    #[test]
    fn staircase_is_a_face_with_expected_counts() {
        for n in 2..=6 {
            let f = staircase_face(n).unwrap().matrix;
            assert!(f.is_face());
            assert_eq!(f.dimension(), n * (n - 1) / 2);
            assert_eq!(f.vertices().len(), 1 << (n - 1));
        }
    }

    #[test]
    fn catalan_numbers() {
        let first: Vec<BigInt> = (0..8).map(catalan).collect();
        let want: Vec<BigInt> = [1, 1, 2, 5, 14, 42, 132, 429].map(BigInt::from).to_vec();
        assert_eq!(first, want);
    }

    #[test]
    fn catalan_product_examples() {
        assert_eq!(catalan_product(2), BigInt::from(1));
        assert_eq!(catalan_product(3), BigInt::from(1));
        assert_eq!(catalan_product(4), BigInt::from(2));
        assert_eq!(catalan_product(5), BigInt::from(10));
        assert_eq!(catalan_product(8), BigInt::from(776_160));
    }

    #[test]
    fn conjecture_small_orders() {
        for (n, vol) in [(2, 1), (3, 1), (4, 2), (5, 10), (6, 140)] {
            let check = verify_conjecture(n, &BuildOptions::default()).unwrap();
            assert!(check.holds());
            assert_eq!(check.volume, BigInt::from(vol));
        }
    }
}
