//! Ehrhart polynomial of `B_n` from magic-square counts.
//!
//! `e(B_n, t)` is written over the basis `p_k(t) = C(t + n - 1 + k, n - 1 + 2k)`
//! for `k = 0..=C(n-1, 2)`. Since `p_k(t) = 0` for `0 <= t < k` and
//! `p_k(k) = 1`, the coefficients follow from the counts at `t = 0..=C(n-1, 2)`
//! by forward substitution. The last coefficient is the relative volume.

mod magic;
mod sums;

pub use magic::{magic_count, CountTable, MagicCounter, TwoRowCounts};
pub use sums::{
    count_2x2, count_contingency, count_contingency_split, multiplicity, Split, SumVector,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::MAX_ORDER;

/// `e(B_n, t) = sum_k coeffs[k] * C(t + n - 1 + k, n - 1 + 2k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPoly {
    n: usize,
    coeffs: Vec<BigInt>,
}

/// `C(n - 1, 2)`, the largest `t` whose count is needed.
pub fn needed_values(n: usize) -> usize {
    let m = n.saturating_sub(1);
    m * m.saturating_sub(1) / 2
}

impl EhrhartPoly {
    /// Solves for the coefficients given `values[t] = e(B_n, t)` for
    /// `t = 0..=C(n-1, 2)`.
    pub fn from_values(n: usize, values: &[BigInt]) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&n) {
            return Err(Error::OrderOutOfRange(n));
        }
        let len = needed_values(n) + 1;
        if values.len() != len {
            return Err(Error::Unsupported(format!(
                "order {n} needs {len} values, got {}",
                values.len()
            )));
        }
        let mut coeffs: Vec<BigInt> = Vec::with_capacity(len);
        for (k, value) in values.iter().enumerate() {
            let t = k as i64;
            let known: BigInt = coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a * basis(n, j, t))
                .sum();
            coeffs.push(value - known);
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The coefficient of the top basis element.
    pub fn relative_volume(&self) -> &BigInt {
        self.coeffs.last().expect("at least one coefficient")
    }

    /// Degree in `t`: `(n - 1)^2`.
    pub fn degree(&self) -> usize {
        (self.n - 1) * (self.n - 1)
    }

    pub fn evaluate(&self, t: i64) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * basis(self.n, k, t))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "basis": "C(t+n-1+k, n-1+2k)",
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for EhrhartPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.n as i64;
        for (k, a) in self.coeffs.iter().enumerate() {
            let k = k as i64;
            if k > 0 {
                write!(f, " + ")?;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "C(t+{}, {})", n - 1 + k, n - 1 + 2 * k)?;
        }
        Ok(())
    }
}

/// `p_k(t)` for any integer `t`.
pub fn basis(n: usize, k: usize, t: i64) -> BigInt {
    let n = n as i64;
    let k = k as i64;
    binomial(t + n - 1 + k, (n - 1 + 2 * k) as u64)
}

/// `C(u, k) = u (u - 1) ... (u - k + 1) / k!`, valid for negative `u`.
pub fn binomial(u: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= u - i as i64;
        den *= i + 1;
    }
    num / den
}

/// Counts `e(B_n, t)` for `t = 0..=C(n-1, 2)` and interpolates.
pub fn ehrhart_polynomial(n: usize) -> Result<EhrhartPoly> {
    let values = magic_counts(n, needed_values(n) as u32)?;
    EhrhartPoly::from_values(n, &values)
}

/// `e(B_n, t)` for `t = 0..=t_max`, sharing one precomputation.
pub fn magic_counts(n: usize, t_max: u32) -> Result<Vec<BigInt>> {
    let counter = MagicCounter::new(n, t_max)?;
    (0..=t_max).map(|t| counter.count(t)).collect()
}

/// Interpolates `e(B_n, t)` in the monomial basis from `values[t]` for
/// `t = 0..=C(n-1, 2)`, the zeros at `t = -1..=-(n-1)` and the reflection
/// `e(-n - t) = (-1)^(n-1) e(t)` for all but the last value, which is exactly
/// `(n - 1)^2 + 1` points. Returns coefficients of `t^0..t^d`.
///
/// Independent of the binomial basis; used to cross-check it.
pub fn interpolate_symmetric(n: usize, values: &[BigInt]) -> Result<Vec<BigRational>> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    if values.len() != needed_values(n) + 1 {
        return Err(Error::Unsupported(format!(
            "order {n} needs {} values, got {}",
            needed_values(n) + 1,
            values.len()
        )));
    }
    let n_i = n as i64;
    let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    let mut points: Vec<(i64, BigInt)> = (1..n_i).map(|s| (-s, BigInt::zero())).collect();
    for (t, v) in values.iter().enumerate() {
        let t = t as i64;
        points.push((t, v.clone()));
        // The last reflection would be one point more than the degree needs.
        if t + 1 < values.len() as i64 {
            points.push((-n_i - t, &sign * v));
        }
    }
    Ok(lagrange(&points))
}

/// Monomial coefficients of the polynomial through `points`.
fn lagrange(points: &[(i64, BigInt)]) -> Vec<BigRational> {
    let d = points.len();
    let mut result = vec![BigRational::zero(); d];
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // prod_{j != i} (t - x_j), built up one factor at a time.
        let mut basis = vec![BigInt::zero(); d];
        basis[0] = BigInt::one();
        let mut deg = 0;
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            for k in (0..=deg).rev() {
                let c = basis[k].clone();
                basis[k + 1] += &c;
                basis[k] = -c * xj;
            }
            deg += 1;
            denom *= xi - xj;
        }
        for (r, b) in result.iter_mut().zip(basis) {
            *r += BigRational::new(b * yi, denom.clone());
        }
    }
    result
}

/// Evaluates monomial coefficients at `t`.
pub fn evaluate_monomial(coeffs: &[BigRational], t: i64) -> BigRational {
    let t = BigRational::from_integer(BigInt::from(t));
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &t + c)
}
