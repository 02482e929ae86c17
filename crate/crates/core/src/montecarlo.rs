//! Monte Carlo estimate of the volume of `B_n`.
//!
//! Dropping the last row and column identifies `B_n` with
//! `A_n = {(n-1)x(n-1) matrices >= 0 : row and column sums <= 1, total >= n - 2}`.
//! `A_n` sits inside `C_n`, the product of `n - 1` solid unit simplices, so
//! the fraction of uniform points of `C_n` landing in `A_n` estimates
//! `vol(A_n) / vol(C_n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulate::factorial;

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

/// Default number of independent streams the trials are split across.
pub const DEFAULT_PARTITIONS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub trials: u64,
    pub hits: u64,
    pub alpha_hat: f64,
    pub stderr: f64,
    pub seed: u64,
    pub partitions: u32,
    pub rng: &'static str,
}

impl SampleReport {
    /// `hits / trials` exactly.
    pub fn alpha_hat_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.hits), BigInt::from(self.trials))
    }
}

/// One point of `C_n`: `n - 1` rows, each uniform on the solid simplex
/// `{x >= 0 : sum x <= 1}` in dimension `n - 1`, stored row-major.
pub fn sample_row_stochastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 2, "order must be at least 2");
    let d = n - 1;
    let mut out = Vec::with_capacity(d * d);
    let mut u = vec![0f64; d];
    for _ in 0..d {
        fill_row(rng, &mut u);
        out.extend_from_slice(&u);
    }
    out
}

/// Spacings of `d` sorted uniforms, without the final gap to 1.
fn fill_row<R: Rng + ?Sized>(rng: &mut R, row: &mut [f64]) {
    for v in row.iter_mut() {
        *v = rng.random::<f64>();
    }
    row.sort_unstable_by(f64::total_cmp);
    let mut prev = 0.0;
    for v in row.iter_mut() {
        let cur = *v;
        *v = cur - prev;
        prev = cur;
    }
}

/// Whether a point of `C_n` (row-major, `(n-1)^2` entries) lies in `A_n`.
pub fn is_in_a(m: &[f64], n: usize) -> bool {
    let d = n.saturating_sub(1);
    assert_eq!(m.len(), d * d, "matrix must be (n-1)x(n-1)");
    let mut total = 0.0;
    for j in 0..d {
        let col: f64 = (0..d).map(|i| m[i * d + j]).sum();
        if col > 1.0 {
            return false;
        }
        total += col;
    }
    total >= (n as f64) - 2.0
}

pub fn estimate_alpha(n: usize, trials: u64, seed: u64) -> Result<SampleReport> {
    estimate_alpha_partitioned(n, trials, seed, DEFAULT_PARTITIONS)
}

/// Trials are split into `partitions` chunks, chunk `p` drawing from stream
/// `p` of the generator seeded with `seed`. The result depends on the
/// partition count but not on the thread count.
pub fn estimate_alpha_partitioned(
    n: usize,
    trials: u64,
    seed: u64,
    partitions: u32,
) -> Result<SampleReport> {
    if n < 2 {
        return Err(Error::OrderOutOfRange(n));
    }
    if trials == 0 || partitions == 0 {
        return Err(Error::Unsupported("trials and partitions must be positive".into()));
    }
    let d = n - 1;
    let p = u64::from(partitions);
    let hits: u64 = (0..p)
        .into_par_iter()
        .map(|part| {
            let count = trials / p + u64::from(part < trials % p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(part);
            let mut m = vec![0f64; d * d];
            let mut hits = 0u64;
            for _ in 0..count {
                for row in m.chunks_exact_mut(d) {
                    fill_row(&mut rng, row);
                }
                hits += u64::from(is_in_a(&m, n));
            }
            hits
        })
        .sum();
    let alpha_hat = hits as f64 / trials as f64;
    Ok(SampleReport {
        n,
        trials,
        hits,
        alpha_hat,
        stderr: (alpha_hat * (1.0 - alpha_hat) / trials as f64).sqrt(),
        seed,
        partitions,
        rng: RNG_NAME,
    })
}

/// `vol(A_n) / vol(C_n) = relvol * ((n-1)!)^(n-1) / ((n-1)^2)!`.
pub fn exact_alpha(n: usize, relvol: &BigInt) -> BigRational {
    let d = n.saturating_sub(1);
    let num = relvol * num_traits::pow(factorial(d), d);
    BigRational::new(num, factorial(d * d))
}

/// `vol(C_n) = 1 / ((n-1)!)^(n-1)`.
pub fn product_of_simplices_volume(n: usize) -> BigRational {
    let d = n.saturating_sub(1);
    BigRational::new(BigInt::from(1), num_traits::pow(factorial(d), d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::known_relative_volume;
    use num_traits::ToPrimitive;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn exact_alpha_examples() {
        assert_eq!(exact_alpha(2, &BigInt::from(1)), ratio(1, 1));
        assert_eq!(exact_alpha(3, &BigInt::from(3)), ratio(1, 2));
        assert_eq!(exact_alpha(4, &BigInt::from(352)), ratio(22, 105));
    }

    #[test]
    fn exact_alpha_round_trips() {
        for n in 2..=8 {
            let relvol = known_relative_volume(n).unwrap();
            let d = n - 1;
            let back = exact_alpha(n, &relvol)
                * product_of_simplices_volume(n)
                * BigRational::from_integer(factorial(d * d));
            assert_eq!(back, BigRational::from_integer(relvol));
        }
    }

    #[test]
    fn rows_lie_in_the_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=7 {
            for _ in 0..200 {
                let m = sample_row_stochastic(n, &mut rng);
                for row in m.chunks(n - 1) {
                    assert!(row.iter().all(|&x| x >= 0.0));
                    assert!(row.iter().sum::<f64>() <= 1.0 + 1e-12);
                }
            }
        }
        let m = sample_row_stochastic(2, &mut rng);
        assert_eq!(m.len(), 1);
        assert!((0.0..1.0).contains(&m[0]));
    }

    #[test]
    fn entry_means_are_one_over_n() {
        // Each entry of a uniform point of the solid simplex in dimension d
        // is Beta(1, d) with mean 1/(d+1) and variance d/((d+1)^2 (d+2)).
        let n = 4;
        let d = n - 1;
        let trials = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sums = vec![0f64; d * d];
        for _ in 0..trials {
            for (s, x) in sums.iter_mut().zip(sample_row_stochastic(n, &mut rng)) {
                *s += x;
            }
        }
        let var = d as f64 / ((n * n) as f64 * (n + 1) as f64);
        let se = (var / trials as f64).sqrt();
        for s in sums {
            assert!((s / trials as f64 - 1.0 / n as f64).abs() <= 5.0 * se);
        }
    }

    #[test]
    fn membership_examples() {
        for n in 2..=6 {
            let d = n - 1;
            assert!(is_in_a(&vec![1.0 / n as f64; d * d], n));
        }
        let mut m = vec![0.0; 4];
        m[0] = 0.6;
        m[2] = 0.5;
        assert!(!is_in_a(&m, 3));
        assert!(is_in_a(&[0.0], 2));
        assert!(!is_in_a(&[0.2, 0.2, 0.2, 0.2], 3));
    }

    #[test]
    fn alpha_two_is_one() {
        let r = estimate_alpha(2, 1000, 3).unwrap();
        assert_eq!(r.hits, 1000);
        assert_eq!(r.alpha_hat, 1.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn reproducible() {
        let a = estimate_alpha(4, 20_000, 42).unwrap();
        let b = estimate_alpha(4, 20_000, 42).unwrap();
        assert_eq!(a, b);
        let c = estimate_alpha(4, 20_000, 43).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let two = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let a = one.install(|| estimate_alpha(3, 5000, 9).unwrap());
        let b = two.install(|| estimate_alpha(3, 5000, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn n3_estimate() {
        let r = estimate_alpha(3, 100_000, 2024).unwrap();
        let exact = exact_alpha(3, &BigInt::from(3)).to_f64().unwrap();
        assert!((r.alpha_hat - exact).abs() <= 5.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(estimate_alpha(1, 10, 0).is_err());
        assert!(estimate_alpha(3, 0, 0).is_err());
        assert!(estimate_alpha_partitioned(3, 10, 0, 0).is_err());
    }
}
