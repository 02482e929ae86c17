//! Benchmark inputs shared by the criterion targets.

use birkhoff::{staircase_face, BinaryMatrix};

/// Faces used across benchmarks: `B_n` for small `n` and a few staircases.
pub fn sample_faces() -> Vec<(String, BinaryMatrix)> {
    let mut out = Vec::new();
    for n in 3..=5 {
        out.push((format!("B_{n}"), BinaryMatrix::full(n).expect("valid order")));
    }
    for n in [5, 6] {
        out.push((format!("F_{n}"), staircase_face(n).expect("valid order").matrix));
    }
    out
}
