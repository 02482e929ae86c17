mod common;

use birkhoff::triangulate::{
    build_lattice, choose_vertex, opposite_facets, relative_volume, simplex_lattice_volume,
    standard_simplices, standard_simplices_with, BuildOptions, Canonicalization,
};
use birkhoff::{staircase_face, BinaryMatrix, PermutationMatrix};
use common::{matrix, FaceOracle};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_face(rng: &mut impl Rng, n: usize, density: f64) -> BinaryMatrix {
    loop {
        let m = BinaryMatrix::from_fn(n, |_, _| rng.random_bool(density)).unwrap();
        let f = m.face_closure();
        if !f.is_zero() {
            return f;
        }
    }
}

fn perm_mask(p: &PermutationMatrix) -> u64 {
    p.to_matrix().bits()
}

#[test]
fn oracle_agrees_on_every_face_of_b3() {
    let mut oracle = FaceOracle::new(3);
    let faces = oracle.subfaces(matrix(3, 0x1ff).bits());
    assert_eq!(faces.len(), 49);
    for f in faces {
        let want = oracle.volume(f);
        assert_eq!(relative_volume(&matrix(3, f)).unwrap(), want, "{}", matrix(3, f));
    }
}

#[test]
fn oracle_agrees_on_staircases() {
    for n in 2..=4 {
        let f = staircase_face(n).unwrap().matrix;
        let mut oracle = FaceOracle::new(n);
        assert_eq!(relative_volume(&f).unwrap(), oracle.volume(f.bits()), "F_{n}");
    }
}

#[test]
fn oracle_agrees_on_b4() {
    let mut oracle = FaceOracle::new(4);
    assert_eq!(oracle.volume(0xffff), BigInt::from(352));
}

#[test]
fn oracle_agrees_on_random_faces_of_b4() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut oracle = FaceOracle::new(4);
    for _ in 0..40 {
        let f = random_face(&mut rng, 4, 0.55);
        assert_eq!(relative_volume(&f).unwrap(), oracle.volume(f.bits()), "{f}");
    }
}

#[test]
fn facets_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 2..=4 {
        let oracle = FaceOracle::new(n);
        for _ in 0..25 {
            let f = random_face(&mut rng, n, 0.6);
            if f.dimension() == 0 {
                assert!(opposite_facets(&f, &f.vertices()[0]).is_err());
                continue;
            }
            for v in f.vertices() {
                let mut got: Vec<u64> = opposite_facets(&f, &v)
                    .unwrap()
                    .iter()
                    .map(BinaryMatrix::bits)
                    .collect();
                got.sort_unstable();
                assert_eq!(got, oracle.facets_avoiding(f.bits(), perm_mask(&v)), "{f} {v:?}");
            }
        }
    }
}

#[test]
fn facets_are_closed_faces_one_dimension_down() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in 3..=6 {
        for _ in 0..20 {
            let f = random_face(&mut rng, n, 0.7);
            let d = f.dimension();
            if d == 0 {
                continue;
            }
            for v in f.vertices() {
                for g in opposite_facets(&f, &v).unwrap() {
                    assert!(g.is_face());
                    assert_eq!(g.dimension() + 1, d);
                    assert!(f.contains(&g).unwrap());
                    assert!(!g.contains(&v.to_matrix()).unwrap());
                }
            }
        }
    }
}

fn volume_via_vertex(f: &BinaryMatrix, v: &PermutationMatrix) -> BigInt {
    if f.dimension() == 0 {
        return BigInt::from(1);
    }
    opposite_facets(f, v)
        .unwrap()
        .iter()
        .map(|g| relative_volume(g).unwrap())
        .sum()
}

#[test]
fn volume_does_not_depend_on_the_pulled_vertex_n3() {
    let oracle = FaceOracle::new(3);
    for f in oracle.subfaces(0x1ff) {
        let f = matrix(3, f);
        let vol = relative_volume(&f).unwrap();
        for v in f.vertices() {
            assert_eq!(volume_via_vertex(&f, &v), vol, "{f} {v:?}");
        }
    }
}

#[test]
fn volume_does_not_depend_on_the_pulled_vertex_n4() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut faces = vec![BinaryMatrix::full(4).unwrap()];
    faces.extend((0..15).map(|_| random_face(&mut rng, 4, 0.7)));
    for f in faces {
        let vol = relative_volume(&f).unwrap();
        for v in f.vertices() {
            assert_eq!(volume_via_vertex(&f, &v), vol, "{f} {v:?}");
        }
    }
}

#[test]
fn standard_simplices_are_unimodular() {
    for n in 3..=4 {
        let top = BinaryMatrix::full(n).unwrap();
        let simplices = standard_simplices(&top).unwrap();
        assert_eq!(BigInt::from(simplices.len()), relative_volume(&top).unwrap());
        for s in &simplices {
            assert_eq!(s.len(), (n - 1) * (n - 1) + 1);
            assert_eq!(simplex_lattice_volume(s), BigInt::from(1));
            let verts: Vec<Vec<usize>> = s.iter().map(PermutationMatrix::as_vec).collect();
            assert_eq!(common::full_simplex_det(n, &verts).abs(), 1);
        }
    }
}

#[test]
fn triangulations_with_random_vertices_are_unimodular() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 3..=4 {
        let top = BinaryMatrix::full(n).unwrap();
        for _ in 0..3 {
            let simplices = standard_simplices_with(&top, &mut |f| {
                Ok(*f.vertices().choose(&mut rng).unwrap())
            })
            .unwrap();
            assert_eq!(BigInt::from(simplices.len()), relative_volume(&top).unwrap());
            for s in &simplices {
                let verts: Vec<Vec<usize>> = s.iter().map(PermutationMatrix::as_vec).collect();
                assert_eq!(common::full_simplex_det(n, &verts).abs(), 1);
            }
        }
    }
}

#[test]
fn canonicalization_modes_agree_on_random_faces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=5 {
        for _ in 0..10 {
            let f = random_face(&mut rng, n, 0.75);
            let vols: Vec<BigInt> = [
                Canonicalization::Scores,
                Canonicalization::Exact,
                Canonicalization::Off,
            ]
            .into_iter()
            .map(|canonicalization| {
                let options = BuildOptions {
                    canonicalization,
                    ..BuildOptions::default()
                };
                build_lattice(&f, &options).unwrap().relative_volume()
            })
            .collect();
            assert!(vols.windows(2).all(|w| w[0] == w[1]), "{f}: {vols:?}");
        }
    }
}

#[test]
fn chosen_vertex_lies_in_the_face() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=8 {
        for _ in 0..20 {
            let f = random_face(&mut rng, n, 0.5);
            let v = choose_vertex(&f).unwrap();
            assert!(f.contains(&v.to_matrix()).unwrap());
        }
    }
}

fn arb_face() -> impl Strategy<Value = BinaryMatrix> {
    (2usize..=5).prop_flat_map(|n| {
        (Just(n), any::<u64>()).prop_filter_map("empty closure", |(n, bits)| {
            let mask = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
            // Bias toward dense matrices so faces are not mostly vertices.
            let dense = bits | bits.rotate_left(17);
            let f = BinaryMatrix::new(n, dense & mask).ok()?.face_closure();
            (!f.is_zero()).then_some(f)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_invariant_under_symmetries(f in arb_face(), seed in any::<u64>()) {
        let n = f.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        rand::seq::SliceRandom::shuffle(cols.as_mut_slice(), &mut rng);
        let g = f.permute_rows(&rows).unwrap().permute_cols(&cols).unwrap();
        let vol = relative_volume(&f).unwrap();
        prop_assert_eq!(relative_volume(&g).unwrap(), vol.clone());
        prop_assert_eq!(relative_volume(&f.transpose()).unwrap(), vol);
    }

    #[test]
    fn volume_is_positive_and_bounded_by_vertex_count(f in arb_face()) {
        // A d-dimensional face with k vertices has at most C(k, d+1) simplices.
        let vol = relative_volume(&f).unwrap();
        prop_assert!(vol >= BigInt::from(1));
        let k = f.vertices().len() as u64;
        let d = f.dimension() as u64;
        let bound = (0..=d).fold(BigInt::from(1), |acc, i| acc * (k - i) / (i + 1));
        prop_assert!(vol <= bound);
    }
}
