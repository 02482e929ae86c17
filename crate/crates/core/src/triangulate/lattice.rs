use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::canonical::{canonicalize, canonicalize_exact};
use super::{choose_vertex, opposite_facet_words};
use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Default cap on the total number of face records held by one lattice.
pub const DEFAULT_RECORD_CAP: usize = 1 << 28;

/// How faces are reduced to representatives before deduplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Canonicalization {
    /// Score-based standard form (fast, approximate).
    #[default]
    Scores,
    /// Minimum over the full symmetry group (slow, exact).
    Exact,
    /// No reduction; faces are only deduplicated when literally equal.
    Off,
}

impl Canonicalization {
    fn apply(self, f: &BinaryMatrix) -> BinaryMatrix {
        match self {
            Self::Scores => canonicalize(f),
            Self::Exact => canonicalize_exact(f),
            Self::Off => *f,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub canonicalization: Canonicalization,
    /// Maximum total number of records across all levels.
    pub record_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            canonicalization: Canonicalization::default(),
            record_cap: DEFAULT_RECORD_CAP,
        }
    }
}

/// One occurrence count of a face as an opposite facet of a face one level up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParentLink {
    pub index: u32,
    pub multiplicity: u32,
}

/// A face together with the faces of the level above that produced it.
#[derive(Clone, Copy, Debug)]
pub struct FaceRecord<'a> {
    pub face: BinaryMatrix,
    pub parents: &'a [ParentLink],
}

#[derive(Clone, Debug, Default)]
struct Level {
    dim: u32,
    faces: Vec<u64>,
    /// `links[offsets[i]..offsets[i + 1]]` are the parents of face `i`.
    offsets: Vec<usize>,
    links: Vec<ParentLink>,
}

impl Level {
    fn len(&self) -> usize {
        self.faces.len()
    }

    fn parents(&self, i: usize) -> &[ParentLink] {
        &self.links[self.offsets[i]..self.offsets[i + 1]]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub dim: u32,
    pub records: usize,
    pub pointers: usize,
}

/// Records and parent pointers per level, top dimension first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeStats {
    pub n: usize,
    pub levels: Vec<LevelStats>,
}

impl LatticeStats {
    pub fn total_records(&self) -> usize {
        self.levels.iter().map(|l| l.records).sum()
    }

    pub fn total_pointers(&self) -> usize {
        self.levels.iter().map(|l| l.pointers).sum()
    }
}

/// Faces of each dimension from the top face down to its vertices, with
/// parent pointers carrying multiplicities.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    n: usize,
    /// Index 0 is the top face; the last level holds the vertices.
    levels: Vec<Level>,
}

/// Builds the face lattice below `top`.
///
/// Each level is generated from the one above: for every face a vertex is
/// chosen, the opposite facets are canonicalized, and the results are
/// sorted and merged. Two distinct facets of one face that canonicalize to
/// the same representative count as two pointers.
pub fn build_lattice(top: &BinaryMatrix, options: &BuildOptions) -> Result<FaceLattice> {
    if top.is_zero() || top.face_closure() != *top {
        return Err(Error::InvalidFace(format!(
            "{top:?} is not a union of permutation matrices"
        )));
    }
    let n = top.n();
    let canon = options.canonicalization;
    let dim = top.dimension() as u32;

    let mut levels = vec![Level {
        dim,
        faces: vec![canon.apply(top).bits()],
        offsets: vec![0, 0],
        links: Vec::new(),
    }];
    let mut total = 1usize;

    for d in (0..dim).rev() {
        let above = levels.last().expect("top level present");
        if above.len() > u32::MAX as usize {
            return Err(budget_error(n, &levels, options.record_cap, d));
        }
        let mut pairs: Vec<(u64, u32)> = above
            .faces
            .par_iter()
            .enumerate()
            .flat_map_iter(|(p, &w)| {
                let f = BinaryMatrix::from_raw(n, w);
                let v = choose_vertex(&f).expect("lattice faces are nonempty");
                opposite_facet_words(&f, &v)
                    .into_iter()
                    .map(move |g| (canon.apply(&BinaryMatrix::from_raw(n, g)).bits(), p as u32))
            })
            .collect();
        pairs.par_sort_unstable();

        let level = merge_level(d, &pairs);
        total += level.len();
        levels.push(level);
        if total > options.record_cap {
            return Err(budget_error(n, &levels, options.record_cap, d));
        }
    }

    debug_assert!(levels
        .last()
        .expect("at least one level")
        .faces
        .iter()
        .all(|&w| w.count_ones() as usize == n));
    Ok(FaceLattice { n, levels })
}

/// Groups sorted `(face, parent)` pairs into records; repeats of a pair
/// become its multiplicity.
fn merge_level(dim: u32, pairs: &[(u64, u32)]) -> Level {
    let mut level = Level {
        dim,
        ..Level::default()
    };
    level.offsets.push(0);
    for (k, &(face, parent)) in pairs.iter().enumerate() {
        if k == 0 || pairs[k - 1].0 != face {
            if k > 0 {
                level.offsets.push(level.links.len());
            }
            level.faces.push(face);
        }
        match level.links.last_mut() {
            Some(link) if k > 0 && pairs[k - 1] == (face, parent) => link.multiplicity += 1,
            _ => level.links.push(ParentLink {
                index: parent,
                multiplicity: 1,
            }),
        }
    }
    if !pairs.is_empty() {
        level.offsets.push(level.links.len());
    }
    level
}

fn budget_error(n: usize, levels: &[Level], cap: usize, dim: u32) -> Error {
    Error::BudgetExceeded {
        cap,
        dim,
        stats: stats_of(n, levels),
    }
}

fn stats_of(n: usize, levels: &[Level]) -> LatticeStats {
    LatticeStats {
        n,
        levels: levels
            .iter()
            .map(|l| LevelStats {
                dim: l.dim,
                records: l.len(),
                pointers: l.links.len(),
            })
            .collect(),
    }
}

/// Relative volume of a face with default build options.
pub fn relative_volume(top: &BinaryMatrix) -> Result<BigInt> {
    Ok(build_lattice(top, &BuildOptions::default())?.relative_volume())
}

impl FaceLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> u32 {
        self.levels[0].dim
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Records of the level at `index` (0 is the top face).
    pub fn level(&self, index: usize) -> impl ExactSizeIterator<Item = FaceRecord<'_>> + '_ {
        let level = &self.levels[index];
        (0..level.len()).map(move |i| FaceRecord {
            face: BinaryMatrix::from_raw(self.n, level.faces[i]),
            parents: level.parents(i),
        })
    }

    pub fn level_dim(&self, index: usize) -> u32 {
        self.levels[index].dim
    }

    pub fn stats(&self) -> LatticeStats {
        stats_of(self.n, &self.levels)
    }

    /// Number of simplices in the standard triangulation of the top face.
    pub fn relative_volume(&self) -> BigInt {
        let top = self.level_volumes().swap_remove(0);
        BigInt::from(top.into_iter().next().expect("top level has one record"))
    }

    /// Relative volume of every record, top level first.
    pub fn level_volumes(&self) -> Vec<Vec<BigUint>> {
        match self.accumulate_u128() {
            Some(levels) => levels
                .into_iter()
                .map(|l| l.into_iter().map(BigUint::from).collect())
                .collect(),
            None => self.accumulate_big(),
        }
    }

    /// Bottom-up sums in `u128`; `None` on overflow.
    fn accumulate_u128(&self) -> Option<Vec<Vec<u128>>> {
        let mut out: Vec<Vec<u128>> = Vec::with_capacity(self.levels.len());
        let mut below = vec![1u128; self.levels.last()?.len()];
        for k in (0..self.levels.len() - 1).rev() {
            let child = &self.levels[k + 1];
            let mut here = vec![0u128; self.levels[k].len()];
            for (c, &vol) in below.iter().enumerate() {
                for link in child.parents(c) {
                    let add = vol.checked_mul(u128::from(link.multiplicity))?;
                    let slot = &mut here[link.index as usize];
                    *slot = slot.checked_add(add)?;
                }
            }
            out.push(std::mem::replace(&mut below, here));
        }
        out.push(below);
        out.reverse();
        Some(out)
    }

    fn accumulate_big(&self) -> Vec<Vec<BigUint>> {
        let mut out = Vec::with_capacity(self.levels.len());
        let mut below = vec![BigUint::from(1u32); self.levels.last().map_or(0, Level::len)];
        for k in (0..self.levels.len() - 1).rev() {
            let child = &self.levels[k + 1];
            let mut here = vec![BigUint::zero(); self.levels[k].len()];
            for (c, vol) in below.iter().enumerate() {
                for link in child.parents(c) {
                    here[link.index as usize] += vol * link.multiplicity;
                }
            }
            out.push(std::mem::replace(&mut below, here));
        }
        out.push(below);
        out.reverse();
        out
    }

    /// JSON dump: `{"n", "levels": [{"dim", "faces": [{"bits", "parents": [[idx, mult], ...]}]}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct FaceDump {
            bits: String,
            parents: Vec<[u32; 2]>,
        }
        #[derive(Serialize)]
        struct LevelDump {
            dim: u32,
            faces: Vec<FaceDump>,
        }
        #[derive(Serialize)]
        struct Dump {
            n: usize,
            levels: Vec<LevelDump>,
        }
        let dump = Dump {
            n: self.n,
            levels: (0..self.levels.len())
                .map(|k| LevelDump {
                    dim: self.levels[k].dim,
                    faces: self
                        .level(k)
                        .map(|r| FaceDump {
                            bits: r.face.to_string(),
                            parents: r.parents.iter().map(|l| [l.index, l.multiplicity]).collect(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(dump).expect("lattice dump serializes")
    }
}
