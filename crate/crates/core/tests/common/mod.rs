//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's closure, dimension, facet or counting code.
#![allow(dead_code)]

use std::collections::HashMap;

use birkhoff::BinaryMatrix;
use num_bigint::BigInt;

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                go(n, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn perm_mask(n: usize, p: &[usize]) -> u64 {
    p.iter().enumerate().fold(0, |m, (i, &j)| m | 1 << (i * n + j))
}

/// Exhaustive model of faces of `B_n` for small `n`.
pub struct FaceOracle {
    pub n: usize,
    perm_masks: Vec<u64>,
    volumes: HashMap<u64, BigInt>,
}

impl FaceOracle {
    pub fn new(n: usize) -> Self {
        let perm_masks = all_perms(n).iter().map(|p| perm_mask(n, p)).collect();
        Self {
            n,
            perm_masks,
            volumes: HashMap::new(),
        }
    }

    /// Permutation matrices inside `cells`, as masks in lexicographic order.
    pub fn vertices(&self, cells: u64) -> Vec<u64> {
        self.perm_masks
            .iter()
            .copied()
            .filter(|&p| p & !cells == 0)
            .collect()
    }

    pub fn closure(&self, cells: u64) -> u64 {
        self.vertices(cells).into_iter().fold(0, |a, b| a | b)
    }

    pub fn is_face(&self, cells: u64) -> bool {
        cells != 0 && self.closure(cells) == cells
    }

    /// Affine dimension of the convex hull of the vertices.
    pub fn dimension(&self, cells: u64) -> usize {
        let verts = self.vertices(cells);
        let n2 = self.n * self.n;
        let rows: Vec<Vec<i128>> = verts
            .iter()
            .skip(1)
            .map(|&v| {
                (0..n2)
                    .map(|b| ((v >> b & 1) as i128) - ((verts[0] >> b & 1) as i128))
                    .collect()
            })
            .collect();
        rank(rows)
    }

    /// All faces of `B_n` contained in `cells` (every closed submask).
    pub fn subfaces(&self, cells: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut sub = cells;
        loop {
            if self.is_face(sub) {
                out.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & cells;
        }
        out
    }

    /// Faces of dimension `dim(f) - 1` inside `f` that avoid the vertex `v`.
    pub fn facets_avoiding(&self, f: u64, v: u64) -> Vec<u64> {
        let d = self.dimension(f);
        let mut out: Vec<u64> = self
            .subfaces(f)
            .into_iter()
            .filter(|&g| g & v != v && g != f && self.dimension(g) + 1 == d)
            .collect();
        out.sort_unstable();
        out
    }

    /// Relative volume by pulling the lexicographically last vertex.
    pub fn volume(&mut self, f: u64) -> BigInt {
        if let Some(v) = self.volumes.get(&f) {
            return v.clone();
        }
        let verts = self.vertices(f);
        let result = if verts.len() == 1 {
            BigInt::from(1)
        } else {
            let v = *verts.last().unwrap();
            let facets = self.facets_avoiding(f, v);
            facets.into_iter().map(|g| self.volume(g)).sum()
        };
        self.volumes.insert(f, result.clone());
        result
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                for k in 0..cols {
                    rows[i][k] = rows[i][k] * a - rows[r][k] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact determinant by cofactor-free elimination over rationals (i128).
pub fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

pub fn matrix(n: usize, bits: u64) -> BinaryMatrix {
    BinaryMatrix::new(n, bits).unwrap()
}

/// Counts nonnegative integer matrices with the given margins by filling
/// cells one at a time.
pub fn brute_contingency(r: &[u32], c: &[u32]) -> u64 {
    fn go(r: &mut [u32], c: &mut [u32], cell: usize) -> u64 {
        let cols = c.len();
        if r.is_empty() || cols == 0 {
            return u64::from(r.iter().chain(c.iter()).all(|&x| x == 0));
        }
        if cell == r.len() * cols {
            return u64::from(r.iter().chain(c.iter()).all(|&x| x == 0));
        }
        let (i, j) = (cell / cols, cell % cols);
        let mut total = 0;
        for v in 0..=r[i].min(c[j]) {
            r[i] -= v;
            c[j] -= v;
            total += go(r, c, cell + 1);
            r[i] += v;
            c[j] += v;
        }
        total
    }
    go(&mut r.to_vec(), &mut c.to_vec(), 0)
}

/// Every tuple of length `len` with entries summing to `total`.
pub fn compositions(total: u32, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Published Ehrhart coefficients of `B_n` over `C(t+n-1+k, n-1+2k)`.
pub fn published_ehrhart(n: usize) -> Vec<BigInt> {
    let coeffs: &[&str] = match n {
        1 => &["1"],
        2 => &["1"],
        3 => &["1", "3"],
        4 => &["1", "20", "152", "352"],
        5 => &["1", "115", "5390", "101275", "858650", "3309025", "4718075"],
        6 => &[
            "1",
            "714",
            "196677",
            "18941310",
            "809451144",
            "17914693608",
            "223688514048",
            "1633645276848",
            "6907466271384",
            "15642484909560",
            "14666561365176",
        ],
        7 => &[
            "1",
            "5033",
            "9090305",
            "4562637436",
            "876755512997",
            "80592643025748",
            "4085047594855542",
            "125166504299043921",
            "2460507569635629206",
            "32199612314177385616",
            "285953447105799237366",
            "1727929241168643056768",
            "6989369809320320632154",
            "18096158896344747268932",
            "27093648035077238674360",
            "17832560768358341943028",
        ],
        8 => &[
            "1",
            "40312",
            "544604804",
            "1572522771472",
            "1433860489078360",
            "546197610013169408",
            "104573799019751624800",
            "11404657872578818785152",
            "773100275338739807806336",
            "34668602440014649185072000",
            "1075823106306592550013512704",
            "23865735845675030268755397632",
            "387264682746696963082402212768",
            "4666750907574155613393947915904",
            "42107239094874587731729608526080",
            "284859465667770778104594682157824",
            "1435919936068954265096148477657088",
            "5307981556350553774098942855517184",
            "13958946247270195588626193027208192",
            "24706461764218063045041689495950080",
            "26368507913706408235698183181290240",
            "12816077964079346687829905128694016",
        ],
        _ => panic!("no published polynomial for order {n}"),
    };
    coeffs.iter().map(|s| s.parse().unwrap()).collect()
}

/// Published relative volumes of `B_n`, `n = 1..=7`.
pub const PUBLISHED_VOLUMES: [&str; 7] = [
    "1",
    "1",
    "3",
    "352",
    "4718075",
    "14666561365176",
    "17832560768358341943028",
];

/// Determinant of the edge vectors of a full-dimensional simplex of `B_n`
/// restricted to the upper-left `(n-1) x (n-1)` block, which is a lattice
/// isomorphism on the affine hull of `B_n`.
pub fn full_simplex_det(n: usize, vertices: &[Vec<usize>]) -> i128 {
    let d = n - 1;
    let coords = |p: &[usize]| -> Vec<i128> {
        let mut out = vec![0i128; d * d];
        for i in 0..d {
            if p[i] < d {
                out[i * d + p[i]] = 1;
            }
        }
        out
    };
    let base = coords(&vertices[0]);
    let m: Vec<Vec<i128>> = vertices[1..]
        .iter()
        .map(|v| coords(v).iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    determinant(m)
}
