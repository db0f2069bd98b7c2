//! Brute force over a finite field: every point of `rep_Q(d)` over `F_p` is
//! enumerated and the space is split into `GL(d)` orbits by a breadth-first
//! search over generators of the group. Used to check rank arrays and
//! Bruhat order against something that knows nothing about either.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Field};
use crate::perm::{inversion_length, Permutation};
use crate::poset::{enumerate_orbits, DEFAULT_ORBIT_GUARD};
use crate::quiver::{BipartiteQuiver, DimensionVector, TypeAQuiver};
use crate::reduction::{enumerate_orbits_arbitrary, rank_array_arbitrary, ReductionContext, TypeARep};
use crate::rep::{rank_array, RankArray, Representation};

/// Largest point count the oracle will enumerate.
pub const DEFAULT_ORACLE_GUARD: u128 = 1 << 20;

/// Largest `d` for which [`bruhat_via_covers`] walks `S_d`.
pub const MAX_COVER_DEGREE: usize = 6;

/// A quiver as a bare list of `(tail, head)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverShape {
    pub vertex_count: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl QuiverShape {
    pub fn from_bipartite(q: &BipartiteQuiver) -> QuiverShape {
        QuiverShape {
            vertex_count: q.vertex_count(),
            arrows: (1..=q.arrow_count())
                .map(|p| (BipartiteQuiver::arrow_tail(p) as usize, BipartiteQuiver::arrow_head(p) as usize))
                .collect(),
        }
    }

    pub fn from_type_a(q: &TypeAQuiver) -> QuiverShape {
        QuiverShape {
            vertex_count: q.vertex_count(),
            arrows: (1..=q.arrow_count()).map(|i| q.arrow_ends(i)).collect(),
        }
    }

    /// `Σ d(head) d(tail)`, the number of matrix entries in a point.
    pub fn entry_count(&self, d: &DimensionVector) -> usize {
        self.arrows.iter().map(|&(t, h)| d.0[h] * d.0[t]).sum()
    }
}

/// `|GL(d)|` over `F_p`, or `None` on overflow.
pub fn group_order(d: &DimensionVector, p: u32) -> Option<u128> {
    let p = p as u128;
    d.0.iter().try_fold(1u128, |acc, &n| {
        let q = p.checked_pow(n as u32)?;
        (0..n as u32).try_fold(acc, |a, k| a.checked_mul(q - p.pow(k)))
    })
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            factors.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, order / f, p) != 1))
        .expect("prime fields have primitive roots")
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let (p, mut b, mut r) = (p as u64, b as u64 % p as u64, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r as u32
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    /// `I + E_ij` at vertex `z`
    Transvection { z: usize, i: usize, j: usize },
    /// `diag(c, 1, ..., 1)` at vertex `z`
    Scale { z: usize },
}

struct Space {
    shape: QuiverShape,
    d: DimensionVector,
    p: u32,
    offsets: Vec<usize>,
    entries: usize,
    root: u32,
    root_inv: u32,
}

impl Space {
    fn new(shape: &QuiverShape, d: &DimensionVector, p: u32) -> Space {
        let mut offsets = Vec::with_capacity(shape.arrows.len());
        let mut acc = 0;
        for &(t, h) in &shape.arrows {
            offsets.push(acc);
            acc += d.0[h] * d.0[t];
        }
        let root = primitive_root(p);
        Space {
            shape: shape.clone(),
            d: d.clone(),
            p,
            offsets,
            entries: acc,
            root,
            root_inv: pow_mod(root, p - 2, p),
        }
    }

    fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for (z, &n) in self.d.0.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(Generator::Transvection { z, i, j });
                    }
                }
            }
            if n > 0 && self.root != 1 {
                out.push(Generator::Scale { z });
            }
        }
        out
    }

    fn decode(&self, mut index: u64, out: &mut [u32]) {
        for e in out.iter_mut() {
            *e = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
    }

    fn encode(&self, entries: &[u32]) -> u64 {
        entries.iter().rev().fold(0u64, |acc, &e| acc * self.p as u64 + e as u64)
    }

    /// `g · x` in place: `g` on heads, `g⁻¹` on tails.
    fn apply(&self, g: Generator, x: &mut [u32]) {
        let p = self.p as u64;
        for (a, &(t, h)) in self.shape.arrows.iter().enumerate() {
            let (rows, cols) = (self.d.0[h], self.d.0[t]);
            let m = &mut x[self.offsets[a]..self.offsets[a] + rows * cols];
            match g {
                Generator::Transvection { z, i, j } => {
                    if h == z {
                        // row i += row j
                        for c in 0..cols {
                            m[i * cols + c] = ((m[i * cols + c] as u64 + m[j * cols + c] as u64) % p) as u32;
                        }
                    }
                    if t == z {
                        // column j -= column i
                        for r in 0..rows {
                            m[r * cols + j] = ((m[r * cols + j] as u64 + p - m[r * cols + i] as u64) % p) as u32;
                        }
                    }
                }
                Generator::Scale { z } => {
                    if h == z {
                        for c in 0..cols {
                            m[c] = (m[c] as u64 * self.root as u64 % p) as u32;
                        }
                    }
                    if t == z {
                        for r in 0..rows {
                            m[r * cols] = (m[r * cols] as u64 * self.root_inv as u64 % p) as u32;
                        }
                    }
                }
            }
        }
    }

    fn matrices(&self, x: &[u32]) -> Vec<ExactMatrix> {
        self.shape
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(t, h))| {
                let (rows, cols) = (self.d.0[h], self.d.0[t]);
                let o = self.offsets[a];
                ExactMatrix::from_residues_in(Field::Prime(self.p), rows, cols, x[o..o + rows * cols].to_vec())
            })
            .collect()
    }
}

/// One orbit found by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteOrbit {
    pub size: u64,
    /// Matrices of the first point reached, one per arrow.
    pub representative: Vec<ExactMatrix>,
}

fn point_count(shape: &QuiverShape, d: &DimensionVector, p: u32, guard: u128) -> Result<u64> {
    Field::prime(p as u64)?;
    if d.len() != shape.vertex_count {
        return Err(Error::DimensionMismatch(format!(
            "dimension vector has {} entries, quiver has {} vertices",
            d.len(),
            shape.vertex_count
        )));
    }
    let points = (p as u128).checked_pow(shape.entry_count(d) as u32).unwrap_or(u128::MAX);
    if points > guard {
        return Err(Error::GuardExceeded {
            what: "points of the representation space",
            needed: points,
            ceiling: guard,
        });
    }
    Ok(points as u64)
}

/// Every point of `rep(d)` over `F_p`, as one matrix per arrow, in index order.
pub fn enumerate_points(
    shape: &QuiverShape,
    d: &DimensionVector,
    p: u32,
    guard: u128,
) -> Result<impl Iterator<Item = Vec<ExactMatrix>>> {
    let points = point_count(shape, d, p, guard)?;
    let space = Space::new(shape, d, p);
    let mut x = vec![0u32; space.entries];
    Ok((0..points).map(move |i| {
        space.decode(i, &mut x);
        space.matrices(&x)
    }))
}

/// Orbit label of every point, indexed like [`enumerate_points`], together
/// with the orbits themselves.
pub fn brute_orbit_labels(
    shape: &QuiverShape,
    d: &DimensionVector,
    p: u32,
    guard: u128,
) -> Result<(Vec<u32>, Vec<BruteOrbit>)> {
    const UNSEEN: u32 = u32::MAX;
    let points = point_count(shape, d, p, guard)?;
    let space = Space::new(shape, d, p);
    let gens = space.generators();
    let mut label = vec![UNSEEN; points as usize];
    let mut orbits = Vec::new();
    let mut x = vec![0u32; space.entries];
    let mut queue = VecDeque::new();
    for start in 0..points {
        if label[start as usize] != UNSEEN {
            continue;
        }
        let id = orbits.len() as u32;
        label[start as usize] = id;
        queue.push_back(start);
        let mut size = 0u64;
        while let Some(i) = queue.pop_front() {
            size += 1;
            for &g in &gens {
                space.decode(i, &mut x);
                space.apply(g, &mut x);
                let k = space.encode(&x);
                if label[k as usize] == UNSEEN {
                    label[k as usize] = id;
                    queue.push_back(k);
                }
            }
        }
        space.decode(start, &mut x);
        orbits.push(BruteOrbit {
            size,
            representative: space.matrices(&x),
        });
    }
    Ok((label, orbits))
}

/// Splits `rep(d)` over `F_p` into orbits. Fails when `p^N` exceeds `guard`.
pub fn brute_orbit_partition(shape: &QuiverShape, d: &DimensionVector, p: u32, guard: u128) -> Result<Vec<BruteOrbit>> {
    brute_orbit_labels(shape, d, p, guard).map(|(_, orbits)| orbits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub size: u64,
    pub rank_array: RankArray,
}

/// Orbits of `rep(d)` over `F_p` with the rank array of each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub p: u32,
    pub orbits: Vec<CensusEntry>,
}

impl OrbitCensus {
    pub fn total_points(&self) -> u128 {
        self.orbits.iter().map(|o| o.size as u128).sum()
    }

    /// Number of distinct rank arrays among the orbits.
    pub fn distinct_rank_arrays(&self) -> usize {
        self.orbits.iter().map(|o| &o.rank_array).collect::<HashSet<_>>().len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p = {}, {} orbits, {} points\n", self.p, self.orbits.len(), self.total_points());
        for o in &self.orbits {
            out.push_str(&format!("size {:>8}  {}\n", o.size, o.rank_array.to_compact_string()));
        }
        out
    }
}

pub fn census_bipartite(q: &BipartiteQuiver, d: &DimensionVector, p: u32, guard: u128) -> Result<OrbitCensus> {
    d.check_bipartite(q)?;
    let orbits = brute_orbit_partition(&QuiverShape::from_bipartite(q), d, p, guard)?;
    let field = Field::prime(p as u64)?;
    let orbits = orbits
        .into_iter()
        .map(|o| {
            let v = Representation::new(*q, d.clone(), field, o.representative)?;
            Ok(CensusEntry {
                size: o.size,
                rank_array: rank_array(&v),
            })
        })
        .collect::<Result<_>>()?;
    Ok(OrbitCensus { p, orbits })
}

/// Census of an arbitrary type A quiver, with rank arrays taken on `Q̃`.
pub fn census_type_a(ctx: &ReductionContext, d: &DimensionVector, p: u32, guard: u128) -> Result<OrbitCensus> {
    let orbits = brute_orbit_partition(&QuiverShape::from_type_a(ctx.source()), d, p, guard)?;
    let field = Field::prime(p as u64)?;
    let orbits = orbits
        .into_iter()
        .map(|o| {
            let v = TypeARep::new(ctx.source().clone(), d.clone(), field, o.representative)?;
            Ok(CensusEntry {
                size: o.size,
                rank_array: rank_array_arbitrary(ctx, &v)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(OrbitCensus { p, orbits })
}

/// Brute force against the combinatorial orbit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub p: u32,
    pub brute_orbits: usize,
    pub distinct_rank_arrays: usize,
    pub predicted_orbits: usize,
    /// Every brute force rank array appears in the predicted list.
    pub rank_arrays_predicted: bool,
    pub sizes_divide_group_order: bool,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.brute_orbits == self.distinct_rank_arrays
            && self.brute_orbits == self.predicted_orbits
            && self.rank_arrays_predicted
            && self.sizes_divide_group_order
    }
}

/// Compares a census with the rank arrays of the predicted orbits.
pub fn compare_census(census: &OrbitCensus, d: &DimensionVector, predicted: Vec<RankArray>) -> OracleReport {
    let predicted_set: HashSet<&RankArray> = predicted.iter().collect();
    let order = group_order(d, census.p);
    OracleReport {
        p: census.p,
        brute_orbits: census.orbits.len(),
        distinct_rank_arrays: census.distinct_rank_arrays(),
        predicted_orbits: predicted.len(),
        rank_arrays_predicted: census.orbits.iter().all(|o| predicted_set.contains(&o.rank_array)),
        sizes_divide_group_order: order.is_none_or(|g| census.orbits.iter().all(|o| g % o.size as u128 == 0)),
    }
}

/// Checks that orbits over `F_p` correspond one to one with rank arrays.
/// `guard` bounds the point count only.
pub fn verify_rank_determines_orbit(
    q: &BipartiteQuiver,
    d: &DimensionVector,
    p: u32,
    guard: u128,
) -> Result<OracleReport> {
    let census = census_bipartite(q, d, p, guard)?;
    let predicted = enumerate_orbits(q, d, DEFAULT_ORBIT_GUARD)?.into_iter().map(|n| n.rank_array).collect();
    Ok(compare_census(&census, d, predicted))
}

/// Same check for an arbitrary orientation, through the reduction.
pub fn verify_reduction_orbits(ctx: &ReductionContext, d: &DimensionVector, p: u32, guard: u128) -> Result<OracleReport> {
    let census = census_type_a(ctx, d, p, guard)?;
    let predicted = enumerate_orbits_arbitrary(ctx, d, DEFAULT_ORBIT_GUARD)?
        .into_iter()
        .map(|n| n.rank_array)
        .collect();
    Ok(compare_census(&census, d, predicted))
}

/// Bruhat order as the transitive closure of covers `u < u·t` with
/// `ℓ(u·t) = ℓ(u) + 1`, for `d ≤ MAX_COVER_DEGREE`.
pub fn bruhat_via_covers(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::InvalidPermutation("permutations of different sizes".into()));
    }
    let d = u.len();
    if d > MAX_COVER_DEGREE {
        return Err(Error::GuardExceeded {
            what: "permutation size for cover search",
            needed: d as u128,
            ceiling: MAX_COVER_DEGREE as u128,
        });
    }
    let target = inversion_length(v);
    let mut seen = HashSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(w) = queue.pop_front() {
        if &w == v {
            return Ok(true);
        }
        let l = inversion_length(&w);
        if l >= target {
            continue;
        }
        for a in 1..=d {
            for b in a + 1..=d {
                let x = w.swap_positions(a, b);
                if inversion_length(&x) == l + 1 && seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
        }
    }
    Ok(false)
}
