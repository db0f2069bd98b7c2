//! Representations of bipartite type A quivers, interval matrices `M_J`,
//! rank arrays and lace arrays.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{assemble_blocks, json_matrix_field, matrix_from_json, ExactMatrix, Field};
use crate::quiver::{ArrowLabel, BipartiteQuiver, DimensionVector, Interval, Quiver};

/// A point of `rep_Q(d)`: one matrix per arrow, shaped head × tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: BipartiteQuiver,
    dims: DimensionVector,
    field: Field,
    /// `maps[p - 1]` sits on the arrow at position `p`.
    maps: Vec<ExactMatrix>,
}

impl Representation {
    pub fn new(
        quiver: BipartiteQuiver,
        dims: DimensionVector,
        field: Field,
        maps: Vec<ExactMatrix>,
    ) -> Result<Representation> {
        dims.check_bipartite(&quiver)?;
        if maps.len() != quiver.arrow_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrow_count()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let pos = k + 1;
            field.ensure_same(m.field())?;
            let want = (
                dims.at(BipartiteQuiver::arrow_head(pos)),
                dims.at(BipartiteQuiver::arrow_tail(pos)),
            );
            if m.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "matrix on {} is {}x{}, expected {}x{}",
                    ArrowLabel::from_position(pos),
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Representation {
            quiver,
            dims,
            field,
            maps,
        })
    }

    pub fn zero(quiver: BipartiteQuiver, dims: DimensionVector, field: Field) -> Result<Representation> {
        dims.check_bipartite(&quiver)?;
        let maps = (1..=quiver.arrow_count())
            .map(|p| {
                ExactMatrix::zeros(
                    field,
                    dims.at(BipartiteQuiver::arrow_head(p)),
                    dims.at(BipartiteQuiver::arrow_tail(p)),
                )
            })
            .collect();
        Representation::new(quiver, dims, field, maps)
    }

    pub fn random<R: rand::Rng + ?Sized>(
        quiver: BipartiteQuiver,
        dims: DimensionVector,
        field: Field,
        rng: &mut R,
    ) -> Result<Representation> {
        dims.check_bipartite(&quiver)?;
        let maps = (1..=quiver.arrow_count())
            .map(|p| {
                ExactMatrix::random(
                    field,
                    dims.at(BipartiteQuiver::arrow_head(p)),
                    dims.at(BipartiteQuiver::arrow_tail(p)),
                    rng,
                )
            })
            .collect();
        Representation::new(quiver, dims, field, maps)
    }

    pub fn quiver(&self) -> BipartiteQuiver {
        self.quiver
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }

    /// Matrix on the arrow at position `pos` (1-based).
    pub fn map_at(&self, pos: usize) -> &ExactMatrix {
        &self.maps[pos - 1]
    }

    pub fn arrow(&self, a: ArrowLabel) -> &ExactMatrix {
        self.map_at(a.position())
    }

    /// `A_k`, the matrix on `α_k`.
    pub fn alpha(&self, k: usize) -> &ExactMatrix {
        self.arrow(ArrowLabel::Alpha(k))
    }

    /// `B_k`, the matrix on `β_k`.
    pub fn beta(&self, k: usize) -> &ExactMatrix {
        self.arrow(ArrowLabel::Beta(k))
    }

    /// The full snake matrix `M_Q`.
    pub fn snake_matrix(&self) -> ExactMatrix {
        if self.quiver.n == 0 {
            return ExactMatrix::zeros(self.field, self.dims.at(0), 0);
        }
        assemble_interval_matrix(
            self,
            &Interval::Arrows {
                left: 1,
                right: 2 * self.quiver.n,
            },
        )
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        direct_sum(self, other)
    }

    pub fn rank_array(&self) -> RankArray {
        rank_array(self)
    }
}

/// `M_J(V)`: rows are the sinks of `J` top to bottom, columns the sources of
/// `J` right to left. A single vertex gives a `d(v) × 0` matrix.
pub fn assemble_interval_matrix(v: &Representation, j: &Interval) -> ExactMatrix {
    let (left, right) = match *j {
        Interval::Vertex(z) => return ExactMatrix::zeros(v.field, v.dims.at(z as isize), 0),
        Interval::Arrows { left, right } => (left, right),
    };
    let top = 2 * v.quiver.n as isize;
    let (lo, hi) = ((left as isize - 1).max(0), (right as isize).min(top));
    let ys: Vec<isize> = (lo..=hi).filter(|i| i % 2 == 0).collect();
    let xs: Vec<isize> = (lo..=hi).rev().filter(|i| i % 2 == 1).collect();
    let row_sizes: Vec<usize> = ys.iter().map(|&y| v.dims.at(y)).collect();
    let col_sizes: Vec<usize> = xs.iter().map(|&x| v.dims.at(x)).collect();
    let layout: Vec<Vec<Option<&ExactMatrix>>> = ys
        .iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| {
                    // the arrow joining x and y sits at position max(x, y)
                    ((x - y).abs() == 1).then(|| v.map_at(x.max(y) as usize))
                })
                .collect()
        })
        .collect();
    assemble_blocks(v.field, &row_sizes, &col_sizes, &layout).expect("shapes checked on construction")
}

/// `r_J(V) = rank M_J(V)`.
pub fn rank_function(v: &Representation, j: &Interval) -> usize {
    assemble_interval_matrix(v, j).rank()
}

pub fn rank_array(v: &Representation) -> RankArray {
    RankArray::from_fn(v.quiver, |j| match j {
        Interval::Vertex(_) => 0,
        _ => rank_function(v, j),
    })
}

/// Interval-indexed counts stored densely in the canonical interval order.
macro_rules! dense_interval_map {
    ($name:ident) => {
        impl $name {
            pub fn from_fn(quiver: BipartiteQuiver, mut f: impl FnMut(&Interval) -> usize) -> $name {
                let values = quiver.intervals().iter().map(|j| f(j)).collect();
                $name { quiver, values }
            }

            pub fn zero(quiver: BipartiteQuiver) -> $name {
                $name {
                    quiver,
                    values: vec![0; quiver.interval_count()],
                }
            }

            pub fn quiver(&self) -> BipartiteQuiver {
                self.quiver
            }

            /// Values in the canonical interval order.
            pub fn values(&self) -> &[usize] {
                &self.values
            }

            pub fn set(&mut self, j: &Interval, value: usize) -> Result<()> {
                let k = self
                    .quiver
                    .interval_index(j)
                    .ok_or_else(|| Error::InvalidInterval(format!("{j} is not an interval for n={}", self.quiver.n)))?;
                self.values[k] = value;
                Ok(())
            }

            pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
                self.quiver.intervals().into_iter().zip(self.values.iter().copied())
            }
        }
    };
}

/// The rank array `J ↦ r_J`. Phantom arrows are trimmed on lookup, so shifted
/// intervals of the zero-padded quiver read the right value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankArray {
    quiver: BipartiteQuiver,
    values: Vec<usize>,
}

dense_interval_map!(RankArray);

impl RankArray {
    /// `r_J`; `0` for vertex intervals and for purely phantom ones.
    pub fn get(&self, j: &Interval) -> usize {
        if let Interval::Vertex(_) = j {
            return 0;
        }
        self.quiver
            .trim(j)
            .and_then(|t| self.quiver.interval_index(&t))
            .map_or(0, |k| self.values[k])
    }

    /// Componentwise `self ≤ other`.
    pub fn leq(&self, other: &RankArray) -> bool {
        self.quiver == other.quiver && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Values on arrow intervals only, in canonical order.
    pub fn arrow_values(&self) -> Vec<usize> {
        self.iter().filter(|(j, _)| j.arrow_count() > 0).map(|(_, r)| r).collect()
    }

    /// Compact text form `[a1]=1 [b1]=0 ...` over arrow intervals.
    pub fn to_compact_string(&self) -> String {
        let parts: Vec<String> = self
            .iter()
            .filter(|(j, _)| j.arrow_count() > 0)
            .map(|(j, r)| format!("{j}={r}"))
            .collect();
        parts.join(" ")
    }
}

/// Krull–Schmidt multiplicities `J ↦ s_J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaceArray {
    quiver: BipartiteQuiver,
    values: Vec<usize>,
}

dense_interval_map!(LaceArray);

impl LaceArray {
    pub fn get(&self, j: &Interval) -> usize {
        self.quiver.interval_index(j).map_or(0, |k| self.values[k])
    }

    /// Dimension vector of `⊕ I_J^{s_J}`.
    pub fn dims(&self) -> DimensionVector {
        let mut d = vec![0; self.quiver.vertex_count()];
        for (j, s) in self.iter() {
            let (lo, hi) = j.vertex_span();
            for z in lo.max(0)..=hi.min(d.len() as isize - 1) {
                d[z as usize] += s;
            }
        }
        DimensionVector(d)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.iter().filter(|&(_, s)| s > 0)
    }

    /// `⊕ I_J^{s_J}` over `field`.
    pub fn realize(&self, field: Field) -> Result<Representation> {
        let mut v = Representation::zero(self.quiver, DimensionVector::zero(self.quiver.vertex_count()), field)?;
        for (j, s) in self.nonzero() {
            let ind = indecomposable_rep(self.quiver, field, &j)?;
            for _ in 0..s {
                v = direct_sum(&v, &ind)?;
            }
        }
        Ok(v)
    }
}

/// `r_J = Σ_{J'} s_{J'} ⌈#(J ∩ J') / 2⌉` with `#` counting shared arrows.
pub fn lace_to_rank(s: &LaceArray) -> RankArray {
    let q = s.quiver;
    let support: Vec<(Interval, usize)> = s.nonzero().collect();
    RankArray::from_fn(q, |j| {
        support
            .iter()
            .map(|(jp, m)| m * j.shared_arrows(jp).div_ceil(2))
            .sum()
    })
}

/// Signed multiplicity of `I_J` read off a rank function, for `J` with arrows.
fn signed_multiplicity(r: &RankArray, j: &Interval) -> i64 {
    let jl = j.shift_left().expect("interval has arrows");
    let jr = j.shift_right().expect("interval has arrows");
    let meet = jl.meet(&jr).map_or(0, |m| r.get(&m));
    let join = r.get(&jl.join(&jr));
    let raw = r.get(&jl) as i64 + r.get(&jr) as i64 - meet as i64 - join as i64;
    if j.arrow_count() % 2 == 0 {
        raw
    } else {
        -raw
    }
}

/// Recovers multiplicities from ranks. Any negative multiplicity means `r`
/// is not the rank array of a representation of dimension `d`.
pub fn rank_to_lace(r: &RankArray, d: &DimensionVector) -> Result<LaceArray> {
    let q = r.quiver;
    d.check_bipartite(&q)?;
    let mut s = LaceArray::zero(q);
    let mut through = vec![0usize; q.vertex_count()];
    for (k, j) in q.intervals().iter().enumerate() {
        match *j {
            Interval::Vertex(_) => {
                if r.values[k] != 0 {
                    return Err(Error::InvalidRankArray(format!("vertex interval {j} has rank {}", r.values[k])));
                }
            }
            Interval::Arrows { .. } => {
                let m = signed_multiplicity(r, j);
                if m < 0 {
                    return Err(Error::InvalidRankArray(format!("multiplicity of {j} would be {m}")));
                }
                s.values[k] = m as usize;
                let (lo, hi) = j.vertex_span();
                for z in lo..=hi {
                    through[z as usize] += m as usize;
                }
            }
        }
    }
    for z in 0..q.vertex_count() {
        let left = d.0[z] as i64 - through[z] as i64;
        if left < 0 {
            return Err(Error::InvalidRankArray(format!(
                "vertex multiplicity at {} would be {left}",
                crate::quiver::VertexLabel::from_index(z as isize)
            )));
        }
        s.values[z] = left as usize;
    }
    Ok(s)
}

/// Whether `f` is the rank array of some representation of dimension `d`.
pub fn validate_rank_array(f: &RankArray, d: &DimensionVector) -> bool {
    match rank_to_lace(f, d) {
        Ok(s) => lace_to_rank(&s) == *f,
        Err(_) => false,
    }
}

/// `I_J`: the field at each vertex of `J`, identity maps on its arrows.
pub fn indecomposable_rep(q: BipartiteQuiver, field: Field, j: &Interval) -> Result<Representation> {
    if q.trim(j).is_none() || !q.admits(j) {
        return Err(Error::InvalidInterval(format!("{j} is not an interval for n={}", q.n)));
    }
    let mut d = vec![0; q.vertex_count()];
    for (z, dz) in d.iter_mut().enumerate() {
        if j.contains_vertex(z) {
            *dz = 1;
        }
    }
    let dims = DimensionVector(d);
    let maps = (1..=q.arrow_count())
        .map(|p| {
            let (h, t) = (dims.at(BipartiteQuiver::arrow_head(p)), dims.at(BipartiteQuiver::arrow_tail(p)));
            if h == 1 && t == 1 {
                ExactMatrix::identity(field, 1)
            } else {
                ExactMatrix::zeros(field, h, t)
            }
        })
        .collect();
    Representation::new(q, dims, field, maps)
}

pub fn direct_sum(u: &Representation, v: &Representation) -> Result<Representation> {
    if u.quiver != v.quiver {
        return Err(Error::InvalidQuiver(format!(
            "direct sum of representations over n={} and n={}",
            u.quiver.n, v.quiver.n
        )));
    }
    u.field.ensure_same(v.field)?;
    let dims = DimensionVector(u.dims.0.iter().zip(&v.dims.0).map(|(a, b)| a + b).collect());
    let maps = u
        .maps
        .iter()
        .zip(&v.maps)
        .map(|(a, b)| a.direct_sum(b))
        .collect::<Result<_>>()?;
    Representation::new(u.quiver, dims, u.field, maps)
}

/// `g · V = (g_{ha} V_a g_{ta}^{-1})`, with `g` listed per vertex index.
pub fn act(g: &[ExactMatrix], v: &Representation) -> Result<Representation> {
    if g.len() != v.quiver.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} group elements for {} vertices",
            g.len(),
            v.quiver.vertex_count()
        )));
    }
    for (z, gz) in g.iter().enumerate() {
        if gz.shape() != (v.dims.0[z], v.dims.0[z]) {
            return Err(Error::DimensionMismatch(format!("g at vertex {z} has the wrong size")));
        }
    }
    let inv: Vec<ExactMatrix> = g.iter().map(ExactMatrix::inverse).collect::<Result<_>>()?;
    let maps = (1..=v.quiver.arrow_count())
        .map(|p| {
            let h = BipartiteQuiver::arrow_head(p) as usize;
            let t = BipartiteQuiver::arrow_tail(p) as usize;
            g[h].multiply(v.map_at(p))?.multiply(&inv[t])
        })
        .collect::<Result<_>>()?;
    Representation::new(v.quiver, v.dims.clone(), v.field, maps)
}

/// A random element of `GL(d)`.
pub fn random_group_element<R: rand::Rng + ?Sized>(dims: &DimensionVector, field: Field, rng: &mut R) -> Vec<ExactMatrix> {
    dims.0
        .iter()
        .map(|&k| ExactMatrix::random_invertible(field, k, rng))
        .collect()
}

#[derive(Serialize)]
struct RepJson {
    quiver: Quiver,
    dims: Vec<usize>,
    field: Option<Field>,
    arrows: BTreeMap<String, ExactMatrix>,
}

/// Input side of a representation file. Matrices may be full objects or bare
/// row arrays; the field may be given once at the top.
#[derive(Deserialize)]
pub(crate) struct RepFileJson {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub field: Option<Field>,
    pub arrows: BTreeMap<String, serde_json::Value>,
}

impl RepFileJson {
    /// The top-level tag, else the first matrix carrying one, else `Q`.
    pub fn resolve_field(&self) -> Result<Field> {
        if let Some(f) = self.field {
            return Ok(f);
        }
        self.arrows
            .values()
            .find_map(json_matrix_field)
            .unwrap_or(Ok(Field::Rational))
    }

    /// Removes and parses the matrix for `key`, shaped `rows x cols`.
    pub fn take(&mut self, key: &str, field: Field, shape: (usize, usize)) -> Result<ExactMatrix> {
        let v = self
            .arrows
            .remove(key)
            .ok_or_else(|| Error::Parse(format!("missing matrix for arrow {key}")))?;
        matrix_from_json(&v, field, shape).map_err(|e| match e {
            Error::DimensionMismatch(m) => Error::DimensionMismatch(format!("arrow {key}: {m}")),
            other => other,
        })
    }

    pub fn ensure_consumed(&self) -> Result<()> {
        match self.arrows.keys().next() {
            Some(extra) => Err(Error::Parse(format!("unknown arrow {extra}"))),
            None => Ok(()),
        }
    }
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RepJson {
            quiver: Quiver::Bipartite(self.quiver),
            dims: self.dims.0.clone(),
            field: Some(self.field),
            arrows: (1..=self.quiver.arrow_count())
                .map(|p| (ArrowLabel::from_position(p).to_string(), self.map_at(p).clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let js = RepFileJson::deserialize(deserializer)?;
        rep_from_file(js).map_err(D::Error::custom)
    }
}

pub(crate) fn rep_from_file(mut js: RepFileJson) -> Result<Representation> {
    let Quiver::Bipartite(q) = js.quiver else {
        return Err(Error::InvalidQuiver("expected a bipartiteA quiver".into()));
    };
    let field = js.resolve_field()?;
    let d = DimensionVector(js.dims.clone());
    d.check_bipartite(&q)?;
    let mut maps = Vec::new();
    for p in 1..=q.arrow_count() {
        let key = ArrowLabel::from_position(p).to_string();
        let shape = (d.at(BipartiteQuiver::arrow_head(p)), d.at(BipartiteQuiver::arrow_tail(p)));
        maps.push(js.take(&key, field, shape)?);
    }
    js.ensure_consumed()?;
    Representation::new(q, d, field, maps)
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    interval: Interval,
    rank: usize,
}

impl Serialize for RankArray {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<RankEntry> = self.iter().map(|(interval, rank)| RankEntry { interval, rank }).collect();
        entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RankArray {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let entries = Vec::<RankEntry>::deserialize(deserializer)?;
        let vertices = entries.iter().filter(|e| e.interval.arrow_count() == 0).count();
        if vertices % 2 == 0 {
            return Err(D::Error::custom("rank array must list every vertex interval"));
        }
        let q = BipartiteQuiver::new(vertices / 2);
        let mut r = RankArray::zero(q);
        let mut seen = vec![false; q.interval_count()];
        for e in &entries {
            let k = q
                .interval_index(&e.interval)
                .ok_or_else(|| D::Error::custom(format!("{} is not an interval for n={}", e.interval, q.n)))?;
            seen[k] = true;
            r.values[k] = e.rank;
        }
        if !seen.iter().all(|&b| b) {
            return Err(D::Error::custom("rank array does not cover every interval"));
        }
        Ok(r)
    }
}

#[derive(Serialize, Deserialize)]
struct LaceEntry {
    interval: Interval,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct LaceJson {
    n: usize,
    summands: Vec<LaceEntry>,
}

impl Serialize for LaceArray {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LaceJson {
            n: self.quiver.n,
            summands: self
                .nonzero()
                .map(|(interval, multiplicity)| LaceEntry { interval, multiplicity })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaceArray {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let js = LaceJson::deserialize(deserializer)?;
        let mut s = LaceArray::zero(BipartiteQuiver::new(js.n));
        for e in js.summands {
            s.set(&e.interval, e.multiplicity).map_err(serde::de::Error::custom)?;
        }
        Ok(s)
    }
}
