//! Reduction of an arbitrary type A quiver `Q` to a bipartite quiver `Q̃`.
//!
//! At every intermediate vertex `z_i` where two arrows point the same way a
//! new vertex `w_i` and arrow `δ_i` are inserted:
//!
//! ```text
//! z_{i-1} → z_i →   becomes   z_{i-1} -γ_i→ w_i ←δ_i- z_i →
//! z_{i-1} ← z_i ←   becomes   z_{i-1} ←γ_i- w_i -δ_i→ z_i ←
//! ```
//!
//! The result is then put in the standard bipartite labeling: transposed if
//! its first vertex is a source, and padded with a zero-dimensional vertex if
//! its vertex count is even.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Field};
use crate::poset::{hasse, DegenerationPoset, OrbitNode};
use crate::quiver::{
    ArrowLabel, BipartiteQuiver, DimensionVector, Interval, Orientation, Quiver, TypeAQuiver, VertexLabel,
};
use crate::rep::{rank_array, rep_from_file, RankArray, RepFileJson, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JunctionKind {
    /// `z_{i-1} → z_i →`, gets a new sink.
    Sink,
    /// `z_{i-1} ← z_i ←`, gets a new source.
    Source,
}

/// Where a vertex of `Q̃` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubledVertex {
    /// `z_i`
    Original(usize),
    /// `w_i`
    Inserted(usize),
    /// Zero-dimensional vertex added to reach an odd vertex count.
    Padding,
}

/// Where an arrow of `Q̃` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubledArrow {
    /// `γ_i`
    Gamma(usize),
    /// `δ_i`
    Delta(usize),
    Padding,
}

/// `Q`, its bipartite double `Q̃`, and the correspondence between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionContext {
    source: TypeAQuiver,
    target: BipartiteQuiver,
    dualized: bool,
    padded: bool,
    /// `(i, kind)` for every junction `z_i` that received a `w_i`.
    insertions: Vec<(usize, JunctionKind)>,
    /// Indexed by vertex of `Q̃`.
    vertices: Vec<DoubledVertex>,
    /// Indexed by arrow position of `Q̃` minus one.
    arrows: Vec<DoubledArrow>,
}

/// `bipartite_double`: builds `Q̃` and the correspondence tables.
pub fn bipartite_double(q: &TypeAQuiver) -> ReductionContext {
    let o = q.orientation();
    let m = o.len();
    let mut vertices = vec![DoubledVertex::Original(0)];
    // (arrow, points from the left vertex to the right one)
    let mut arrows: Vec<(DoubledArrow, bool)> = Vec::new();
    let mut insertions = Vec::new();
    for i in 1..=m {
        let right = o[i - 1] == Orientation::Right;
        let junction = i < m && o[i - 1] == o[i];
        if junction {
            let kind = if right { JunctionKind::Sink } else { JunctionKind::Source };
            insertions.push((i, kind));
            vertices.push(DoubledVertex::Inserted(i));
            vertices.push(DoubledVertex::Original(i));
            // sink: z_{i-1} → w_i ← z_i; source: z_{i-1} ← w_i → z_i
            arrows.push((DoubledArrow::Gamma(i), right));
            arrows.push((DoubledArrow::Delta(i), !right));
        } else {
            vertices.push(DoubledVertex::Original(i));
            arrows.push((DoubledArrow::Gamma(i), right));
        }
    }
    // position 1 must point left, into y_0
    let dualized = arrows.first().is_some_and(|&(_, r)| r);
    let padded = vertices.len() % 2 == 0;
    if padded {
        vertices.push(DoubledVertex::Padding);
        let last_right = arrows.last().map_or(true, |&(_, r)| r != dualized);
        arrows.push((DoubledArrow::Padding, !last_right != dualized));
    }
    debug_assert!(arrows
        .iter()
        .enumerate()
        .all(|(k, &(_, r))| (r != dualized) == ((k + 1) % 2 == 0)));
    ReductionContext {
        source: q.clone(),
        target: BipartiteQuiver::new((vertices.len() - 1) / 2),
        dualized,
        padded,
        insertions,
        vertices,
        arrows: arrows.into_iter().map(|(a, _)| a).collect(),
    }
}

impl ReductionContext {
    pub fn source(&self) -> &TypeAQuiver {
        &self.source
    }

    pub fn target(&self) -> BipartiteQuiver {
        self.target
    }

    pub fn dualized(&self) -> bool {
        self.dualized
    }

    pub fn padded(&self) -> bool {
        self.padded
    }

    pub fn insertions(&self) -> &[(usize, JunctionKind)] {
        &self.insertions
    }

    pub fn vertices(&self) -> &[DoubledVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[DoubledArrow] {
        &self.arrows
    }

    fn kind_at(&self, i: usize) -> Option<JunctionKind> {
        self.insertions.iter().find(|&&(j, _)| j == i).map(|&(_, k)| k)
    }

    /// Vertex of `Q̃` standing for `z_i`.
    pub fn vertex_of(&self, i: usize) -> usize {
        self.vertices
            .iter()
            .position(|&v| v == DoubledVertex::Original(i))
            .expect("every original vertex survives")
    }

    /// Arrow position in `Q̃` of `γ_i` or `δ_i`.
    pub fn position_of(&self, a: DoubledArrow) -> Option<usize> {
        self.arrows.iter().position(|&b| b == a).map(|k| k + 1)
    }

    /// `d̃(z_i) = d̃(w_i) = d(z_i)`, zero on padding.
    pub fn lift_dimension(&self, d: &DimensionVector) -> Result<DimensionVector> {
        if d.len() != self.source.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                d.len(),
                self.source.vertex_count()
            )));
        }
        Ok(DimensionVector(
            self.vertices
                .iter()
                .map(|v| match *v {
                    DoubledVertex::Original(i) | DoubledVertex::Inserted(i) => d.0[i],
                    DoubledVertex::Padding => 0,
                })
                .collect(),
        ))
    }

    /// Lifted representation, identity on every `δ_i`.
    pub fn lift_rep(&self, v: &TypeARep) -> Result<Representation> {
        if v.quiver != self.source {
            return Err(Error::InvalidQuiver("representation is over a different quiver".into()));
        }
        let dt = self.lift_dimension(&v.dims)?;
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let m = match *a {
                    DoubledArrow::Gamma(i) => v.maps[i - 1].clone(),
                    DoubledArrow::Delta(i) => ExactMatrix::identity(v.field, v.dims.0[i]),
                    DoubledArrow::Padding => {
                        let p = k + 1;
                        let (h, t) = (BipartiteQuiver::arrow_head(p), BipartiteQuiver::arrow_tail(p));
                        // shape before a possible transpose
                        let (h, t) = if self.dualized { (t, h) } else { (h, t) };
                        ExactMatrix::zeros(v.field, dt.at(h), dt.at(t))
                    }
                };
                if self.dualized {
                    m.transpose()
                } else {
                    m
                }
            })
            .collect();
        Representation::new(self.target, dt, v.field, maps)
    }

    /// `π`: composes out the `δ` maps. Fails outside the open set where every
    /// `δ_i` is invertible.
    pub fn project(&self, vt: &Representation) -> Result<TypeARep> {
        if vt.quiver() != self.target {
            return Err(Error::InvalidQuiver("representation is not over the doubled quiver".into()));
        }
        let undual = |m: &ExactMatrix| if self.dualized { m.transpose() } else { m.clone() };
        let m = self.source.arrow_count();
        let mut maps = Vec::with_capacity(m);
        for i in 1..=m {
            let g = undual(vt.map_at(self.position_of(DoubledArrow::Gamma(i)).expect("gamma present")));
            let x = match self.kind_at(i) {
                None => g,
                Some(kind) => {
                    let delta = undual(vt.map_at(self.position_of(DoubledArrow::Delta(i)).expect("delta present")));
                    let inv = delta
                        .inverse()
                        .map_err(|_| Error::NotInOpenLocus(format!("the map on d{i} is not invertible")))?;
                    match kind {
                        JunctionKind::Sink => inv.multiply(&g)?,
                        JunctionKind::Source => g.multiply(&inv)?,
                    }
                }
            };
            maps.push(x);
        }
        let dims = DimensionVector(
            (0..self.source.vertex_count())
                .map(|i| vt.dims().0[self.vertex_of(i)])
                .collect(),
        );
        TypeARep::new(self.source.clone(), dims, vt.field(), maps)
    }

    /// Image of `g̃ ∈ GL(d̃)` in `GL(d)`, so that
    /// `project(g̃ · ṽ) = project_group(g̃) · project(ṽ)`.
    pub fn project_group(&self, g: &[ExactMatrix]) -> Result<Vec<ExactMatrix>> {
        (0..self.source.vertex_count())
            .map(|i| {
                let gi = &g[self.vertex_of(i)];
                if self.dualized {
                    Ok(gi.inverse()?.transpose())
                } else {
                    Ok(gi.clone())
                }
            })
            .collect()
    }

    /// Whether `ṽ` lies in the open set: every `δ_i` has full rank.
    pub fn in_open_locus(&self, r: &RankArray, dt: &DimensionVector) -> bool {
        self.insertions.iter().all(|&(i, _)| {
            let p = self.position_of(DoubledArrow::Delta(i)).expect("delta present");
            let w = self.vertices.iter().position(|&v| v == DoubledVertex::Inserted(i)).expect("w present");
            r.get(&Interval::Arrows { left: p, right: p }) == dt.0[w]
        })
    }

    /// Vertices `z_a..=z_b` of `Q` met by an interval of `Q̃`, if any.
    pub fn source_span(&self, j: &Interval) -> Option<(usize, usize)> {
        let (lo, hi) = j.vertex_span();
        let zs: Vec<usize> = (lo.max(0)..=hi)
            .filter_map(|k| match self.vertices.get(k as usize) {
                Some(&DoubledVertex::Original(i)) => Some(i),
                _ => None,
            })
            .collect();
        Some((*zs.iter().min()?, *zs.iter().max()?))
    }

    fn source_vertex_name(&self, v: DoubledVertex) -> String {
        match v {
            DoubledVertex::Original(i) => format!("z{i}"),
            DoubledVertex::Inserted(i) => format!("w{i}"),
            DoubledVertex::Padding => "pad".into(),
        }
    }

    fn source_arrow_name(&self, a: DoubledArrow) -> String {
        match a {
            DoubledArrow::Gamma(i) => format!("g{i}"),
            DoubledArrow::Delta(i) => format!("d{i}"),
            DoubledArrow::Padding => "pad".into(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "Q: {} ({} vertices)\nQ~: bipartite n={}{}{}\n",
            self.source.word(),
            self.source.vertex_count(),
            self.target.n,
            if self.dualized { ", dualized" } else { "" },
            if self.padded { ", padded" } else { "" }
        );
        for &(i, kind) in &self.insertions {
            out.push_str(&format!("insert w{i}, d{i} at z{i} ({kind:?})\n"));
        }
        for (k, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("{} -> {}\n", self.source_vertex_name(*v), VertexLabel::from_index(k as isize)));
        }
        for (k, a) in self.arrows.iter().enumerate() {
            out.push_str(&format!("{} -> {}\n", self.source_arrow_name(*a), ArrowLabel::from_position(k + 1)));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct Correspondence {
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
struct InsertionJson {
    junction: String,
    vertex: String,
    arrow: String,
    kind: JunctionKind,
}

#[derive(Serialize, Deserialize)]
struct ContextJson {
    quiver: Quiver,
    doubled: Quiver,
    dualized: bool,
    padded: bool,
    insertions: Vec<InsertionJson>,
    vertices: Vec<Correspondence>,
    arrows: Vec<Correspondence>,
}

impl Serialize for ReductionContext {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ContextJson {
            quiver: Quiver::TypeA(self.source.clone()),
            doubled: Quiver::Bipartite(self.target),
            dualized: self.dualized,
            padded: self.padded,
            insertions: self
                .insertions
                .iter()
                .map(|&(i, kind)| InsertionJson {
                    junction: format!("z{i}"),
                    vertex: format!("w{i}"),
                    arrow: format!("d{i}"),
                    kind,
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(k, &v)| Correspondence {
                    source: self.source_vertex_name(v),
                    target: VertexLabel::from_index(k as isize).to_string(),
                })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .enumerate()
                .map(|(k, &a)| Correspondence {
                    source: self.source_arrow_name(a),
                    target: ArrowLabel::from_position(k + 1).to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ReductionContext {
    /// Rebuilds from the source quiver and checks the tables agree.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let js = ContextJson::deserialize(deserializer)?;
        let Quiver::TypeA(q) = js.quiver else {
            return Err(D::Error::custom("source quiver must be of type A"));
        };
        let ctx = bipartite_double(&q);
        let again = serde_json::to_value(&ctx).map_err(D::Error::custom)?;
        let given = ContextJson {
            quiver: Quiver::TypeA(q),
            ..js
        };
        if serde_json::to_value(&given).map_err(D::Error::custom)? != again {
            return Err(D::Error::custom("correspondence tables do not match the quiver"));
        }
        Ok(ctx)
    }
}

/// A representation of a type A quiver of any orientation. `maps[i - 1]`
/// sits on `γ_i` and is shaped head × tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeARep {
    quiver: TypeAQuiver,
    dims: DimensionVector,
    field: Field,
    maps: Vec<ExactMatrix>,
}

impl TypeARep {
    pub fn new(quiver: TypeAQuiver, dims: DimensionVector, field: Field, maps: Vec<ExactMatrix>) -> Result<TypeARep> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrow_count() {
            return Err(Error::DimensionMismatch(format!("{} matrices for {} arrows", maps.len(), quiver.arrow_count())));
        }
        for (k, m) in maps.iter().enumerate() {
            field.ensure_same(m.field())?;
            let (t, h) = quiver.arrow_ends(k + 1);
            if m.shape() != (dims.0[h], dims.0[t]) {
                return Err(Error::DimensionMismatch(format!(
                    "matrix on g{} is {}x{}, expected {}x{}",
                    k + 1,
                    m.rows(),
                    m.cols(),
                    dims.0[h],
                    dims.0[t]
                )));
            }
        }
        Ok(TypeARep { quiver, dims, field, maps })
    }

    pub fn zero(quiver: TypeAQuiver, dims: DimensionVector, field: Field) -> Result<TypeARep> {
        let maps = (1..=quiver.arrow_count())
            .map(|i| {
                let (t, h) = quiver.arrow_ends(i);
                ExactMatrix::zeros(field, dims.at(h as isize), dims.at(t as isize))
            })
            .collect();
        TypeARep::new(quiver, dims, field, maps)
    }

    pub fn random<R: rand::Rng + ?Sized>(
        quiver: TypeAQuiver,
        dims: DimensionVector,
        field: Field,
        rng: &mut R,
    ) -> Result<TypeARep> {
        let maps = (1..=quiver.arrow_count())
            .map(|i| {
                let (t, h) = quiver.arrow_ends(i);
                ExactMatrix::random(field, dims.at(h as isize), dims.at(t as isize), rng)
            })
            .collect();
        TypeARep::new(quiver, dims, field, maps)
    }

    pub fn quiver(&self) -> &TypeAQuiver {
        &self.quiver
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

    /// `g · V`, with `g` listed per vertex.
    pub fn act(&self, g: &[ExactMatrix]) -> Result<TypeARep> {
        if g.len() != self.quiver.vertex_count() {
            return Err(Error::DimensionMismatch("one group element per vertex".into()));
        }
        let inv: Vec<ExactMatrix> = g.iter().map(ExactMatrix::inverse).collect::<Result<_>>()?;
        let maps = (1..=self.quiver.arrow_count())
            .map(|i| {
                let (t, h) = self.quiver.arrow_ends(i);
                g[h].multiply(&self.maps[i - 1])?.multiply(&inv[t])
            })
            .collect::<Result<_>>()?;
        TypeARep::new(self.quiver.clone(), self.dims.clone(), self.field, maps)
    }
}

#[derive(Serialize)]
struct TypeARepJson {
    quiver: Quiver,
    dims: Vec<usize>,
    field: Option<Field>,
    arrows: BTreeMap<String, ExactMatrix>,
}

impl Serialize for TypeARep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TypeARepJson {
            quiver: Quiver::TypeA(self.quiver.clone()),
            dims: self.dims.0.clone(),
            field: Some(self.field),
            arrows: self
                .maps
                .iter()
                .enumerate()
                .map(|(k, m)| (format!("g{}", k + 1), m.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TypeARep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let js = RepFileJson::deserialize(deserializer)?;
        type_a_rep_from_file(js).map_err(D::Error::custom)
    }
}

fn type_a_rep_from_file(mut js: RepFileJson) -> Result<TypeARep> {
    let Quiver::TypeA(q) = js.quiver.clone() else {
        return Err(Error::InvalidQuiver("expected a quiver of type A".into()));
    };
    let field = js.resolve_field()?;
    let d = DimensionVector(js.dims.clone());
    if d.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "dimension vector has {} entries, quiver has {} vertices",
            d.len(),
            q.vertex_count()
        )));
    }
    let mut maps = Vec::new();
    for i in 1..=q.arrow_count() {
        let (t, h) = q.arrow_ends(i);
        maps.push(js.take(&format!("g{i}"), field, (d.0[h], d.0[t]))?);
    }
    js.ensure_consumed()?;
    TypeARep::new(q, d, field, maps)
}

/// A representation read from JSON: bipartite or of arbitrary orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyRep {
    Bipartite(Representation),
    TypeA(TypeARep),
}

impl AnyRep {
    pub fn from_json(text: &str) -> Result<AnyRep> {
        AnyRep::from_json_in(text, None)
    }

    /// Parses a representation file. `field`, if given, is used when the file
    /// names none and must agree with the file when it does.
    pub fn from_json_in(text: &str, field: Option<Field>) -> Result<AnyRep> {
        let mut js: RepFileJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(f) = field {
            if let Some(g) = js.field {
                f.ensure_same(g)?;
            }
            // matrix-level tags are checked against `f` as they are read
            js.field = Some(f);
        }
        match js.quiver {
            Quiver::Bipartite(_) => rep_from_file(js).map(AnyRep::Bipartite),
            Quiver::TypeA(_) => type_a_rep_from_file(js).map(AnyRep::TypeA),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            AnyRep::Bipartite(v) => v.field(),
            AnyRep::TypeA(v) => v.field(),
        }
    }
}

/// The rank array of the lift: a complete orbit invariant for `Q`.
pub fn rank_array_arbitrary(ctx: &ReductionContext, v: &TypeARep) -> Result<RankArray> {
    Ok(rank_array(&ctx.lift_rep(v)?))
}

/// Orbits of `rep_Q(d)`, as the orbits of `rep_Q̃(d̃)` inside the open set.
pub fn enumerate_orbits_arbitrary(ctx: &ReductionContext, d: &DimensionVector, guard: u128) -> Result<Vec<OrbitNode>> {
    let dt = ctx.lift_dimension(d)?;
    Ok(crate::poset::enumerate_orbits(&ctx.target, &dt, guard)?
        .into_iter()
        .filter(|node| ctx.in_open_locus(&node.rank_array, &dt))
        .collect())
}

/// Degeneration poset of `rep_Q(d)`, with nodes described on `Q̃`.
pub fn degeneration_poset_arbitrary(ctx: &ReductionContext, d: &DimensionVector, guard: u128) -> Result<DegenerationPoset> {
    let dt = ctx.lift_dimension(d)?;
    Ok(hasse(ctx.target, dt, enumerate_orbits_arbitrary(ctx, d, guard)?))
}
