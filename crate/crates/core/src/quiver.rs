//! Type A quivers, dimension vectors, and intervals.
//!
//! A bipartite quiver with parameter `n` has sinks `y_0..y_n`, sources
//! `x_1..x_n` and arrows `α_i: x_i → y_{i-1}`, `β_i: x_i → y_i`. Vertices and
//! arrows are laid out on a line and addressed by position:
//!
//! ```text
//! vertex index:  0    1    2    3    4  ...  2k-1  2k
//!                y0   x1   y1   x2   y2 ...  x_k   y_k
//! arrow position:   1    2    3    4    ...     2k
//!                   α1   β1   α2   β2   ...     β_k
//! ```
//!
//! Arrow position `p` joins vertices `p-1` and `p`. Positions `0` (`β_0`) and
//! `2n+1` (`α_{n+1}`) are phantom arrows of the zero-padded extension; they
//! appear only when an interval is shifted past an end of the quiver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Direction of arrow `γ_i` between `z_{i-1}` and `z_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `z_{i-1} → z_i`
    Right,
    /// `z_{i-1} ← z_i`
    Left,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Right => Orientation::Left,
            Orientation::Left => Orientation::Right,
        }
    }
}

/// A type A quiver `z_0 - z_1 - ... - z_n` with arbitrary orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeAQuiver {
    orientation: Vec<Orientation>,
}

impl TypeAQuiver {
    pub fn new(orientation: Vec<Orientation>) -> TypeAQuiver {
        TypeAQuiver { orientation }
    }

    /// Parses an orientation word such as `"RRLL"`.
    pub fn from_word(word: &str) -> Result<TypeAQuiver> {
        let orientation = word
            .trim()
            .chars()
            .map(|c| match c {
                'R' | 'r' => Ok(Orientation::Right),
                'L' | 'l' => Ok(Orientation::Left),
                other => Err(Error::InvalidQuiver(format!(
                    "orientation letter {other:?} is not L or R"
                ))),
            })
            .collect::<Result<_>>()?;
        Ok(TypeAQuiver { orientation })
    }

    pub fn word(&self) -> String {
        self.orientation
            .iter()
            .map(|o| match o {
                Orientation::Right => 'R',
                Orientation::Left => 'L',
            })
            .collect()
    }

    pub fn orientation(&self) -> &[Orientation] {
        &self.orientation
    }

    pub fn vertex_count(&self) -> usize {
        self.orientation.len() + 1
    }

    pub fn arrow_count(&self) -> usize {
        self.orientation.len()
    }

    /// `(tail, head)` of arrow `γ_i`, 1-based `i`.
    pub fn arrow_ends(&self, i: usize) -> (usize, usize) {
        match self.orientation[i - 1] {
            Orientation::Right => (i - 1, i),
            Orientation::Left => (i, i - 1),
        }
    }

    /// Every vertex is a source or a sink.
    pub fn is_bipartite(&self) -> bool {
        self.orientation.windows(2).all(|w| w[0] != w[1])
    }
}

/// A bipartite type A quiver in the standard labeling; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BipartiteQuiver {
    pub n: usize,
}

/// A vertex `x_k` or `y_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    X(usize),
    Y(usize),
}

/// An arrow `α_k` or `β_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowLabel {
    Alpha(usize),
    Beta(usize),
}

impl VertexLabel {
    pub fn index(self) -> isize {
        match self {
            VertexLabel::Y(k) => 2 * k as isize,
            VertexLabel::X(k) => 2 * k as isize - 1,
        }
    }

    pub fn from_index(idx: isize) -> VertexLabel {
        if idx.rem_euclid(2) == 0 {
            VertexLabel::Y((idx / 2) as usize)
        } else {
            VertexLabel::X(((idx + 1) / 2) as usize)
        }
    }
}

impl ArrowLabel {
    pub fn position(self) -> usize {
        match self {
            ArrowLabel::Alpha(k) => 2 * k - 1,
            ArrowLabel::Beta(k) => 2 * k,
        }
    }

    pub fn from_position(p: usize) -> ArrowLabel {
        if p % 2 == 0 {
            ArrowLabel::Beta(p / 2)
        } else {
            ArrowLabel::Alpha((p + 1) / 2)
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::X(k) => write!(f, "x{k}"),
            VertexLabel::Y(k) => write!(f, "y{k}"),
        }
    }
}

impl fmt::Display for ArrowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowLabel::Alpha(k) => write!(f, "a{k}"),
            ArrowLabel::Beta(k) => write!(f, "b{k}"),
        }
    }
}

fn parse_indexed(s: &str) -> Result<(char, usize)> {
    let mut chars = s.trim().chars();
    let head = chars
        .next()
        .ok_or_else(|| Error::Parse("empty label".into()))?;
    let k = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Parse(format!("bad label {s:?}")))?;
    Ok((head, k))
}

impl FromStr for VertexLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<VertexLabel> {
        match parse_indexed(s)? {
            ('y', k) => Ok(VertexLabel::Y(k)),
            ('x', k) if k >= 1 => Ok(VertexLabel::X(k)),
            _ => Err(Error::Parse(format!("bad vertex label {s:?}"))),
        }
    }
}

impl FromStr for ArrowLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<ArrowLabel> {
        match parse_indexed(s)? {
            ('a', k) if k >= 1 => Ok(ArrowLabel::Alpha(k)),
            ('b', k) => Ok(ArrowLabel::Beta(k)),
            _ => Err(Error::Parse(format!("bad arrow label {s:?}"))),
        }
    }
}

impl BipartiteQuiver {
    pub fn new(n: usize) -> BipartiteQuiver {
        BipartiteQuiver { n }
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n + 1
    }

    pub fn arrow_count(&self) -> usize {
        2 * self.n
    }

    /// Tail (a source `x_k`) of the arrow at `pos`.
    pub fn arrow_tail(pos: usize) -> isize {
        if pos % 2 == 0 {
            pos as isize - 1
        } else {
            pos as isize
        }
    }

    /// Head (a sink `y_k`) of the arrow at `pos`.
    pub fn arrow_head(pos: usize) -> isize {
        if pos % 2 == 0 {
            pos as isize
        } else {
            pos as isize - 1
        }
    }

    pub fn is_real_arrow(&self, pos: usize) -> bool {
        (1..=2 * self.n).contains(&pos)
    }

    pub fn check_vertex(&self, label: VertexLabel) -> Result<usize> {
        let idx = label.index();
        if idx < 0 || idx > 2 * self.n as isize {
            return Err(Error::InvalidInterval(format!("{label} is not a vertex for n={}", self.n)));
        }
        Ok(idx as usize)
    }

    /// All intervals: single vertices in order, then arrow intervals by left
    /// endpoint and then length.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = (0..self.vertex_count()).map(Interval::Vertex).collect();
        for left in 1..=2 * self.n {
            for right in left..=2 * self.n {
                out.push(Interval::Arrows { left, right });
            }
        }
        out
    }

    pub fn interval_count(&self) -> usize {
        let k = 2 * self.n;
        self.vertex_count() + k * (k + 1) / 2
    }

    /// Position of a non-phantom interval in [`BipartiteQuiver::intervals`].
    pub fn interval_index(&self, j: &Interval) -> Option<usize> {
        let k = 2 * self.n;
        match *j {
            Interval::Vertex(v) => (v <= k).then_some(v),
            Interval::Arrows { left, right } => {
                if left == 0 || right > k || left > right {
                    return None;
                }
                // intervals with left endpoint < left come first
                let before: usize = (1..left).map(|l| k - l + 1).sum();
                Some(self.vertex_count() + before + (right - left))
            }
        }
    }

    /// Drops phantom end arrows; `None` if nothing real is left.
    pub fn trim(&self, j: &Interval) -> Option<Interval> {
        match *j {
            Interval::Vertex(v) => (v <= 2 * self.n).then_some(*j),
            Interval::Arrows { left, right } => {
                let (l, r) = (left.max(1), right.min(2 * self.n));
                (l <= r).then_some(Interval::Arrows { left: l, right: r })
            }
        }
    }

    /// Every arrow position of `j` is real or one of the two phantom ends.
    pub fn admits(&self, j: &Interval) -> bool {
        match *j {
            Interval::Vertex(v) => v <= 2 * self.n,
            Interval::Arrows { left, right } => left <= right && right <= 2 * self.n + 1,
        }
    }
}

/// `enumerate_intervals`: all intervals of `q` in the canonical order.
pub fn enumerate_intervals(q: &BipartiteQuiver) -> Vec<Interval> {
    q.intervals()
}

/// A connected subquiver: a single vertex or a contiguous run of arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interval {
    /// A single vertex by index (`y_k` = `2k`, `x_k` = `2k-1`).
    Vertex(usize),
    /// Arrow positions `left..=right`.
    Arrows { left: usize, right: usize },
}

impl Interval {
    pub fn vertex(label: VertexLabel) -> Interval {
        Interval::Vertex(label.index() as usize)
    }

    pub fn arrows(left: ArrowLabel, right: ArrowLabel) -> Interval {
        Interval::Arrows {
            left: left.position(),
            right: right.position(),
        }
    }

    pub fn arrow(a: ArrowLabel) -> Interval {
        Interval::arrows(a, a)
    }

    /// Number of arrow positions, phantom ones included.
    pub fn arrow_count(&self) -> usize {
        match *self {
            Interval::Vertex(_) => 0,
            Interval::Arrows { left, right } => right - left + 1,
        }
    }

    /// Inclusive vertex index range; `-1` is the phantom `x_0`.
    pub fn vertex_span(&self) -> (isize, isize) {
        match *self {
            Interval::Vertex(v) => (v as isize, v as isize),
            Interval::Arrows { left, right } => (left as isize - 1, right as isize),
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        let (lo, hi) = self.vertex_span();
        lo <= v as isize && v as isize <= hi
    }

    /// Number of arrows the two intervals share.
    pub fn shared_arrows(&self, other: &Interval) -> usize {
        match (*self, *other) {
            (Interval::Arrows { left: a, right: b }, Interval::Arrows { left: c, right: d }) => {
                let (l, r) = (a.max(c), b.min(d));
                if l <= r {
                    r - l + 1
                } else {
                    0
                }
            }
            _ => 0,
        }
    }

    /// Moves both ends one arrow to the left. `None` for single vertices and
    /// for intervals already touching the phantom `β_0`.
    pub fn shift_left(&self) -> Option<Interval> {
        match *self {
            Interval::Arrows { left, right } if left >= 1 => Some(Interval::Arrows {
                left: left - 1,
                right: right - 1,
            }),
            _ => None,
        }
    }

    /// Moves both ends one arrow to the right. `None` for single vertices.
    pub fn shift_right(&self) -> Option<Interval> {
        match *self {
            Interval::Arrows { left, right } => Some(Interval::Arrows {
                left: left + 1,
                right: right + 1,
            }),
            Interval::Vertex(_) => None,
        }
    }

    /// Common arrows of two arrow intervals, or the shared vertex when one
    /// side is a single vertex. `None` is the empty interval.
    pub fn meet(&self, other: &Interval) -> Option<Interval> {
        match (*self, *other) {
            (Interval::Arrows { left: a, right: b }, Interval::Arrows { left: c, right: d }) => {
                let (l, r) = (a.max(c), b.min(d));
                (l <= r).then_some(Interval::Arrows { left: l, right: r })
            }
            (Interval::Vertex(v), j) | (j, Interval::Vertex(v)) => {
                j.contains_vertex(v).then_some(Interval::Vertex(v))
            }
        }
    }

    /// Smallest interval containing both.
    pub fn join(&self, other: &Interval) -> Interval {
        let (a, b) = self.vertex_span();
        let (c, d) = other.vertex_span();
        let (lo, hi) = (a.min(c), b.max(d));
        if lo == hi {
            Interval::Vertex(lo as usize)
        } else {
            Interval::Arrows {
                left: (lo + 1) as usize,
                right: hi as usize,
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Interval::Vertex(v) => write!(f, "{{{}}}", VertexLabel::from_index(v as isize)),
            Interval::Arrows { left, right } if left == right => {
                write!(f, "[{}]", ArrowLabel::from_position(left))
            }
            Interval::Arrows { left, right } => write!(
                f,
                "[{},{}]",
                ArrowLabel::from_position(left),
                ArrowLabel::from_position(right)
            ),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntervalJson {
    Vertex { vertex: String },
    Arrows { left: String, right: String },
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let js = match *self {
            Interval::Vertex(v) => IntervalJson::Vertex {
                vertex: VertexLabel::from_index(v as isize).to_string(),
            },
            Interval::Arrows { left, right } => IntervalJson::Arrows {
                left: ArrowLabel::from_position(left).to_string(),
                right: ArrowLabel::from_position(right).to_string(),
            },
        };
        js.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match IntervalJson::deserialize(deserializer)? {
            IntervalJson::Vertex { vertex } => {
                let label: VertexLabel = vertex.parse().map_err(D::Error::custom)?;
                Ok(Interval::vertex(label))
            }
            IntervalJson::Arrows { left, right } => {
                let l: ArrowLabel = left.parse().map_err(D::Error::custom)?;
                let r: ArrowLabel = right.parse().map_err(D::Error::custom)?;
                if l.position() > r.position() {
                    return Err(D::Error::custom(format!("interval [{l},{r}] runs backwards")));
                }
                Ok(Interval::arrows(l, r))
            }
        }
    }
}

/// Per-vertex dimensions, ordered along the quiver (`y_0, x_1, y_1, …` for a
/// bipartite quiver, `z_0, …, z_n` for a general one).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(pub Vec<usize>);

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> DimensionVector {
        DimensionVector(dims)
    }

    pub fn zero(len: usize) -> DimensionVector {
        DimensionVector(vec![0; len])
    }

    /// Parses `"1,2,3"`.
    pub fn parse_csv(s: &str) -> Result<DimensionVector> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty dimension vector".into()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad dimension {t:?}")))
            })
            .collect::<Result<_>>()
            .map(DimensionVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dimension at a vertex index; phantom and out-of-range vertices are 0.
    pub fn at(&self, v: isize) -> usize {
        if v < 0 {
            0
        } else {
            self.0.get(v as usize).copied().unwrap_or(0)
        }
    }

    pub fn y(&self, k: usize) -> usize {
        self.at(VertexLabel::Y(k).index())
    }

    pub fn x(&self, k: usize) -> usize {
        self.at(VertexLabel::X(k).index())
    }

    /// Sum over sources `x_k` in the bipartite labeling.
    pub fn d_x(&self) -> usize {
        self.0.iter().skip(1).step_by(2).sum()
    }

    /// Sum over sinks `y_k` in the bipartite labeling.
    pub fn d_y(&self) -> usize {
        self.0.iter().step_by(2).sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn check_bipartite(&self, q: &BipartiteQuiver) -> Result<()> {
        if self.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector has {} entries, quiver with n={} has {} vertices",
                self.len(),
                q.n,
                q.vertex_count()
            )));
        }
        Ok(())
    }

    /// Every dimension vector of the given length with entries `0..=max`,
    /// in lexicographic order.
    pub fn all_bounded(len: usize, max: usize) -> Vec<DimensionVector> {
        let mut out = Vec::new();
        let mut cur = vec![0; len];
        loop {
            out.push(DimensionVector(cur.clone()));
            let mut k = len;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < max {
                    cur[k] += 1;
                    cur[k + 1..].iter_mut().for_each(|c| *c = 0);
                    break;
                }
            }
        }
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Either kind of quiver, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quiver {
    TypeA(TypeAQuiver),
    Bipartite(BipartiteQuiver),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum QuiverJson {
    #[serde(rename = "A")]
    TypeA { orientation: String },
    #[serde(rename = "bipartiteA")]
    Bipartite { n: usize },
}

impl Serialize for Quiver {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quiver::TypeA(q) => QuiverJson::TypeA { orientation: q.word() },
            Quiver::Bipartite(q) => QuiverJson::Bipartite { n: q.n },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match QuiverJson::deserialize(deserializer)? {
            QuiverJson::TypeA { orientation } => TypeAQuiver::from_word(&orientation)
                .map(Quiver::TypeA)
                .map_err(serde::de::Error::custom),
            QuiverJson::Bipartite { n } => Ok(Quiver::Bipartite(BipartiteQuiver::new(n))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArrowLabel::{Alpha, Beta};

    fn iv(l: ArrowLabel, r: ArrowLabel) -> Interval {
        Interval::arrows(l, r)
    }

    #[test]
    fn interval_enumeration_counts() {
        let q1 = BipartiteQuiver::new(1);
        let ivs = q1.intervals();
        assert_eq!(ivs.len(), 6);
        for j in [
            Interval::vertex(VertexLabel::Y(0)),
            Interval::vertex(VertexLabel::X(1)),
            Interval::vertex(VertexLabel::Y(1)),
            Interval::arrow(Alpha(1)),
            Interval::arrow(Beta(1)),
            iv(Alpha(1), Beta(1)),
        ] {
            assert!(ivs.contains(&j), "{j}");
        }
        let q2 = BipartiteQuiver::new(2);
        let ivs2 = q2.intervals();
        assert_eq!(ivs2.iter().filter(|j| j.arrow_count() == 0).count(), 5);
        assert_eq!(ivs2.iter().filter(|j| j.arrow_count() > 0).count(), 10);
        assert_eq!(BipartiteQuiver::new(0).intervals(), vec![Interval::Vertex(0)]);
    }

    #[test]
    fn enumeration_matches_naive_double_loop() {
        for n in 0..=4 {
            let q = BipartiteQuiver::new(n);
            let mut naive = Vec::new();
            for a in 1..=2 * n {
                for b in 1..=2 * n {
                    if a <= b {
                        naive.push(Interval::Arrows { left: a, right: b });
                    }
                }
            }
            let got: Vec<_> = q.intervals().into_iter().filter(|j| j.arrow_count() > 0).collect();
            let mut sorted_naive = naive.clone();
            sorted_naive.sort();
            let mut sorted_got = got.clone();
            sorted_got.sort();
            assert_eq!(sorted_got, sorted_naive, "n={n}");
            assert_eq!(q.interval_count(), q.intervals().len());
            for (k, j) in q.intervals().iter().enumerate() {
                assert_eq!(q.interval_index(j), Some(k));
            }
        }
    }

    #[test]
    fn shifts() {
        assert_eq!(iv(Alpha(2), Beta(2)).shift_left(), Some(iv(Beta(1), Alpha(2))));
        assert_eq!(iv(Alpha(1), Beta(1)).shift_left(), Some(iv(Beta(0), Alpha(1))));
        assert_eq!(Interval::arrow(Alpha(1)).shift_right(), Some(Interval::arrow(Beta(1))));
        assert_eq!(Interval::arrow(Beta(0)).shift_left(), None);
        assert_eq!(Interval::Vertex(0).shift_left(), None);
    }

    #[test]
    fn meet_and_join() {
        let left = iv(Beta(0), Alpha(1));
        let right = Interval::arrow(Beta(1));
        assert_eq!(left.meet(&right), None);
        assert_eq!(left.join(&right), iv(Beta(0), Beta(1)));
        assert_eq!(iv(Alpha(1), Beta(1)).meet(&right), Some(right));
        assert_eq!(
            Interval::vertex(VertexLabel::X(1)).meet(&iv(Alpha(1), Beta(1))),
            Some(Interval::vertex(VertexLabel::X(1)))
        );
        assert_eq!(Interval::Vertex(2).join(&Interval::Vertex(2)), Interval::Vertex(2));
    }

    #[test]
    fn arrow_counts() {
        assert_eq!(Interval::Vertex(0).arrow_count(), 0);
        assert_eq!(iv(Alpha(1), Beta(1)).arrow_count(), 2);
        assert_eq!(iv(Beta(0), Beta(1)).arrow_count(), 3);
    }

    #[test]
    fn shift_meet_join_properties() {
        for n in 1..=4 {
            let q = BipartiteQuiver::new(n);
            for j in q.intervals().into_iter().filter(|j| j.arrow_count() > 0) {
                let l = j.shift_left().unwrap();
                let r = j.shift_right().unwrap();
                assert_eq!(l.shift_right(), Some(j));
                assert!(q.admits(&l) && q.admits(&r));
                let join = l.join(&r);
                assert_eq!(join.arrow_count(), j.arrow_count() + 2);
                if let Some(meet) = l.meet(&r) {
                    assert_eq!(join.arrow_count() - meet.arrow_count(), 4, "{j}");
                } else {
                    assert!(j.arrow_count() <= 2);
                }
            }
        }
    }

    #[test]
    fn trimming_drops_phantoms() {
        let q = BipartiteQuiver::new(1);
        assert_eq!(q.trim(&iv(Beta(0), Beta(1))), Some(iv(Alpha(1), Beta(1))));
        assert_eq!(q.trim(&Interval::arrow(Beta(0))), None);
        assert_eq!(q.trim(&Interval::arrow(Alpha(2))), None);
    }

    #[test]
    fn labels_and_json() {
        assert_eq!(VertexLabel::from_index(3), VertexLabel::X(2));
        assert_eq!(VertexLabel::X(2).index(), 3);
        assert_eq!(ArrowLabel::from_position(5), Alpha(3));
        let j = iv(Alpha(1), Beta(3));
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"left":"a1","right":"b3"}"#);
        assert_eq!(serde_json::from_str::<Interval>(&s).unwrap(), j);
        let v: Interval = serde_json::from_str(r#"{"vertex":"y0"}"#).unwrap();
        assert_eq!(v, Interval::Vertex(0));
        assert!(serde_json::from_str::<Interval>(r#"{"left":"b3","right":"a1"}"#).is_err());
        assert_eq!(j.to_string(), "[a1,b3]");
    }

    #[test]
    fn quiver_json_and_words() {
        let q: Quiver = serde_json::from_str(r#"{"type":"A","orientation":"RRLL"}"#).unwrap();
        let Quiver::TypeA(t) = &q else { panic!() };
        assert_eq!(t.vertex_count(), 5);
        assert_eq!(t.arrow_ends(3), (3, 2));
        assert!(!t.is_bipartite());
        assert!(TypeAQuiver::from_word("RLR").unwrap().is_bipartite());
        assert!(TypeAQuiver::from_word("RX").is_err());
        let b: Quiver = serde_json::from_str(r#"{"type":"bipartiteA","n":3}"#).unwrap();
        assert_eq!(b, Quiver::Bipartite(BipartiteQuiver::new(3)));
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"type":"A","orientation":"RRLL"}"#);
    }

    #[test]
    fn dimension_vectors() {
        let d = DimensionVector::parse_csv("1,2,3,2,3,2,1").unwrap();
        assert_eq!(d.d_x(), 6);
        assert_eq!(d.d_y(), 8);
        assert_eq!(d.at(-1), 0);
        assert_eq!(d.at(7), 0);
        assert_eq!(d.x(3), 2);
        assert_eq!(DimensionVector::all_bounded(3, 2).len(), 27);
        assert!(DimensionVector::parse_csv("1,,2").is_err());
    }
}
