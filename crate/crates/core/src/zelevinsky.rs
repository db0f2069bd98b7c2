//! The Zelevinsky map `ζ(V) = [[M_Q(V), 1], [1, 0]]`, block rank matrices
//! and their translation to and from quiver rank arrays.
//!
//! Block rows are numbered `1..=2n+1` and stand for `y_0, …, y_n, x_n, …, x_1`;
//! block columns stand for `x_n, …, x_1, y_0, …, y_n`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{assemble_blocks, ExactMatrix};
use crate::quiver::{BipartiteQuiver, DimensionVector, Interval, VertexLabel};
use crate::rep::{validate_rank_array, RankArray, Representation};

/// Block structure of `ζ(V)` for a given dimension vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    n: usize,
    dims: DimensionVector,
}

impl BlockLayout {
    pub fn new(q: BipartiteQuiver, dims: &DimensionVector) -> Result<BlockLayout> {
        dims.check_bipartite(&q)?;
        Ok(BlockLayout { n: q.n, dims: dims.clone() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    /// Number of block rows (and columns), `2n + 1`.
    pub fn blocks(&self) -> usize {
        2 * self.n + 1
    }

    /// Vertex of block row `i` (1-based).
    pub fn row_label(&self, i: usize) -> VertexLabel {
        if i <= self.n + 1 {
            VertexLabel::Y(i - 1)
        } else {
            VertexLabel::X(2 * self.n + 2 - i)
        }
    }

    /// Vertex of block column `j` (1-based).
    pub fn col_label(&self, j: usize) -> VertexLabel {
        if j <= self.n {
            VertexLabel::X(self.n + 1 - j)
        } else {
            VertexLabel::Y(j - self.n - 1)
        }
    }

    pub fn row_of(&self, v: VertexLabel) -> usize {
        match v {
            VertexLabel::Y(k) => k + 1,
            VertexLabel::X(k) => 2 * self.n + 2 - k,
        }
    }

    pub fn col_of(&self, v: VertexLabel) -> usize {
        match v {
            VertexLabel::X(k) => self.n + 1 - k,
            VertexLabel::Y(k) => k + self.n + 1,
        }
    }

    fn size(&self, v: VertexLabel) -> usize {
        self.dims.at(v.index())
    }

    pub fn row_sizes(&self) -> Vec<usize> {
        (1..=self.blocks()).map(|i| self.size(self.row_label(i))).collect()
    }

    pub fn col_sizes(&self) -> Vec<usize> {
        (1..=self.blocks()).map(|j| self.size(self.col_label(j))).collect()
    }

    /// Scalar rows covered by block rows `1..=i`.
    pub fn rows_through(&self, i: usize) -> usize {
        self.row_sizes()[..i].iter().sum()
    }

    /// Scalar columns covered by block columns `1..=j`.
    pub fn cols_through(&self, j: usize) -> usize {
        self.col_sizes()[..j].iter().sum()
    }

    /// `d = d_x + d_y`.
    pub fn total(&self) -> usize {
        self.dims.total()
    }

    /// 1-based scalar rows of the block row of `v`.
    pub fn scalar_rows(&self, v: VertexLabel) -> Vec<usize> {
        let i = self.row_of(v);
        let start = self.rows_through(i - 1);
        (start + 1..=start + self.size(v)).collect()
    }

    /// 1-based scalar columns of the block column of `v`.
    pub fn scalar_cols(&self, v: VertexLabel) -> Vec<usize> {
        let j = self.col_of(v);
        let start = self.cols_through(j - 1);
        (start + 1..=start + self.size(v)).collect()
    }
}

/// A point of the opposite cell: `[[*, 1_{d_y}], [1_{d_x}, 0]]` in the block
/// layout above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZelevinskyCellMatrix {
    layout: BlockLayout,
    matrix: ExactMatrix,
}

impl ZelevinskyCellMatrix {
    /// Checks the identity and zero quadrants.
    pub fn new(layout: BlockLayout, matrix: ExactMatrix) -> Result<ZelevinskyCellMatrix> {
        let (dx, dy) = (layout.dims.d_x(), layout.dims.d_y());
        let d = dx + dy;
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("cell matrix must be {d}x{d}")));
        }
        let ne = matrix.select(&(0..dy).collect::<Vec<_>>(), &(dx..d).collect::<Vec<_>>());
        let sw = matrix.select(&(dy..d).collect::<Vec<_>>(), &(0..dx).collect::<Vec<_>>());
        let se = matrix.select(&(dy..d).collect::<Vec<_>>(), &(dx..d).collect::<Vec<_>>());
        if !ne.is_identity() || !sw.is_identity() || !se.is_zero() {
            return Err(Error::InvariantViolation("matrix is not of the form [[*, 1], [1, 0]]".into()));
        }
        Ok(ZelevinskyCellMatrix { layout, matrix })
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    /// The free `d_y × d_x` block.
    pub fn free_block(&self) -> ExactMatrix {
        self.matrix.top_left(self.layout.dims.d_y(), self.layout.dims.d_x())
    }

    /// Block (i, j), both 1-based.
    pub fn block(&self, i: usize, j: usize) -> ExactMatrix {
        let r0 = self.layout.rows_through(i - 1);
        let c0 = self.layout.cols_through(j - 1);
        let rows: Vec<usize> = (r0..r0 + self.layout.row_sizes()[i - 1]).collect();
        let cols: Vec<usize> = (c0..c0 + self.layout.col_sizes()[j - 1]).collect();
        self.matrix.select(&rows, &cols)
    }

    /// Block grid with identity blocks as `1_k`, zero blocks as `0`, empty
    /// blocks as `.`, and arrow blocks by name, followed by the entries.
    pub fn to_block_text(&self) -> String {
        let l = &self.layout;
        let k = l.blocks();
        let mut grid = vec![vec![String::new(); k]; k];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let (rv, cv) = (l.row_label(i + 1), l.col_label(j + 1));
                let b = self.block(i + 1, j + 1);
                *cell = if b.rows() == 0 || b.cols() == 0 {
                    ".".into()
                } else if rv == cv && b.is_identity() {
                    format!("1_{}", b.rows())
                } else if let (VertexLabel::Y(y), VertexLabel::X(x)) = (rv, cv) {
                    if x == y + 1 {
                        format!("A{x}")
                    } else if x == y {
                        format!("B{x}")
                    } else {
                        "0".into()
                    }
                } else {
                    "0".into()
                };
            }
        }
        let width = grid.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        out.push_str(&format!("{:>6} ", ""));
        for j in 1..=k {
            out.push_str(&format!("{:>w$} ", l.col_label(j).to_string(), w = width));
        }
        out.push('\n');
        for (i, row) in grid.iter().enumerate() {
            out.push_str(&format!("{:>6} ", l.row_label(i + 1).to_string()));
            for cell in row {
                out.push_str(&format!("{cell:>width$} "));
            }
            out.push('\n');
        }
        out.push('\n');
        out.push_str(&self.matrix.to_string());
        out
    }
}

/// `ζ(V)`.
pub fn zelevinsky_map(v: &Representation) -> ZelevinskyCellMatrix {
    let q = v.quiver();
    let layout = BlockLayout::new(q, v.dims()).expect("representation dims match its quiver");
    let field = v.field();
    let k = layout.blocks();
    let identities: Vec<ExactMatrix> = (0..q.vertex_count())
        .map(|z| ExactMatrix::identity(field, v.dims().0[z]))
        .collect();
    let grid: Vec<Vec<Option<&ExactMatrix>>> = (1..=k)
        .map(|i| {
            (1..=k)
                .map(|j| {
                    let (rv, cv) = (layout.row_label(i), layout.col_label(j));
                    match (rv, cv) {
                        (VertexLabel::Y(y), VertexLabel::X(x)) if x == y + 1 || x == y => {
                            Some(v.map_at(if x == y { 2 * x } else { 2 * x - 1 }))
                        }
                        (VertexLabel::Y(a), VertexLabel::Y(b)) if a == b => Some(&identities[rv.index() as usize]),
                        (VertexLabel::X(a), VertexLabel::X(b)) if a == b => Some(&identities[rv.index() as usize]),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    let matrix = assemble_blocks(field, &layout.row_sizes(), &layout.col_sizes(), &grid)
        .expect("block sizes follow the layout");
    ZelevinskyCellMatrix { layout, matrix }
}

/// `b(r)`: ranks of the northwest block submatrices, `(2n+1) × (2n+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockRankMatrix {
    n: usize,
    entries: Vec<Vec<usize>>,
}

impl BlockRankMatrix {
    pub fn new(n: usize, entries: Vec<Vec<usize>>) -> Result<BlockRankMatrix> {
        let k = 2 * n + 1;
        if entries.len() != k || entries.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidBlockRanks(format!("expected a {k}x{k} grid")));
        }
        Ok(BlockRankMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    /// `b_{i,j}`, 1-based; zero when either index is out of range.
    pub fn get(&self, i: usize, j: usize) -> usize {
        let k = 2 * self.n + 1;
        if i == 0 || j == 0 || i > k || j > k {
            0
        } else {
            self.entries[i - 1][j - 1]
        }
    }

    /// Number of 1s the Zelevinsky permutation puts in block `(i, j)`.
    pub fn block_count(&self, i: usize, j: usize) -> i64 {
        self.get(i, j) as i64 + self.get(i - 1, j - 1) as i64 - self.get(i, j - 1) as i64 - self.get(i - 1, j) as i64
    }

    /// Weakly increasing along rows and columns with nonnegative second
    /// differences.
    pub fn is_monotone(&self) -> bool {
        let k = 2 * self.n + 1;
        (1..=k).all(|i| {
            (1..=k).all(|j| {
                self.get(i, j) >= self.get(i - 1, j) && self.get(i, j) >= self.get(i, j - 1) && self.block_count(i, j) >= 0
            })
        })
    }
}

impl fmt::Display for BlockRankMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BlockRankJson {
    n: usize,
    entries: Vec<Vec<usize>>,
}

impl Serialize for BlockRankMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BlockRankJson {
            n: self.n,
            entries: self.entries.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockRankMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let js = BlockRankJson::deserialize(deserializer)?;
        BlockRankMatrix::new(js.n, js.entries).map_err(serde::de::Error::custom)
    }
}

/// Ranks of every northwest block submatrix, one elimination per block row.
pub fn block_rank_numeric(z: &ZelevinskyCellMatrix) -> BlockRankMatrix {
    let l = &z.layout;
    let k = l.blocks();
    let d = z.matrix.cols();
    let col_ends: Vec<usize> = (1..=k).map(|j| l.cols_through(j)).collect();
    let entries = (1..=k)
        .map(|i| {
            let pivots = z.matrix.top_left(l.rows_through(i), d).pivot_columns();
            col_ends
                .iter()
                .map(|&c| pivots.iter().filter(|&&p| p < c).count())
                .collect()
        })
        .collect();
    BlockRankMatrix { n: l.n, entries }
}

/// Closed form of block `(i, j)`: `b_{i,j} = offset + r_J` for the returned
/// interval, or exactly `offset` when no interval is involved.
fn block_formula(n: usize, d: &DimensionVector, i: usize, j: usize) -> (usize, Option<Interval>) {
    let top = 2 * n;
    let hat = |l: usize, r: usize| (l <= r && l <= top).then(|| Interval::Arrows { left: l, right: r.min(top) });
    let sum_x = |from: usize| (from.max(1)..=n).map(|m| d.x(m)).sum::<usize>();
    let sum_y = |to: usize| (0..=to).map(|k| d.y(k)).sum::<usize>();
    let row_is_y = i <= n + 1;
    let col_is_x = j <= n;
    match (row_is_y, col_is_x) {
        (true, true) => {
            let (a, e) = (i - 1, n + 1 - j);
            (0, hat(2 * e - 1, 2 * a + 1))
        }
        (true, false) => {
            let (a, f) = (i - 1, j - n - 1);
            (sum_y(a.min(f)), hat(2 * f + 2, 2 * a + 1))
        }
        (false, true) => {
            let (c, e) = (2 * n + 2 - i, n + 1 - j);
            (sum_x(c.max(e)), hat(2 * e - 1, 2 * c - 2))
        }
        (false, false) => {
            let (c, f) = (2 * n + 2 - i, j - n - 1);
            (sum_x(c) + sum_y(f), hat(2 * f + 2, 2 * c - 2))
        }
    }
}

/// `b(r)` straight from the rank array, no matrices involved.
pub fn block_rank_symbolic(r: &RankArray, d: &DimensionVector) -> Result<BlockRankMatrix> {
    let q = r.quiver();
    d.check_bipartite(&q)?;
    let n = q.n;
    let k = 2 * n + 1;
    let entries = (1..=k)
        .map(|i| {
            (1..=k)
                .map(|j| {
                    let (offset, j_int) = block_formula(n, d, i, j);
                    offset + j_int.map_or(0, |t| r.get(&t))
                })
                .collect()
        })
        .collect();
    Ok(BlockRankMatrix { n, entries })
}

/// Inverts [`block_rank_symbolic`]. Fails if a forced entry is off or the
/// recovered array is not a rank array.
pub fn recover_rank_array(b: &BlockRankMatrix, d: &DimensionVector) -> Result<RankArray> {
    let q = BipartiteQuiver::new(b.n);
    d.check_bipartite(&q)?;
    let k = 2 * b.n + 1;
    let mut found: Vec<Option<usize>> = vec![None; q.interval_count()];
    for i in 1..=k {
        for j in 1..=k {
            let (offset, j_int) = block_formula(b.n, d, i, j);
            let v = b.get(i, j);
            match j_int {
                None if v != offset => {
                    return Err(Error::NotInImage(format!("block ({i},{j}) must be {offset}, found {v}")));
                }
                None => {}
                Some(t) => {
                    let r = v.checked_sub(offset).ok_or_else(|| {
                        Error::NotInImage(format!("block ({i},{j}) is {v}, below its floor {offset}"))
                    })?;
                    let idx = q.interval_index(&t).expect("formula yields real intervals");
                    match found[idx] {
                        Some(prev) if prev != r => {
                            return Err(Error::NotInImage(format!("conflicting ranks for {t}")));
                        }
                        _ => found[idx] = Some(r),
                    }
                }
            }
        }
    }
    let mut r = RankArray::zero(q);
    for (idx, t) in q.intervals().iter().enumerate() {
        if t.arrow_count() > 0 {
            let v = found[idx].ok_or_else(|| Error::NotInImage(format!("no block determines {t}")))?;
            r.set(t, v)?;
        }
    }
    if !validate_rank_array(&r, d) {
        return Err(Error::InvalidRankArray("recovered ranks are not a quiver rank array".into()));
    }
    Ok(r)
}

/// Minors of a given size inside a region of `ζ`, indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorSpec {
    pub region: Region,
    pub size: usize,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Generators of the two ideals as index sets: minors of size `1 + r_J` of
/// each `M_J`, and minors of size `1 + b_{i,j}` of each northwest block.
pub fn defining_minor_specs(r: &RankArray, d: &DimensionVector) -> Result<Vec<MinorSpec>> {
    let q = r.quiver();
    let layout = BlockLayout::new(q, d)?;
    let mut out = Vec::new();
    for (j, rank) in r.iter().filter(|(j, _)| j.arrow_count() > 0) {
        let (lo, hi) = j.vertex_span();
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for z in lo.max(0)..=hi {
            match VertexLabel::from_index(z) {
                v @ VertexLabel::Y(_) => rows.extend(layout.scalar_rows(v)),
                v @ VertexLabel::X(_) => cols.extend(layout.scalar_cols(v)),
            }
        }
        rows.sort_unstable();
        cols.sort_unstable();
        out.push(MinorSpec {
            region: Region { rows, cols },
            size: rank + 1,
            source: format!("interval {j}"),
        });
    }
    let b = block_rank_symbolic(r, d)?;
    for i in 1..=layout.blocks() {
        for j in 1..=layout.blocks() {
            out.push(MinorSpec {
                region: Region {
                    rows: (1..=layout.rows_through(i)).collect(),
                    cols: (1..=layout.cols_through(j)).collect(),
                },
                size: b.get(i, j) + 1,
                source: format!("block ({i},{j})"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::rep::{rank_array, Representation};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn n1(a: i64, b: i64) -> Representation {
        let maps = vec![
            ExactMatrix::from_i64_rows(Q, &[vec![a]]).unwrap(),
            ExactMatrix::from_i64_rows(Q, &[vec![b]]).unwrap(),
        ];
        Representation::new(BipartiteQuiver::new(1), DimensionVector(vec![1, 1, 1]), Q, maps).unwrap()
    }

    #[test]
    fn layout_labels_round_trip() {
        let q = BipartiteQuiver::new(3);
        let l = BlockLayout::new(q, &DimensionVector(vec![1, 2, 3, 2, 3, 2, 1])).unwrap();
        assert_eq!(l.row_label(1), VertexLabel::Y(0));
        assert_eq!(l.row_label(5), VertexLabel::X(3));
        assert_eq!(l.col_label(1), VertexLabel::X(3));
        assert_eq!(l.col_label(4), VertexLabel::Y(0));
        for i in 1..=7 {
            assert_eq!(l.row_of(l.row_label(i)), i);
            assert_eq!(l.col_of(l.col_label(i)), i);
        }
        assert_eq!(l.row_sizes(), vec![1, 3, 3, 1, 2, 2, 2]);
        assert_eq!(l.col_sizes(), vec![2, 2, 2, 1, 3, 3, 1]);
        assert_eq!(l.rows_through(7), 14);
    }

    #[test]
    fn map_examples() {
        let z = zelevinsky_map(&n1(0, 0));
        assert_eq!(*z.matrix(), ExactMatrix::from_i64_rows(Q, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap());
        let z = zelevinsky_map(&n1(1, 1));
        assert_eq!(*z.matrix(), ExactMatrix::from_i64_rows(Q, &[vec![1, 1, 0], vec![1, 0, 1], vec![1, 0, 0]]).unwrap());
        assert!(ZelevinskyCellMatrix::new(z.layout().clone(), z.matrix().clone()).is_ok());
        assert!(ZelevinskyCellMatrix::new(z.layout().clone(), ExactMatrix::identity(Q, 3)).is_err());
    }

    #[test]
    fn numeric_examples() {
        let b = block_rank_numeric(&zelevinsky_map(&n1(0, 0)));
        assert_eq!(b.entries(), &[vec![0, 1, 1], vec![0, 1, 2], vec![1, 2, 3]]);
        let b = block_rank_numeric(&zelevinsky_map(&n1(1, 1)));
        assert_eq!(b.entries(), &[vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn symbolic_examples() {
        let d = DimensionVector(vec![1, 1, 1]);
        let b = block_rank_symbolic(&rank_array(&n1(1, 1)), &d).unwrap();
        assert_eq!(b.entries(), &[vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 3]]);
        let zero = RankArray::zero(BipartiteQuiver::new(1));
        let b0 = block_rank_symbolic(&zero, &d).unwrap();
        assert_eq!(b0, block_rank_numeric(&zelevinsky_map(&n1(0, 0))));
        assert_eq!(recover_rank_array(&b0, &d).unwrap(), zero);
    }

    #[test]
    fn every_arrow_interval_has_one_block() {
        for n in 0..=4 {
            let q = BipartiteQuiver::new(n);
            let d = DimensionVector(vec![1; q.vertex_count()]);
            let mut hits = vec![0; q.interval_count()];
            for i in 1..=2 * n + 1 {
                for j in 1..=2 * n + 1 {
                    if let (_, Some(t)) = block_formula(n, &d, i, j) {
                        hits[q.interval_index(&t).unwrap()] += 1;
                    }
                }
            }
            for (t, h) in q.intervals().iter().zip(hits) {
                assert_eq!(h, usize::from(t.arrow_count() > 0), "{t}");
            }
        }
    }

    #[test]
    fn recover_rejects_forced_violations() {
        let d = DimensionVector(vec![1, 1, 1]);
        let good = BlockRankMatrix::new(1, vec![vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 3]]).unwrap();
        assert!(recover_rank_array(&good, &d).is_ok());
        let mut bad = good.entries().to_vec();
        bad[2][2] = 2;
        let bad = BlockRankMatrix::new(1, bad).unwrap();
        assert!(matches!(recover_rank_array(&bad, &d), Err(Error::NotInImage(_))));
        assert!(BlockRankMatrix::new(1, vec![vec![0; 2]; 2]).is_err());
    }

    #[test]
    fn minor_specs() {
        let d = DimensionVector(vec![1, 1, 1]);
        let r = rank_array(&n1(1, 0));
        let specs = defining_minor_specs(&r, &d).unwrap();
        let b1 = specs.iter().find(|s| s.source == "interval [b1]").unwrap();
        assert_eq!(b1.size, 1);
        assert_eq!(b1.region, Region { rows: vec![2], cols: vec![1] });
        assert_eq!(specs.len(), 3 + 9);
        let zero = RankArray::zero(BipartiteQuiver::new(1));
        let specs0 = defining_minor_specs(&zero, &d).unwrap();
        assert!(specs0.iter().filter(|s| s.source.starts_with("interval")).all(|s| s.size == 1));
        let json = serde_json::to_string(&specs0).unwrap();
        assert_eq!(serde_json::from_str::<Vec<MinorSpec>>(&json).unwrap(), specs0);
    }

    #[test]
    fn block_text_names_arrows() {
        let t = zelevinsky_map(&n1(1, 1)).to_block_text();
        assert!(t.contains("A1") && t.contains("B1") && t.contains("1_1"), "{t}");
    }

    proptest! {
        #[test]
        fn routes_agree_and_round_trip(n in 0usize..=3, seed in any::<u64>()) {
            let q = BipartiteQuiver::new(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = DimensionVector((0..q.vertex_count()).map(|_| rand::Rng::random_range(&mut rng, 0..=3)).collect());
            let v = Representation::random(q, d.clone(), Field::Prime(2), &mut rng).unwrap();
            let z = zelevinsky_map(&v);
            let numeric = block_rank_numeric(&z);
            let r = rank_array(&v);
            let symbolic = block_rank_symbolic(&r, &d).unwrap();
            prop_assert_eq!(&numeric, &symbolic);
            prop_assert!(numeric.is_monotone());
            prop_assert_eq!(recover_rank_array(&numeric, &d).unwrap(), r);
            let json = serde_json::to_string(&numeric).unwrap();
            prop_assert_eq!(serde_json::from_str::<BlockRankMatrix>(&json).unwrap(), numeric);
        }

        #[test]
        fn cell_points_meet_cell_conditions(n in 0usize..=3, seed in any::<u64>()) {
            // Put an arbitrary * block in the cell; the blocks with no interval
            // attached outside the northwest quadrant are still forced.
            let q = BipartiteQuiver::new(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = DimensionVector((0..q.vertex_count()).map(|_| rand::Rng::random_range(&mut rng, 0..=2)).collect());
            let layout = BlockLayout::new(q, &d).unwrap();
            let (dx, dy) = (d.d_x(), d.d_y());
            let field = Field::Prime(3);
            let star = ExactMatrix::random(field, dy, dx, &mut rng);
            let id_y = ExactMatrix::identity(field, dy);
            let id_x = ExactMatrix::identity(field, dx);
            let m = assemble_blocks(field, &[dy, dx], &[dx, dy], &[vec![Some(&star), Some(&id_y)], vec![Some(&id_x), None]]).unwrap();
            let z = ZelevinskyCellMatrix::new(layout, m).unwrap();
            let b = block_rank_numeric(&z);
            for i in 1..=2 * n + 1 {
                for j in 1..=2 * n + 1 {
                    let (offset, t) = block_formula(n, &d, i, j);
                    let northwest = i <= n + 1 && j <= n;
                    let southeast = i > n + 1 && j > n;
                    if t.is_none() && !northwest && !southeast {
                        prop_assert_eq!(b.get(i, j), offset, "block ({}, {})", i, j);
                    }
                }
            }
        }
    }
}
