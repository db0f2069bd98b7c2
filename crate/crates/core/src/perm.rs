//! Permutations in one-line notation: Zelevinsky permutations, lengths,
//! Fulton diagrams, essential sets and Bruhat order.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quiver::DimensionVector;
use crate::zelevinsky::{BlockLayout, BlockRankMatrix};

/// A permutation of `{1..d}`; `v(i)` is the column of the 1 in row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

/// A `(row, column)` position, 1-based.
pub type Box2 = (usize, usize);

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Permutation> {
        let d = one_line.len();
        let mut seen = vec![false; d + 1];
        for &v in &one_line {
            if v == 0 || v > d || seen[v] {
                return Err(Error::InvalidPermutation(format!("{one_line:?} is not a permutation of 1..{d}")));
            }
            seen[v] = true;
        }
        Ok(Permutation(one_line))
    }

    pub fn identity(d: usize) -> Permutation {
        Permutation((1..=d).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    /// `v(i)`, 1-based.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect())
    }

    /// Swaps the values in positions `a` and `b` (1-based).
    pub fn swap_positions(&self, a: usize, b: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(a - 1, b - 1);
        Permutation(v)
    }

    pub fn inversion_length(&self) -> usize {
        inversion_length(self)
    }

    /// Permutation matrix rows, `1` at `(i, v(i))`.
    pub fn to_matrix_text(&self) -> String {
        let d = self.len();
        let mut out = String::new();
        for &v in &self.0 {
            let row: Vec<&str> = (1..=d).map(|j| if j == v { "1" } else { "." }).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Permutation::new(Vec::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// Block row heights and block column widths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl BlockSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<BlockSpec> {
        if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
            return Err(Error::DimensionMismatch("block rows and columns cover different sizes".into()));
        }
        Ok(BlockSpec { rows, cols })
    }

    pub fn from_layout(layout: &BlockLayout) -> BlockSpec {
        BlockSpec {
            rows: layout.row_sizes(),
            cols: layout.col_sizes(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Block index (0-based) of each scalar row.
    fn row_blocks(&self) -> Vec<usize> {
        expand(&self.rows)
    }

    fn col_blocks(&self) -> Vec<usize> {
        expand(&self.cols)
    }

    /// Whether `(i, j)` is the southeast corner of its block.
    pub fn is_southeast_corner(&self, (i, j): Box2) -> bool {
        is_block_end(&self.rows, i) && is_block_end(&self.cols, j)
    }
}

fn expand(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect()
}

fn is_block_end(sizes: &[usize], k: usize) -> bool {
    let mut acc = 0;
    for &s in sizes {
        acc += s;
        if acc == k && s > 0 {
            return true;
        }
    }
    false
}

/// The unique permutation with `b_{i,j} + b_{i-1,j-1} - b_{i,j-1} - b_{i-1,j}`
/// ones in block `(i, j)`, running northwest to southeast along every block
/// row and block column.
pub fn zelevinsky_permutation(b: &BlockRankMatrix, blocks: &BlockSpec) -> Result<Permutation> {
    let k = 2 * b.n() + 1;
    if blocks.rows.len() != k || blocks.cols.len() != k {
        return Err(Error::DimensionMismatch(format!("block spec does not have {k} block rows and columns")));
    }
    let row_start: Vec<usize> = prefix_sums(&blocks.rows);
    let col_start: Vec<usize> = prefix_sums(&blocks.cols);
    let mut next_row = vec![0usize; k];
    let mut next_col = vec![0usize; k];
    let mut one_line = vec![0usize; blocks.size()];
    for i in 1..=k {
        for j in 1..=k {
            let c = b.block_count(i, j);
            if c < 0 {
                return Err(Error::InvalidBlockRanks(format!("block ({i},{j}) would hold {c} ones")));
            }
            let c = c as usize;
            if next_row[i - 1] + c > blocks.rows[i - 1] || next_col[j - 1] + c > blocks.cols[j - 1] {
                return Err(Error::InvalidBlockRanks(format!("block ({i},{j}) cannot hold {c} more ones")));
            }
            for _ in 0..c {
                let row = row_start[i - 1] + next_row[i - 1];
                let col = col_start[j - 1] + next_col[j - 1];
                one_line[row] = col + 1;
                next_row[i - 1] += 1;
                next_col[j - 1] += 1;
            }
        }
    }
    if next_row != blocks.rows {
        return Err(Error::InvalidBlockRanks("block counts do not fill every row".into()));
    }
    Permutation::new(one_line)
}

fn prefix_sums(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .iter()
        .map(|&s| {
            let start = acc;
            acc += s;
            start
        })
        .collect()
}

/// `#{i < j : v(i) > v(j)}`.
pub fn inversion_length(p: &Permutation) -> usize {
    let v = &p.0;
    (0..v.len())
        .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
        .sum()
}

/// Length of the Zelevinsky permutation read off the block ranks: each 1 in
/// block `(i, j)` is inverted with every 1 strictly north and east of its
/// block.
pub fn length_from_blocks(b: &BlockRankMatrix) -> usize {
    let big = 2 * b.n() + 1;
    let mut total: i64 = 0;
    for i in 2..=big {
        for j in 1..big {
            let above_right = b.get(i - 1, big) as i64 - b.get(i - 1, j) as i64;
            total += above_right * b.block_count(i, j);
        }
    }
    total as usize
}

/// Fulton diagram: `(i, j)` with `v(i) > j` and `v^{-1}(j) > i`.
pub fn diagram(p: &Permutation) -> Vec<Box2> {
    let inv = p.inverse();
    let d = p.len();
    let mut out = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            if p.at(i) > j && inv.at(j) > i {
                out.push((i, j));
            }
        }
    }
    out
}

/// Boxes of the diagram with neither `(i+1, j)` nor `(i, j+1)` in it.
pub fn essential_set(p: &Permutation) -> Vec<Box2> {
    let dia = diagram(p);
    let d = p.len();
    let mut grid = vec![false; (d + 2) * (d + 2)];
    for &(i, j) in &dia {
        grid[i * (d + 2) + j] = true;
    }
    dia.into_iter()
        .filter(|&(i, j)| !grid[(i + 1) * (d + 2) + j] && !grid[i * (d + 2) + j + 1])
        .collect()
}

/// `r_v(p, q) = #{k ≤ p : v(k) ≤ q}` for all `0 ≤ p, q ≤ d`.
fn rank_table(p: &Permutation) -> Vec<Vec<usize>> {
    let d = p.len();
    let mut t = vec![vec![0; d + 1]; d + 1];
    for i in 1..=d {
        for q in 1..=d {
            t[i][q] = t[i - 1][q] + usize::from(p.at(i) <= q);
        }
    }
    t
}

/// `u ≤ v` in Bruhat order, by comparing rank tables.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "comparing permutations of sizes {} and {}",
            u.len(),
            v.len()
        )));
    }
    let (tu, tv) = (rank_table(u), rank_table(v));
    Ok(tu.iter().zip(&tv).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x >= y)))
}

/// `w = [[0, 1_{d_y}], [1_{d_x}, 0]]`.
pub fn w_of(d: &DimensionVector) -> Permutation {
    let (dx, dy) = (d.d_x(), d.d_y());
    Permutation((dx + 1..=dx + dy).chain(1..=dx).collect())
}

/// Whether the 1s run northwest to southeast inside every block row and
/// every block column.
pub fn is_block_minimal(p: &Permutation, blocks: &BlockSpec) -> bool {
    if blocks.size() != p.len() {
        return false;
    }
    let rb = blocks.row_blocks();
    let cb = blocks.col_blocks();
    let inv = p.inverse();
    let increasing = |blk: &[usize], f: &dyn Fn(usize) -> usize| {
        (1..p.len()).all(|k| blk[k - 1] != blk[k] || f(k) < f(k + 1))
    };
    increasing(&rb, &|i| p.at(i)) && increasing(&cb, &|j| inv.at(j))
}

/// All permutations of `1..=d` in lexicographic order.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=d).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot has a successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
