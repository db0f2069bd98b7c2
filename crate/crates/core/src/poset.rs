//! Orbits of `rep_Q(d)` for a bipartite quiver, ordered by degeneration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, DEFAULT_PRIME};
use crate::perm::{bruhat_leq, inversion_length, length_from_blocks, zelevinsky_permutation, BlockSpec, Permutation};
use crate::quiver::{BipartiteQuiver, DimensionVector, Interval};
use crate::rep::{lace_to_rank, rank_array, LaceArray, RankArray, Representation};
use crate::zelevinsky::{block_rank_symbolic, BlockLayout, BlockRankMatrix};

/// Default ceiling on the estimated number of lace arrays.
pub const DEFAULT_ORBIT_GUARD: u128 = 1 << 24;

/// One orbit, described by its rank array and everything derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitNode {
    pub rank_array: RankArray,
    pub lace: LaceArray,
    pub block_ranks: BlockRankMatrix,
    pub permutation: Permutation,
    pub length: usize,
    pub dimension: usize,
}

impl OrbitNode {
    pub fn from_lace(lace: LaceArray) -> Result<OrbitNode> {
        let d = lace.dims();
        let q = lace.quiver();
        let rank_array = lace_to_rank(&lace);
        let block_ranks = block_rank_symbolic(&rank_array, &d)?;
        let spec = BlockSpec::from_layout(&BlockLayout::new(q, &d)?);
        let permutation = zelevinsky_permutation(&block_ranks, &spec)?;
        let length = inversion_length(&permutation);
        let full = d.d_x() * d.d_y();
        let dimension = full
            .checked_sub(length)
            .ok_or_else(|| Error::InvariantViolation(format!("length {length} exceeds d_x d_y = {full}")))?;
        Ok(OrbitNode {
            rank_array,
            lace,
            block_ranks,
            permutation,
            length,
            dimension,
        })
    }

    pub fn dims(&self) -> DimensionVector {
        self.lace.dims()
    }
}

/// Orbit closure dimension `d_x d_y - l(v(r))`, with the length taken from
/// the block ranks.
pub fn orbit_dimension(node: &OrbitNode) -> usize {
    let d = node.dims();
    d.d_x() * d.d_y() - length_from_blocks(&node.block_ranks)
}

/// Upper bound on the number of lace arrays: at each vertex, the ways to
/// spread `d(z)` over the intervals through `z`.
pub fn lace_count_bound(q: &BipartiteQuiver, d: &DimensionVector) -> u128 {
    let intervals = q.intervals();
    let mut bound: u128 = 1;
    for z in 0..q.vertex_count() {
        let k = intervals.iter().filter(|j| j.contains_vertex(z)).count() as u128;
        bound = bound.saturating_mul(binomial(d.0[z] as u128 + k - 1, k - 1));
    }
    bound
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Every lace array with dimension vector `d`, in a fixed order. Stops with
/// [`Error::GuardExceeded`] once more than `guard` have been found; every
/// branch of the search ends in a lace, so the work is bounded by the guard.
pub fn enumerate_laces(q: &BipartiteQuiver, d: &DimensionVector, guard: u128) -> Result<Vec<LaceArray>> {
    d.check_bipartite(q)?;
    let arrows: Vec<Interval> = q.intervals().into_iter().filter(|j| j.arrow_count() > 0).collect();
    let mut out = Vec::new();
    let mut room = d.0.clone();
    let mut cur = LaceArray::zero(*q);
    if !fill(&arrows, 0, &mut room, &mut cur, &mut out, guard) {
        return Err(Error::GuardExceeded {
            what: "orbit enumeration",
            needed: guard + 1,
            ceiling: guard,
        });
    }
    Ok(out)
}

fn fill(
    arrows: &[Interval],
    k: usize,
    room: &mut [usize],
    cur: &mut LaceArray,
    out: &mut Vec<LaceArray>,
    guard: u128,
) -> bool {
    if k == arrows.len() {
        if out.len() as u128 >= guard {
            return false;
        }
        let mut s = cur.clone();
        for (z, &left) in room.iter().enumerate() {
            s.set(&Interval::Vertex(z), left).expect("vertex interval");
        }
        out.push(s);
        return true;
    }
    let j = arrows[k];
    let (lo, hi) = j.vertex_span();
    let span = lo as usize..=hi as usize;
    let most = room[span.clone()].iter().copied().min().unwrap_or(0);
    let mut ok = true;
    for m in 0..=most {
        for z in span.clone() {
            room[z] -= m;
        }
        cur.set(&j, m).expect("arrow interval");
        ok = fill(arrows, k + 1, room, cur, out, guard);
        for z in span.clone() {
            room[z] += m;
        }
        if !ok {
            break;
        }
    }
    cur.set(&j, 0).expect("arrow interval");
    ok
}

/// One node per orbit of `rep_Q(d)`.
pub fn enumerate_orbits(q: &BipartiteQuiver, d: &DimensionVector, guard: u128) -> Result<Vec<OrbitNode>> {
    enumerate_laces(q, d, guard)?
        .into_iter()
        .map(OrbitNode::from_lace)
        .collect()
}

/// Orbits ordered by `r' ≤ r` componentwise, i.e. by closure containment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationPoset {
    pub quiver: BipartiteQuiver,
    pub dims: DimensionVector,
    pub nodes: Vec<OrbitNode>,
    /// Covering pairs `[lower, upper]` as node indices.
    pub covers: Vec<(usize, usize)>,
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn meets(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }
}

/// Covering relations of the rank-array order.
pub fn hasse(q: BipartiteQuiver, d: DimensionVector, nodes: Vec<OrbitNode>) -> DegenerationPoset {
    let n = nodes.len();
    let mut below: Vec<Bits> = (0..n).map(|_| Bits::new(n)).collect();
    let mut above: Vec<Bits> = (0..n).map(|_| Bits::new(n)).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b && nodes[a].rank_array.leq(&nodes[b].rank_array) {
                below[b].set(a);
                above[a].set(b);
            }
        }
    }
    let mut covers = Vec::new();
    for b in 0..n {
        for a in 0..n {
            if below[b].get(a) && !above[a].meets(&below[b]) {
                covers.push((a, b));
            }
        }
    }
    covers.sort_unstable();
    DegenerationPoset {
        quiver: q,
        dims: d,
        nodes,
        covers,
    }
}

/// Enumerates the orbits and builds the poset in one go.
pub fn degeneration_poset(q: &BipartiteQuiver, d: &DimensionVector, guard: u128) -> Result<DegenerationPoset> {
    Ok(hasse(*q, d.clone(), enumerate_orbits(q, d, guard)?))
}

impl DegenerationPoset {
    /// Indices of nodes below no other node.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&a| !self.covers.iter().any(|&(lo, _)| lo == a))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&a| !self.covers.iter().any(|&(_, hi)| hi == a))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph degenerations {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
        for (k, node) in self.nodes.iter().enumerate() {
            let ranks: Vec<String> = node.rank_array.arrow_values().iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "  n{k} [label=\"r = ({})\\nv = {}\\ndim = {}\"];\n",
                ranks.join(","),
                node.permutation,
                node.dimension
            ));
        }
        for &(lo, hi) in &self.covers {
            out.push_str(&format!("  n{lo} -> n{hi};\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} orbits, {} covering relations, dims {}\n",
            self.nodes.len(),
            self.covers.len(),
            self.dims
        );
        for (k, node) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "[{k}] dim {} v = {}  {}\n",
                node.dimension,
                node.permutation,
                node.rank_array.to_compact_string()
            ));
        }
        for &(lo, hi) in &self.covers {
            out.push_str(&format!("{lo} < {hi}\n"));
        }
        out
    }
}

/// The dense orbit: the unique maximal node, cross-checked against a random
/// representation over `F_32003`. A mismatch triggers one resample.
pub fn dense_orbit(q: &BipartiteQuiver, d: &DimensionVector, seed: u64, guard: u128) -> Result<OrbitNode> {
    let poset = degeneration_poset(q, d, guard)?;
    let tops = poset.maximal();
    if tops.len() != 1 {
        return Err(Error::InvariantViolation(format!("{} maximal orbits", tops.len())));
    }
    let top = poset.nodes[tops[0]].clone();
    let field = Field::Prime(DEFAULT_PRIME);
    for attempt in 0..2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let v = Representation::random(*q, d.clone(), field, &mut rng)?;
        if rank_array(&v) == top.rank_array {
            return Ok(top);
        }
    }
    Err(Error::InvariantViolation(
        "a random representation twice missed the maximal orbit".into(),
    ))
}

/// Outcome of comparing the rank-array order with reversed Bruhat order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub pairs_checked: usize,
    /// Pairs `(a, b)` where `r_a ≤ r_b` and `v_a ≥ v_b` disagree.
    pub counterexamples: Vec<(usize, usize)>,
}

impl OrderReport {
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `r' ≤ r ⟺ v(r') ≥ v(r)` on every ordered pair of nodes.
pub fn order_equivalence_report(poset: &DegenerationPoset) -> OrderReport {
    let mut report = OrderReport {
        pairs_checked: 0,
        counterexamples: Vec::new(),
    };
    for (a, na) in poset.nodes.iter().enumerate() {
        for (b, nb) in poset.nodes.iter().enumerate() {
            report.pairs_checked += 1;
            let by_rank = na.rank_array.leq(&nb.rank_array);
            let by_bruhat = bruhat_leq(&nb.permutation, &na.permutation).unwrap_or(false);
            if by_rank != by_bruhat {
                report.counterexamples.push((a, b));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{essential_set, is_block_minimal, w_of};
    use crate::quiver::ArrowLabel::{Alpha, Beta};

    fn d(v: &[usize]) -> DimensionVector {
        DimensionVector(v.to_vec())
    }

    fn triple(r: &RankArray) -> (usize, usize, usize) {
        (
            r.get(&Interval::arrow(Alpha(1))),
            r.get(&Interval::arrow(Beta(1))),
            r.get(&Interval::arrows(Alpha(1), Beta(1))),
        )
    }

    #[test]
    fn diamond() {
        let q = BipartiteQuiver::new(1);
        let p = degeneration_poset(&q, &d(&[1, 1, 1]), DEFAULT_ORBIT_GUARD).unwrap();
        let mut triples: Vec<_> = p.nodes.iter().map(|n| triple(&n.rank_array)).collect();
        triples.sort();
        assert_eq!(triples, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]);
        assert_eq!(p.covers.len(), 4);
        let top = &p.nodes[p.maximal()[0]];
        let bottom = &p.nodes[p.minimal()[0]];
        assert_eq!(triple(&top.rank_array), (1, 1, 1));
        assert_eq!(triple(&bottom.rank_array), (0, 0, 0));
        assert_eq!(top.permutation, Permutation::identity(3));
        assert_eq!(bottom.permutation, w_of(&d(&[1, 1, 1])));
        for node in &p.nodes {
            assert_eq!(orbit_dimension(node), node.dimension);
            let want = match triple(&node.rank_array) {
                (1, 1, 1) => 2,
                (0, 0, 0) => 0,
                _ => 1,
            };
            assert_eq!(node.dimension, want);
        }
        let rep = order_equivalence_report(&p);
        assert_eq!(rep.pairs_checked, 16);
        assert!(rep.consistent());
        let dot = p.to_dot();
        assert_eq!(dot.matches("->").count(), 4);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<DegenerationPoset>(&json).unwrap(), p);
    }

    #[test]
    fn small_counts() {
        let q = BipartiteQuiver::new(1);
        let p0 = degeneration_poset(&q, &d(&[0, 0, 0]), DEFAULT_ORBIT_GUARD).unwrap();
        assert_eq!(p0.nodes.len(), 1);
        assert!(p0.covers.is_empty());
        assert!(order_equivalence_report(&p0).consistent());
        let p1 = degeneration_poset(&q, &d(&[1, 1, 0]), DEFAULT_ORBIT_GUARD).unwrap();
        assert_eq!(p1.nodes.len(), 2);
    }

    #[test]
    fn dense_orbits() {
        let q = BipartiteQuiver::new(1);
        let top = dense_orbit(&q, &d(&[1, 1, 1]), 0, DEFAULT_ORBIT_GUARD).unwrap();
        assert_eq!(triple(&top.rank_array), (1, 1, 1));
        assert_eq!(top.dimension, 2);
        let zero = dense_orbit(&q, &d(&[0, 0, 0]), 0, DEFAULT_ORBIT_GUARD).unwrap();
        assert!(zero.rank_array.values().iter().all(|&r| r == 0));
        let half = dense_orbit(&q, &d(&[1, 1, 0]), 0, DEFAULT_ORBIT_GUARD).unwrap();
        assert_eq!(half.rank_array.get(&Interval::arrow(Alpha(1))), 1);
    }

    #[test]
    fn guard_is_enforced() {
        let q = BipartiteQuiver::new(3);
        let err = enumerate_orbits(&q, &d(&[5; 7]), 1000).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { .. }));
    }

    #[test]
    fn structure_at_n2() {
        let q = BipartiteQuiver::new(2);
        for dims in DimensionVector::all_bounded(5, 2).into_iter().step_by(7) {
            let p = degeneration_poset(&q, &dims, DEFAULT_ORBIT_GUARD).unwrap();
            assert!(p.nodes.len() as u128 <= lace_count_bound(&q, &dims));
            assert_eq!(p.maximal().len(), 1, "{dims}");
            assert_eq!(p.minimal().len(), 1, "{dims}");
            let top = &p.nodes[p.maximal()[0]];
            let rep_dim: usize = (1..=4)
                .map(|pos| dims.at(BipartiteQuiver::arrow_head(pos)) * dims.at(BipartiteQuiver::arrow_tail(pos)))
                .sum();
            assert_eq!(top.dimension, rep_dim);
            for &(lo, hi) in &p.covers {
                assert!(p.nodes[lo].dimension < p.nodes[hi].dimension);
            }
            let spec = BlockSpec::from_layout(&BlockLayout::new(q, &dims).unwrap());
            for node in &p.nodes {
                assert!(is_block_minimal(&node.permutation, &spec));
                assert!(essential_set(&node.permutation).iter().all(|&b| spec.is_southeast_corner(b)));
            }
            assert!(order_equivalence_report(&p).consistent());
        }
    }
}
