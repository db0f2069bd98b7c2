//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::HashMap;
use std::time::Instant;

use qloci::oracle::{
    bruhat_via_covers, brute_orbit_labels, census_bipartite, census_type_a, enumerate_points, group_order,
    verify_rank_determines_orbit, OrbitCensus, QuiverShape, DEFAULT_ORACLE_GUARD,
};
use qloci::perm::{
    all_permutations, bruhat_leq, essential_set, inversion_length, is_block_minimal, length_from_blocks,
    w_of, zelevinsky_permutation, BlockSpec, Permutation,
};
use qloci::poset::{
    degeneration_poset, enumerate_laces, enumerate_orbits, orbit_dimension, order_equivalence_report, OrbitNode,
    DEFAULT_ORBIT_GUARD,
};
use qloci::reduction::{bipartite_double, enumerate_orbits_arbitrary, rank_array_arbitrary, TypeARep};
use qloci::rep::{act, lace_to_rank, rank_array, random_group_element, rank_to_lace, Representation};
use qloci::zelevinsky::{block_rank_numeric, block_rank_symbolic, zelevinsky_map, BlockLayout};
use qloci::{BipartiteQuiver, DimensionVector, ExactMatrix, Field, TypeAQuiver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: qloci::Error) -> String {
    e.to_string()
}

fn bipartite_dims(n: usize, max: usize) -> Vec<DimensionVector> {
    DimensionVector::all_bounded(2 * n + 1, max)
}

/// Every orbit node for `n ≤ 2` and dimensions `≤ 2`, grouped by `(n, d)`.
fn small_orbits() -> Result<Vec<(BipartiteQuiver, DimensionVector, Vec<OrbitNode>)>, String> {
    let mut out = Vec::new();
    for n in 0..=2 {
        let q = BipartiteQuiver::new(n);
        for d in bipartite_dims(n, 2) {
            let nodes = enumerate_orbits(&q, &d, DEFAULT_ORBIT_GUARD).map_err(err)?;
            out.push((q, d, nodes));
        }
    }
    Ok(out)
}

// The worked example on the n = 3 quiver.
const EXAMPLE_DIMS: [usize; 7] = [1, 2, 3, 2, 3, 2, 1];

const EXAMPLE_BLOCK_RANKS: [[usize; 7]; 7] = [
    [0, 0, 1, 1, 1, 1, 1],
    [0, 1, 2, 3, 4, 4, 4],
    [0, 2, 4, 5, 6, 7, 7],
    [1, 3, 5, 6, 7, 8, 8],
    [2, 4, 6, 7, 8, 9, 10],
    [2, 4, 6, 7, 8, 11, 12],
    [2, 4, 6, 7, 10, 13, 14],
];

const EXAMPLE_PERMUTATION_MATRIX: [&str; 14] = [
    "00001000000000",
    "00100000000000",
    "00000010000000",
    "00000001000000",
    "00010000000000",
    "00000100000000",
    "00000000001000",
    "10000000000000",
    "01000000000000",
    "00000000000001",
    "00000000000100",
    "00000000000010",
    "00000000100000",
    "00000000010000",
];

fn example_rep() -> Result<Representation, String> {
    let f = Field::Rational;
    let m = |rows: &[Vec<i64>]| ExactMatrix::from_i64_rows(f, rows).map_err(err);
    let maps = vec![
        m(&[vec![1, 0]])?,                                 // a1: x1 -> y0
        m(&[vec![0, 1], vec![0, 0], vec![1, 0]])?,         // b1: x1 -> y1
        m(&[vec![0, 1], vec![0, 0], vec![0, 0]])?,         // a2: x2 -> y1
        m(&[vec![1, 0], vec![0, 1], vec![0, 0]])?,         // b2: x2 -> y2
        ExactMatrix::zeros(f, 3, 2),                       // a3: x3 -> y2
        m(&[vec![0, 1]])?,                                 // b3: x3 -> y3
    ];
    Representation::new(BipartiteQuiver::new(3), DimensionVector(EXAMPLE_DIMS.to_vec()), f, maps).map_err(err)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = example_rep()?;
    let b = block_rank_numeric(&zelevinsky_map(&v));
    for i in 1..=7 {
        for j in 1..=7 {
            check(b.get(i, j) == EXAMPLE_BLOCK_RANKS[i - 1][j - 1], || {
                format!("b({i},{j}) = {}, expected {}", b.get(i, j), EXAMPLE_BLOCK_RANKS[i - 1][j - 1])
            })?;
        }
    }
    let layout = BlockLayout::new(v.quiver(), v.dims()).map_err(err)?;
    let perm = zelevinsky_permutation(&b, &BlockSpec::from_layout(&layout)).map_err(err)?;
    let expected: Vec<usize> = EXAMPLE_PERMUTATION_MATRIX
        .iter()
        .map(|row| row.find('1').expect("one entry per row") + 1)
        .collect();
    check(perm.one_line() == expected.as_slice(), || format!("v = {perm}, expected {expected:?}"))?;
    let elapsed = start.elapsed();
    check(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("b(r) and v(r) = {perm} match, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut reps = 0u64;
    for n in 0..=2 {
        let q = BipartiteQuiver::new(n);
        let shape = QuiverShape::from_bipartite(&q);
        for d in bipartite_dims(n, 2) {
            for maps in enumerate_points(&shape, &d, 2, DEFAULT_ORACLE_GUARD).map_err(err)? {
                let v = Representation::new(q, d.clone(), Field::Prime(2), maps).map_err(err)?;
                let symbolic = block_rank_symbolic(&rank_array(&v), &d).map_err(err)?;
                let numeric = block_rank_numeric(&zelevinsky_map(&v));
                check(symbolic == numeric, || format!("routes differ at n={n}, d={d}: {v:?}"))?;
                reps += 1;
            }
        }
    }
    Ok(format!("{reps} representations over F_2, {:.2?}", start.elapsed()))
}

fn oracle_cases() -> Vec<(BipartiteQuiver, DimensionVector, u32)> {
    let mut cases = Vec::new();
    for p in [2, 3] {
        for d in bipartite_dims(1, 2) {
            cases.push((BipartiteQuiver::new(1), d, p));
        }
    }
    for d in bipartite_dims(2, 2) {
        if group_order(&d, 2).is_some_and(|g| g <= DEFAULT_ORACLE_GUARD) {
            cases.push((BipartiteQuiver::new(2), d, 2));
        }
    }
    cases
}

fn criterion_3() -> Outcome {
    let cases = oracle_cases();
    for (q, d, p) in &cases {
        let r = verify_rank_determines_orbit(q, d, *p, DEFAULT_ORACLE_GUARD).map_err(err)?;
        check(r.agrees(), || format!("n={} d={d} p={p}: {r:?}", q.n))?;
    }
    Ok(format!("{} (n, d, p) cases", cases.len()))
}

fn criterion_4() -> Outcome {
    let mut laces = 0u64;
    for n in 0..=3 {
        let q = BipartiteQuiver::new(n);
        for d in bipartite_dims(n, 3) {
            for s in enumerate_laces(&q, &d, DEFAULT_ORBIT_GUARD).map_err(err)? {
                let r = lace_to_rank(&s);
                let back = rank_to_lace(&r, &d).map_err(err)?;
                check(back == s, || format!("lace round trip fails at n={n}, d={d}"))?;
                check(lace_to_rank(&back) == r, || format!("rank round trip fails at n={n}, d={d}"))?;
                laces += 1;
            }
        }
    }
    Ok(format!("{laces} lace arrays"))
}

fn criterion_5(orbits: &[(BipartiteQuiver, DimensionVector, Vec<OrbitNode>)]) -> Outcome {
    let mut count = 0;
    for (_, d, nodes) in orbits {
        let full = d.d_x() * d.d_y();
        for node in nodes {
            let l = inversion_length(&node.permutation);
            check(length_from_blocks(&node.block_ranks) == l, || {
                format!("d={d}: block length {} vs {l}", length_from_blocks(&node.block_ranks))
            })?;
            check(l <= full && orbit_dimension(node) == full - l, || format!("d={d}: dimension mismatch"))?;
            count += 1;
        }
    }
    let mut ws = 0;
    for n in 0..=2 {
        for d in bipartite_dims(n, 3) {
            let w = w_of(&d);
            check(inversion_length(&w) == d.d_x() * d.d_y(), || format!("l(w) wrong for d={d}"))?;
            ws += 1;
        }
    }
    Ok(format!("{count} orbits, {ws} dimension vectors for w"))
}

fn criterion_6(orbits: &[(BipartiteQuiver, DimensionVector, Vec<OrbitNode>)]) -> Outcome {
    let mut count = 0;
    for (q, d, nodes) in orbits {
        let spec = BlockSpec::from_layout(&BlockLayout::new(*q, d).map_err(err)?);
        for node in nodes {
            let v = &node.permutation;
            check(is_block_minimal(v, &spec), || format!("d={d}: {v} is not block-minimal"))?;
            for b in essential_set(v) {
                check(spec.is_southeast_corner(b), || format!("d={d}: essential box {b:?} of {v}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} permutations"))
}

fn criterion_7(orbits: &[(BipartiteQuiver, DimensionVector, Vec<OrbitNode>)]) -> Outcome {
    let mut pairs = 0;
    for (q, d, _) in orbits {
        let poset = degeneration_poset(q, d, DEFAULT_ORBIT_GUARD).map_err(err)?;
        let report = order_equivalence_report(&poset);
        check(report.consistent(), || format!("d={d}: {:?}", report.counterexamples))?;
        pairs += report.pairs_checked;
    }
    let s4 = all_permutations(4);
    for u in &s4 {
        for v in &s4 {
            check(bruhat_leq(u, v).map_err(err)? == bruhat_via_covers(u, v).map_err(err)?, || {
                format!("{u} vs {v}")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sample = || {
        let mut x: Vec<usize> = (1..=6).collect();
        x.shuffle(&mut rng);
        Permutation::new(x).expect("shuffled identity")
    };
    for _ in 0..1000 {
        let (u, v) = (sample(), sample());
        check(bruhat_leq(&u, &v).map_err(err)? == bruhat_via_covers(&u, &v).map_err(err)?, || {
            format!("{u} vs {v}")
        })?;
    }
    Ok(format!("{pairs} orbit pairs, S_4 and 1000 pairs in S_6"))
}

fn cover_quiver() -> TypeAQuiver {
    TypeAQuiver::from_word("RRLL").expect("valid word")
}

fn criterion_8() -> Outcome {
    let ctx = bipartite_double(&cover_quiver());
    let shape = QuiverShape::from_type_a(ctx.source());
    let mut points = 0u64;
    for d in DimensionVector::all_bounded(5, 2) {
        let (labels, orbits) = brute_orbit_labels(&shape, &d, 2, DEFAULT_ORACLE_GUARD).map_err(err)?;
        let mut fiber = vec![None; orbits.len()];
        let mut owner = HashMap::new();
        for (maps, &l) in enumerate_points(&shape, &d, 2, DEFAULT_ORACLE_GUARD).map_err(err)?.zip(&labels) {
            let v = TypeARep::new(ctx.source().clone(), d.clone(), Field::Prime(2), maps).map_err(err)?;
            let r = rank_array_arbitrary(&ctx, &v).map_err(err)?;
            match &fiber[l as usize] {
                None => {
                    check(owner.insert(r.clone(), l).is_none(), || format!("d={d}: two orbits share a rank array"))?;
                    fiber[l as usize] = Some(r);
                }
                Some(seen) => check(seen == &r, || format!("d={d}: rank array varies inside an orbit"))?,
            }
            points += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let field = Field::Prime(3);
    for _ in 0..100 {
        let d = DimensionVector((0..5).map(|_| rng.random_range(0..=2)).collect());
        let dt = ctx.lift_dimension(&d).map_err(err)?;
        let v = TypeARep::random(cover_quiver(), d, field, &mut rng).map_err(err)?;
        let h = random_group_element(&dt, field, &mut rng);
        let vt = act(&h, &ctx.lift_rep(&v).map_err(err)?).map_err(err)?;
        let g = random_group_element(&dt, field, &mut rng);
        let lhs = ctx.project(&act(&g, &vt).map_err(err)?).map_err(err)?;
        let rhs = ctx
            .project(&vt)
            .map_err(err)?
            .act(&ctx.project_group(&g).map_err(err)?)
            .map_err(err)?;
        check(lhs == rhs, || "projection is not equivariant".to_string())?;
    }
    Ok(format!("{points} points over F_2, 100 equivariance pairs over F_3"))
}

fn census_sane(c: &OrbitCensus, entries: usize, laces: usize) -> bool {
    c.total_points() == (c.p as u128).pow(entries as u32) && c.orbits.len() == laces
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    for (q, d, p) in oracle_cases() {
        let c = census_bipartite(&q, &d, p, DEFAULT_ORACLE_GUARD).map_err(err)?;
        let laces = enumerate_laces(&q, &d, DEFAULT_ORBIT_GUARD).map_err(err)?.len();
        let entries = QuiverShape::from_bipartite(&q).entry_count(&d);
        check(census_sane(&c, entries, laces), || format!("n={} d={d} p={p}", q.n))?;
        count += 1;
    }
    let ctx = bipartite_double(&cover_quiver());
    let shape = QuiverShape::from_type_a(ctx.source());
    for d in DimensionVector::all_bounded(5, 2) {
        let c = census_type_a(&ctx, &d, 2, DEFAULT_ORACLE_GUARD).map_err(err)?;
        let laces = enumerate_orbits_arbitrary(&ctx, &d, DEFAULT_ORBIT_GUARD).map_err(err)?.len();
        check(census_sane(&c, shape.entry_count(&d), laces), || format!("RRLL d={d}"))?;
        count += 1;
    }
    Ok(format!("{count} censuses"))
}

fn main() {
    // libtest-style arguments such as --nocapture are accepted and ignored
    let orbits = match small_orbits() {
        Ok(o) => o,
        Err(e) => {
            println!("setup failed: {e}");
            std::process::exit(1);
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("worked example", Box::new(criterion_1)),
        ("symbolic and numeric block ranks agree", Box::new(criterion_2)),
        ("rank arrays separate orbits over F_p", Box::new(criterion_3)),
        ("lace and rank round trips", Box::new(criterion_4)),
        ("length and orbit dimension", Box::new(|| criterion_5(&orbits))),
        ("block-minimal permutations, essential boxes", Box::new(|| criterion_6(&orbits))),
        ("order anti-isomorphism", Box::new(|| criterion_7(&orbits))),
        ("orientation reduction", Box::new(criterion_8)),
        ("census sanity", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{:.2?}]", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{:.2?}]", k + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
