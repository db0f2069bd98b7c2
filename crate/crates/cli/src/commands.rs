use std::collections::HashMap;

use qloci::linalg::DEFAULT_PRIME;
use qloci::oracle::{census_bipartite, census_type_a, compare_census, OracleReport, OrbitCensus, QuiverShape};
use qloci::perm::{essential_set, inversion_length, zelevinsky_permutation, BlockSpec, Permutation};
use qloci::poset::{
    degeneration_poset, dense_orbit, enumerate_orbits, order_equivalence_report, DegenerationPoset, OrderReport,
    DEFAULT_ORBIT_GUARD,
};
use qloci::reduction::{
    bipartite_double, degeneration_poset_arbitrary, enumerate_orbits_arbitrary, rank_array_arbitrary, AnyRep,
    DoubledVertex, ReductionContext, TypeARep,
};
use qloci::rep::{rank_array, rank_to_lace, LaceArray, RankArray, Representation};
use qloci::zelevinsky::{block_rank_numeric, zelevinsky_map, BlockLayout, BlockRankMatrix, ZelevinskyCellMatrix};
use qloci::{BipartiteQuiver, DimensionVector, ExactMatrix, Field, Interval, Orientation, Quiver, TypeAQuiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{parse_quiver, read_file, CliError, Command, Format, JobConfig, Outcome};

pub fn run(job: &JobConfig) -> Result<Outcome, CliError> {
    if job.format == Format::Dot && job.command != Command::Poset {
        return Err(CliError::Input("--format dot is only available for poset".into()));
    }
    match job.command {
        Command::Decompose => decompose(job).map(|r| Outcome::ok(render(job, &r, DecomposeReport::to_text))),
        Command::Zelevinsky => zelevinsky(job).map(|r| Outcome::ok(render(job, &r, ZelevinskyReport::to_text))),
        Command::Poset => {
            let r = poset(job)?;
            let output = match job.format {
                Format::Dot => r.to_dot(),
                _ => render(job, &r, PosetReport::to_text),
            };
            let failure = (!r.order.consistent())
                .then(|| format!("{} pairs contradict the Bruhat order", r.order.counterexamples.len()));
            Ok(Outcome { output, failure })
        }
        Command::Reduce => reduce(job).map(|r| Outcome::ok(render(job, &r, ReduceReport::to_text))),
        Command::Oracle => {
            let r = oracle(job)?;
            let failure = r
                .checks
                .iter()
                .find(|c| !c.passed)
                .map(|c| format!("check failed: {}", c.name));
            Ok(Outcome {
                output: render(job, &r, OracleRun::to_text),
                failure,
            })
        }
    }
}

fn render<T: Serialize>(job: &JobConfig, report: &T, text: impl Fn(&T) -> String) -> String {
    match job.format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        _ => text(report),
    }
}

fn require<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Input(format!("this command needs {flag}")))
}

fn load_rep(job: &JobConfig) -> Result<AnyRep, CliError> {
    let text = read_file(require(&job.rep, "--rep")?)?;
    Ok(AnyRep::from_json_in(&text, job.field)?)
}

fn load_quiver(job: &JobConfig) -> Result<Option<Quiver>, CliError> {
    job.quiver.as_ref().map(|p| parse_quiver(&read_file(p)?)).transpose()
}

/// `(LR)^n`, the bipartite quiver as an orientation word.
fn bipartite_word(q: BipartiteQuiver) -> TypeAQuiver {
    TypeAQuiver::new(
        (0..q.n)
            .flat_map(|_| [Orientation::Left, Orientation::Right])
            .collect(),
    )
}

/// Bipartite quiver for `d`, from `--quiver` or inferred from its length.
fn bipartite_for(d: &DimensionVector) -> Result<BipartiteQuiver, CliError> {
    if d.len() % 2 == 0 {
        return Err(CliError::Input(format!(
            "{} entries cannot be a bipartite dimension vector; pass --quiver",
            d.len()
        )));
    }
    Ok(BipartiteQuiver::new(d.len() / 2))
}

fn is_trivial(ctx: &ReductionContext) -> bool {
    ctx.insertions().is_empty() && !ctx.dualized() && !ctx.padded()
}

fn rep_space_dimension(shape: &QuiverShape, d: &DimensionVector) -> usize {
    shape.entry_count(d)
}

fn dims_text(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn source_interval_text(ctx: &ReductionContext, j: &Interval) -> String {
    match ctx.source_span(j) {
        Some((a, b)) if a == b => format!("{{z{a}}}"),
        Some((a, b)) => format!("[z{a},z{b}]"),
        None => format!("{j} (no vertex of Q)"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub interval: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub field: Field,
    /// Indecomposable summands on the input quiver.
    pub summands: Vec<Summand>,
    /// Lace and rank arrays, on the bipartite double for reduced input.
    pub lace: LaceArray,
    pub rank_array: RankArray,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionContext>,
}

impl DecomposeReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "quiver {}, dims {} over {}\nsummands:\n",
            quiver_text(&self.quiver),
            dims_text(&self.dims),
            self.field
        );
        for s in &self.summands {
            out.push_str(&format!("  {} x {}\n", s.interval, s.multiplicity));
        }
        if self.reduction.is_some() {
            out.push_str("rank array on the bipartite double:\n");
        } else {
            out.push_str("rank array:\n");
        }
        for (j, r) in self.rank_array.iter().filter(|(j, _)| j.arrow_count() > 0) {
            out.push_str(&format!("  r{j} = {r}\n"));
        }
        out
    }
}

fn quiver_text(q: &Quiver) -> String {
    match q {
        Quiver::TypeA(a) if a.word().is_empty() => "A (single vertex)".into(),
        Quiver::TypeA(a) => format!("A {}", a.word()),
        Quiver::Bipartite(b) => format!("bipartite n={}", b.n),
    }
}

pub fn decompose(job: &JobConfig) -> Result<DecomposeReport, CliError> {
    match load_rep(job)? {
        AnyRep::Bipartite(v) => {
            let r = rank_array(&v);
            let lace = rank_to_lace(&r, v.dims())?;
            let summands = lace
                .nonzero()
                .map(|(j, m)| Summand {
                    interval: j.to_string(),
                    multiplicity: m,
                })
                .collect();
            Ok(DecomposeReport {
                quiver: Quiver::Bipartite(v.quiver()),
                dims: v.dims().0.clone(),
                field: v.field(),
                summands,
                lace,
                rank_array: r,
                reduction: None,
            })
        }
        AnyRep::TypeA(v) => {
            let ctx = bipartite_double(v.quiver());
            let lifted = ctx.lift_rep(&v)?;
            let r = rank_array(&lifted);
            let lace = rank_to_lace(&r, lifted.dims())?;
            let summands = lace
                .nonzero()
                .map(|(j, m)| Summand {
                    interval: source_interval_text(&ctx, &j),
                    multiplicity: m,
                })
                .collect();
            Ok(DecomposeReport {
                quiver: Quiver::TypeA(v.quiver().clone()),
                dims: v.dims().0.clone(),
                field: v.field(),
                summands,
                lace,
                rank_array: r,
                reduction: Some(ctx),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZelevinskyReport {
    /// The bipartite quiver the map is taken on.
    pub quiver: BipartiteQuiver,
    pub dims: Vec<usize>,
    pub zeta: ExactMatrix,
    pub block_ranks: BlockRankMatrix,
    pub permutation: Permutation,
    pub essential_set: Vec<(usize, usize)>,
    pub length: usize,
    /// Orbit dimension in the representation space of the input quiver.
    pub dimension: usize,
    pub codimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionContext>,
}

impl ZelevinskyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.reduction.is_some() {
            out.push_str(&format!("reduced to bipartite n={}, dims {}\n", self.quiver.n, dims_text(&self.dims)));
        }
        out.push_str("zeta(V):\n");
        let cell = BlockLayout::new(self.quiver, &DimensionVector(self.dims.clone()))
            .and_then(|l| ZelevinskyCellMatrix::new(l, self.zeta.clone()));
        match cell {
            Ok(c) => out.push_str(&c.to_block_text()),
            Err(_) => out.push_str(&self.zeta.to_string()),
        }
        out.push_str("\nb(r):\n");
        out.push_str(&self.block_ranks.to_string());
        out.push_str(&format!("\nv(r) = {}\n", self.permutation));
        out.push_str(&self.permutation.to_matrix_text());
        let ess: Vec<String> = self.essential_set.iter().map(|(i, j)| format!("({i},{j})")).collect();
        out.push_str(&format!("essential set: {}\n", ess.join(" ")));
        out.push_str(&format!(
            "length {}, orbit dimension {}, codimension {}\n",
            self.length, self.dimension, self.codimension
        ));
        out
    }
}

pub fn zelevinsky(job: &JobConfig) -> Result<ZelevinskyReport, CliError> {
    let (v, source_dim, ctx): (Representation, usize, Option<ReductionContext>) = match load_rep(job)? {
        AnyRep::Bipartite(v) => {
            let dim = rep_space_dimension(&QuiverShape::from_bipartite(&v.quiver()), v.dims());
            (v, dim, None)
        }
        AnyRep::TypeA(v) => {
            let ctx = bipartite_double(v.quiver());
            if !is_trivial(&ctx) && !job.reduce {
                return Err(CliError::Input(format!(
                    "orientation {} is not bipartite; pass --reduce",
                    v.quiver().word()
                )));
            }
            let dim = rep_space_dimension(&QuiverShape::from_type_a(v.quiver()), v.dims());
            (ctx.lift_rep(&v)?, dim, Some(ctx))
        }
    };
    let z = zelevinsky_map(&v);
    let b = block_rank_numeric(&z);
    let node_perm = zelevinsky_permutation(&b, &BlockSpec::from_layout(z.layout()))?;
    let length = inversion_length(&node_perm);
    let d = v.dims();
    let lifted_dim = d
        .d_x()
        .checked_mul(d.d_y())
        .and_then(|full| full.checked_sub(length))
        .ok_or_else(|| qloci::Error::InvariantViolation(format!("length {length} exceeds d_x d_y")))?;
    // codimension is unchanged by the reduction
    let lifted_space = rep_space_dimension(&QuiverShape::from_bipartite(&v.quiver()), d);
    let codimension = lifted_space
        .checked_sub(lifted_dim)
        .ok_or_else(|| qloci::Error::InvariantViolation("orbit larger than its space".into()))?;
    let dimension = source_dim
        .checked_sub(codimension)
        .ok_or_else(|| qloci::Error::InvariantViolation("negative orbit dimension".into()))?;
    Ok(ZelevinskyReport {
        quiver: v.quiver(),
        dims: d.0.clone(),
        zeta: z.matrix().clone(),
        block_ranks: b,
        essential_set: essential_set(&node_perm),
        permutation: node_perm,
        length,
        dimension,
        codimension,
        reduction: ctx.filter(|c| !is_trivial(c)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetReport {
    pub poset: DegenerationPoset,
    pub order: OrderReport,
    /// Index of the dense orbit.
    pub dense: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionContext>,
}

impl PosetReport {
    fn report_lines(&self, prefix: &str) -> String {
        let verdict = if self.order.consistent() {
            "consistent".to_string()
        } else {
            format!("{} counterexamples {:?}", self.order.counterexamples.len(), self.order.counterexamples)
        };
        format!(
            "{prefix}dense orbit: {}\n{prefix}order equivalence with Bruhat order: {} pairs, {verdict}\n",
            self.dense, self.order.pairs_checked
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(ctx) = &self.reduction {
            // each delta arrow adds d(z_i)^2 to the space, orbits included
            let offset: usize = ctx
                .vertices()
                .iter()
                .zip(&self.poset.dims.0)
                .filter(|(v, _)| matches!(v, DoubledVertex::Inserted(_)))
                .map(|(_, &k)| k * k)
                .sum();
            out.push_str(&format!(
                "reduced {} to bipartite n={}; orbit dimensions are on the double, {offset} more than on {}\n",
                ctx.source().word(),
                ctx.target().n,
                ctx.source().word()
            ));
        }
        out.push_str(&self.poset.to_text());
        out.push_str(&self.report_lines(""));
        out
    }

    pub fn to_dot(&self) -> String {
        self.poset.to_dot() + &self.report_lines("// ")
    }
}

fn dense_index(poset: &DegenerationPoset, r: &RankArray) -> Option<usize> {
    poset.nodes.iter().position(|n| &n.rank_array == r)
}

pub fn poset(job: &JobConfig) -> Result<PosetReport, CliError> {
    let d = require(&job.dims, "--dims")?;
    let guard = job.orbit_guard();
    let quiver = match load_quiver(job)? {
        Some(q) => q,
        None => Quiver::Bipartite(bipartite_for(d)?),
    };
    match quiver {
        Quiver::Bipartite(q) => {
            let poset = degeneration_poset(&q, d, guard)?;
            let top = dense_orbit(&q, d, job.seed, guard)?;
            let dense = dense_index(&poset, &top.rank_array)
                .ok_or_else(|| qloci::Error::InvariantViolation("dense orbit missing from the poset".into()))?;
            Ok(PosetReport {
                order: order_equivalence_report(&poset),
                poset,
                dense,
                reduction: None,
            })
        }
        Quiver::TypeA(a) => {
            let ctx = bipartite_double(&a);
            let poset = degeneration_poset_arbitrary(&ctx, d, guard)?;
            let field = Field::Prime(DEFAULT_PRIME);
            let mut dense = None;
            for attempt in 0..2 {
                let mut rng = ChaCha8Rng::seed_from_u64(job.seed.wrapping_add(attempt));
                let v = TypeARep::random(a.clone(), d.clone(), field, &mut rng)?;
                let r = rank_array_arbitrary(&ctx, &v)?;
                if let Some(k) = dense_index(&poset, &r).filter(|k| poset.maximal() == vec![*k]) {
                    dense = Some(k);
                    break;
                }
            }
            let dense = dense.ok_or_else(|| {
                qloci::Error::InvariantViolation("random representations twice missed the maximal orbit".into())
            })?;
            Ok(PosetReport {
                order: order_equivalence_report(&poset),
                poset,
                dense,
                reduction: Some(ctx),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub context: ReductionContext,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted_rep: Option<Representation>,
}

impl ReduceReport {
    pub fn to_text(&self) -> String {
        let mut out = self.context.to_text();
        if let (Some(d), Some(dt)) = (&self.dims, &self.lifted_dims) {
            out.push_str(&format!("d = {} lifts to {}\n", dims_text(d), dims_text(dt)));
        }
        if let Some(v) = &self.lifted_rep {
            out.push_str("lifted representation:\n");
            for p in 1..=v.quiver().arrow_count() {
                let label = qloci::ArrowLabel::from_position(p);
                out.push_str(&format!("{label} =\n{}\n", v.map_at(p)));
            }
        }
        out
    }
}

pub fn reduce(job: &JobConfig) -> Result<ReduceReport, CliError> {
    let rep = job.rep.as_ref().map(|_| load_rep(job)).transpose()?;
    let quiver = match (load_quiver(job)?, &rep) {
        (Some(q), _) => q,
        (None, Some(AnyRep::TypeA(v))) => Quiver::TypeA(v.quiver().clone()),
        (None, Some(AnyRep::Bipartite(v))) => Quiver::Bipartite(v.quiver()),
        (None, None) => return Err(CliError::Input("this command needs --quiver or --rep".into())),
    };
    let word = match &quiver {
        Quiver::TypeA(a) => a.clone(),
        Quiver::Bipartite(b) => bipartite_word(*b),
    };
    let ctx = bipartite_double(&word);
    let dims = job.dims.clone().or_else(|| match &rep {
        Some(AnyRep::TypeA(v)) => Some(v.dims().clone()),
        Some(AnyRep::Bipartite(v)) => Some(v.dims().clone()),
        None => None,
    });
    let lifted_dims = dims.as_ref().map(|d| ctx.lift_dimension(d)).transpose()?;
    let lifted_rep = match rep {
        Some(AnyRep::TypeA(v)) => Some(ctx.lift_rep(&v)?),
        Some(AnyRep::Bipartite(v)) => Some(v),
        None => None,
    };
    if let (Some(v), Some(dt)) = (&lifted_rep, &lifted_dims) {
        if v.dims() != dt {
            return Err(CliError::Input("--dims does not match the representation".into()));
        }
    }
    Ok(ReduceReport {
        context: ctx,
        dims: dims.map(|d| d.0),
        lifted_dims: lifted_dims.map(|d| d.0),
        lifted_rep,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRun {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub census: OrbitCensus,
    pub report: OracleReport,
    pub checks: Vec<CheckResult>,
    /// Human-readable descriptions of whatever made a check fail.
    pub counterexamples: Vec<String>,
}

impl OracleRun {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "quiver {}, dims {}, p = {}\n",
            quiver_text(&self.quiver),
            dims_text(&self.dims),
            self.census.p
        );
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        for c in &self.counterexamples {
            out.push_str(&format!("counterexample: {c}\n"));
        }
        out.push_str(&self.census.to_text());
        out
    }
}

pub fn oracle(job: &JobConfig) -> Result<OracleRun, CliError> {
    let d = require(&job.dims, "--dims")?;
    let p = match job.field {
        None => 2,
        Some(Field::Prime(p)) => p,
        Some(Field::Rational) => return Err(CliError::Input("the oracle needs a finite field".into())),
    };
    let guard = job.oracle_guard();
    let quiver = match load_quiver(job)? {
        Some(q) => q,
        None => Quiver::Bipartite(bipartite_for(d)?),
    };
    let (census, predicted, entries) = match &quiver {
        Quiver::Bipartite(q) => {
            let census = census_bipartite(q, d, p, guard)?;
            let predicted: Vec<RankArray> = enumerate_orbits(q, d, DEFAULT_ORBIT_GUARD)?
                .into_iter()
                .map(|n| n.rank_array)
                .collect();
            (census, predicted, QuiverShape::from_bipartite(q).entry_count(d))
        }
        Quiver::TypeA(a) => {
            let ctx = bipartite_double(a);
            let census = census_type_a(&ctx, d, p, guard)?;
            let predicted: Vec<RankArray> = enumerate_orbits_arbitrary(&ctx, d, DEFAULT_ORBIT_GUARD)?
                .into_iter()
                .map(|n| n.rank_array)
                .collect();
            (census, predicted, QuiverShape::from_type_a(a).entry_count(d))
        }
    };
    let report = compare_census(&census, d, predicted.clone());
    let expected_points = (p as u128).pow(entries as u32);
    let mut counterexamples = Vec::new();
    let mut by_rank: HashMap<&RankArray, Vec<usize>> = HashMap::new();
    for (k, o) in census.orbits.iter().enumerate() {
        by_rank.entry(&o.rank_array).or_default().push(k);
    }
    for (r, ks) in &by_rank {
        if ks.len() > 1 {
            counterexamples.push(format!("orbits {ks:?} share the rank array {}", r.to_compact_string()));
        }
    }
    for o in &census.orbits {
        if !predicted.contains(&o.rank_array) {
            counterexamples.push(format!("unpredicted rank array {}", o.rank_array.to_compact_string()));
        }
    }
    let checks = vec![
        CheckResult {
            name: "orbit sizes sum to p^N".into(),
            passed: census.total_points() == expected_points,
            detail: format!("{} of {expected_points}", census.total_points()),
        },
        CheckResult {
            name: "rank arrays separate orbits".into(),
            passed: report.distinct_rank_arrays == report.brute_orbits,
            detail: format!("{} orbits, {} rank arrays", report.brute_orbits, report.distinct_rank_arrays),
        },
        CheckResult {
            name: "every orbit is predicted".into(),
            passed: report.rank_arrays_predicted,
            detail: format!("{} predicted", report.predicted_orbits),
        },
        CheckResult {
            name: "orbit count equals lace count".into(),
            passed: report.brute_orbits == report.predicted_orbits,
            detail: format!("{} vs {}", report.brute_orbits, report.predicted_orbits),
        },
        CheckResult {
            name: "orbit sizes divide |GL(d)|".into(),
            passed: report.sizes_divide_group_order,
            detail: String::new(),
        },
    ];
    Ok(OracleRun {
        quiver,
        dims: d.0.clone(),
        census,
        report,
        checks,
        counterexamples,
    })
}
