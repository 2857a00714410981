//! Exact optima by enumerating colorings, ratio experiments and the
//! cross-edge audit.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{approx_2mst, approx_2tsp, ApproxError, SplitReport, TieBreakPlan};
use crate::instance::{cost, Color, Coloring, Edge, MetricInstance, Objective, StructureKind, StructurePair};
use crate::matrix::Matrix;
use crate::solvers::{
    bottleneck_matching_raw, bottleneck_tour_raw, held_karp_raw, kruskal_raw, matching_dp_raw, tour_edges, SolverCaps,
};
use crate::weight::{Cost, Weight};
use crate::with_costs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n_pairs} pairs exceed the oracle cap of {cap} for {kind}")]
    TooLarge { n_pairs: usize, cap: usize, kind: &'static str },
    #[error("color classes of {size} nodes exceed the {kind} solver cap of {cap}")]
    ClassTooLarge { size: usize, cap: usize, kind: &'static str },
    #[error("perfect matchings need an even number of pairs, got {0}")]
    OddPairs(usize),
    #[error("no approximation algorithm for {0}")]
    NoAlgorithm(&'static str),
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub mst_pair_cap: usize,
    pub tsp_pair_cap: usize,
    pub matching_pair_cap: usize,
    pub solver_caps: SolverCaps,
    /// Number of contiguous index shards searched in parallel.
    pub jobs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mst_pair_cap: 12,
            tsp_pair_cap: 10,
            matching_pair_cap: 12,
            solver_caps: SolverCaps::default(),
            jobs: 1,
        }
    }
}

/// Coloring number `k` of `2^(n-1)`: pair `i` has `p_i` red iff bit `i` of
/// `2k` is set, so `p_1` is always blue.
pub fn coloring_at(n_pairs: usize, index: u64) -> Coloring {
    let mask = index << 1;
    Coloring::new((0..n_pairs).map(|i| (mask >> i) & 1 == 1).collect())
}

pub fn coloring_count(n_pairs: usize) -> u64 {
    1u64 << (n_pairs.max(1) - 1)
}

/// All colorings up to the global color swap, in increasing index order.
pub fn enumerate_colorings(n_pairs: usize) -> impl Iterator<Item = Coloring> {
    (0..coloring_count(n_pairs)).map(move |k| coloring_at(n_pairs, k))
}

/// Objective values of one solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveValues {
    pub min_sum: Weight,
    pub min_max: Weight,
    pub bottleneck: Weight,
}

impl ObjectiveValues {
    pub fn of(inst: &MetricInstance, pair: &StructurePair) -> Self {
        ObjectiveValues {
            min_sum: cost(inst, pair, Objective::MinSum),
            min_max: cost(inst, pair, Objective::MinMax),
            bottleneck: cost(inst, pair, Objective::Bottleneck),
        }
    }

    pub fn get(&self, objective: Objective) -> &Weight {
        match objective {
            Objective::MinSum => &self.min_sum,
            Objective::MinMax => &self.min_max,
            Objective::Bottleneck => &self.bottleneck,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub kind: StructureKind,
    pub objective: Objective,
    pub best_value: Weight,
    pub best_index: u64,
    pub best_solution: StructurePair,
    pub colorings_examined: u64,
    pub values: ObjectiveValues,
}

fn check_caps(inst: &MetricInstance, kind: StructureKind, cfg: &OracleConfig) -> Result<(), OracleError> {
    let n = inst.n_pairs();
    let (cap, name) = match kind {
        StructureKind::SpanningTree => (cfg.mst_pair_cap, "mst"),
        StructureKind::Tour => (cfg.tsp_pair_cap, "tsp"),
        StructureKind::PerfectMatching => (cfg.matching_pair_cap, "matching"),
    };
    if n > cap {
        return Err(OracleError::TooLarge { n_pairs: n, cap, kind: name });
    }
    match kind {
        StructureKind::Tour if n > cfg.solver_caps.tsp => {
            Err(OracleError::ClassTooLarge { size: n, cap: cfg.solver_caps.tsp, kind: name })
        }
        StructureKind::PerfectMatching if n % 2 == 1 => Err(OracleError::OddPairs(n)),
        StructureKind::PerfectMatching if n > cfg.solver_caps.matching => {
            Err(OracleError::ClassTooLarge { size: n, cap: cfg.solver_caps.matching, kind: name })
        }
        _ => Ok(()),
    }
}

/// Value of the best single-class structure: total cost, or heaviest edge
/// when `bottleneck`.
pub fn class_value_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize], kind: StructureKind, bottleneck: bool) -> C {
    match (kind, bottleneck) {
        (StructureKind::SpanningTree, false) => {
            kruskal_raw(m, nodes, 1).iter().fold(C::zero(), |acc, &(u, v)| acc.plus(m.get(u, v)))
        }
        (StructureKind::SpanningTree, true) => {
            kruskal_raw(m, nodes, 1).iter().map(|&(u, v)| m.get(u, v)).max().cloned().unwrap_or_else(C::zero)
        }
        (StructureKind::Tour, false) => held_karp_raw(m, nodes).0,
        (StructureKind::Tour, true) => bottleneck_tour_raw(m, nodes).0,
        (StructureKind::PerfectMatching, false) => matching_dp_raw(m, nodes).0,
        (StructureKind::PerfectMatching, true) => bottleneck_matching_raw(m, nodes).0,
    }
}

fn class_edges_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize], kind: StructureKind, bottleneck: bool) -> Vec<Edge> {
    match (kind, bottleneck) {
        (StructureKind::SpanningTree, _) => kruskal_raw(m, nodes, 1),
        (StructureKind::Tour, false) => tour_edges(&held_karp_raw(m, nodes).1),
        (StructureKind::Tour, true) => tour_edges(&bottleneck_tour_raw(m, nodes).1),
        (StructureKind::PerfectMatching, false) => matching_dp_raw(m, nodes).1,
        (StructureKind::PerfectMatching, true) => bottleneck_matching_raw(m, nodes).1,
    }
}

/// Point id per node: co-located nodes (distance 0, identical rows) share
/// an id, so class values can be cached by the multiset of points.
pub fn colocation_ids(inst: &MetricInstance) -> Vec<u32> {
    let n = inst.n_nodes();
    let mut ids = vec![u32::MAX; n];
    let mut next = 0u32;
    for u in 0..n {
        if ids[u] != u32::MAX {
            continue;
        }
        ids[u] = next;
        for v in u + 1..n {
            if ids[v] == u32::MAX && inst.w(u, v).is_zero() && inst.weights().row(u) == inst.weights().row(v) {
                ids[v] = next;
            }
        }
        next += 1;
    }
    ids
}

fn class_nodes(n_pairs: usize, index: u64, color: Color) -> Vec<usize> {
    let mask = index << 1;
    (0..n_pairs)
        .map(|i| {
            let p_red = (mask >> i) & 1 == 1;
            if p_red == (color == Color::Red) {
                2 * i
            } else {
                2 * i + 1
            }
        })
        .collect()
}

struct Search<'a, C> {
    m: &'a Matrix<C>,
    n_pairs: usize,
    kind: StructureKind,
    objective: Objective,
    ids: &'a [u32],
}

impl<C: Cost> Search<'_, C> {
    fn run(&self, range: Range<u64>) -> (Option<(C, u64)>, u64) {
        let bottleneck = self.objective == Objective::Bottleneck;
        let mut memo: HashMap<Vec<u32>, C> = HashMap::new();
        let mut value = |nodes: Vec<usize>| -> C {
            let mut key: Vec<u32> = nodes.iter().map(|&v| self.ids[v]).collect();
            key.sort_unstable();
            memo.entry(key).or_insert_with(|| class_value_raw(self.m, &nodes, self.kind, bottleneck)).clone()
        };
        let mut best: Option<(C, u64)> = None;
        let mut examined = 0;
        for k in range {
            let b = value(class_nodes(self.n_pairs, k, Color::Blue));
            let r = value(class_nodes(self.n_pairs, k, Color::Red));
            let v = self.objective.combine(&b, &r);
            examined += 1;
            if best.as_ref().is_none_or(|(old, _)| v < *old) {
                best = Some((v, k));
            }
        }
        (best, examined)
    }

    fn run_sharded(&self, total: u64, jobs: usize) -> (C, u64, u64) {
        let jobs = (jobs.max(1) as u64).min(total).max(1);
        let ranges: Vec<Range<u64>> = (0..jobs).map(|j| (total * j / jobs)..(total * (j + 1) / jobs)).collect();
        let parts: Vec<(Option<(C, u64)>, u64)> = if jobs == 1 {
            vec![self.run(0..total)]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(move || self.run(r))).collect();
                handles.into_iter().map(|h| h.join().expect("oracle worker")).collect()
            })
        };
        let examined = parts.iter().map(|p| p.1).sum();
        let (v, k) = parts
            .into_iter()
            .filter_map(|p| p.0)
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("at least one coloring");
        (v, k, examined)
    }
}

/// Exact optimum over all colorings; ties go to the lowest coloring index.
pub fn exact_opt(
    inst: &MetricInstance,
    kind: StructureKind,
    objective: Objective,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    check_caps(inst, kind, cfg)?;
    let ids = colocation_ids(inst);
    let n_pairs = inst.n_pairs();
    let total = coloring_count(n_pairs);
    let (best_index, colorings_examined) = with_costs!(inst, m => {
        let s = Search { m, n_pairs, kind, objective, ids: &ids };
        let (_, k, ex) = s.run_sharded(total, cfg.jobs);
        (k, ex)
    });
    let best_solution = solve_coloring(inst, &coloring_at(n_pairs, best_index), kind, objective);
    let values = ObjectiveValues::of(inst, &best_solution);
    Ok(OracleResult {
        kind,
        objective,
        best_value: values.get(objective).clone(),
        best_index,
        best_solution,
        colorings_examined,
        values,
    })
}

/// Best structures for a fixed coloring.
pub fn solve_coloring(
    inst: &MetricInstance,
    coloring: &Coloring,
    kind: StructureKind,
    objective: Objective,
) -> StructurePair {
    let bottleneck = objective == Objective::Bottleneck;
    let blue = coloring.class(Color::Blue);
    let red = coloring.class(Color::Red);
    let (blue_edges, red_edges) = with_costs!(inst, m => (
        class_edges_raw(m, &blue, kind, bottleneck),
        class_edges_raw(m, &red, kind, bottleneck),
    ));
    StructurePair { coloring: coloring.clone(), blue_edges, red_edges, kind }
}

/// `alg / opt`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ratio {
    Finite(BigRational),
    Infinite,
}

impl Ratio {
    pub fn of(alg: &Weight, opt: &Weight) -> Ratio {
        if opt.is_zero() {
            if alg.is_zero() {
                Ratio::Finite(BigRational::from_integer(1.into()))
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Finite(alg.as_rational() / opt.as_rational())
        }
    }

    pub fn at_most(&self, bound: u64) -> bool {
        match self {
            Ratio::Finite(r) => *r <= BigRational::from_integer(bound.into()),
            Ratio::Infinite => false,
        }
    }

    pub fn decimal(&self) -> String {
        match self {
            Ratio::Finite(r) => crate::weight::decimal(r),
            Ratio::Infinite => "inf".to_string(),
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Ratio::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRecord {
    pub alg_value: Weight,
    pub opt_value: Weight,
    pub ratio: Ratio,
    pub alg_solution: StructurePair,
    pub opt: OracleResult,
}

/// Runs the approximation algorithm for `kind` and the oracle side by side.
pub fn approx_solution(
    inst: &MetricInstance,
    kind: StructureKind,
    plan: &TieBreakPlan,
) -> Result<StructurePair, OracleError> {
    match kind {
        StructureKind::SpanningTree => Ok(approx_2mst(inst, plan)?),
        StructureKind::Tour => Ok(approx_2tsp(inst, plan)?),
        StructureKind::PerfectMatching => Err(OracleError::NoAlgorithm("matching")),
    }
}

pub fn ratio_experiment(
    inst: &MetricInstance,
    kind: StructureKind,
    objective: Objective,
    plan: &TieBreakPlan,
    cfg: &OracleConfig,
) -> Result<RatioRecord, OracleError> {
    let alg_solution = approx_solution(inst, kind, plan)?;
    let opt = exact_opt(inst, kind, objective, cfg)?;
    let alg_value = cost(inst, &alg_solution, objective);
    Ok(RatioRecord {
        ratio: Ratio::of(&alg_value, &opt.best_value),
        opt_value: opt.best_value.clone(),
        alg_value,
        alg_solution,
        opt,
    })
}

/// What the cross-edge lemma promises for a given split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossClaim {
    /// Neither side holds a whole pair.
    NoClaim,
    /// One side holds a pair: at least one cross-edge of weight >= w_x.
    AtLeastOne,
    /// Both sides hold a pair: such a cross-edge in each color.
    OnePerColor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossEdgeAudit {
    pub pairs_in_l: usize,
    pub pairs_in_r: usize,
    pub cross_edges_blue: usize,
    pub cross_edges_red: usize,
    /// Cross-edges with weight at least `w_cross`, per color.
    pub heavy_blue: usize,
    pub heavy_red: usize,
    pub min_cross_weight: Option<Weight>,
    pub claim: CrossClaim,
    pub holds: bool,
}

pub fn cross_edge_audit(inst: &MetricInstance, split: &SplitReport, solution: &StructurePair) -> CrossEdgeAudit {
    let left = |v: usize| split.v_l.binary_search(&v).is_ok();
    let count_side = |want_left: bool| {
        (0..inst.n_pairs()).filter(|&i| left(2 * i) == want_left && left(2 * i + 1) == want_left).count()
    };
    let pairs_in_l = count_side(true);
    let pairs_in_r = count_side(false);
    let cross = |edges: &[Edge]| -> Vec<Edge> { edges.iter().copied().filter(|&(u, v)| left(u) != left(v)).collect() };
    let blue = cross(&solution.blue_edges);
    let red = cross(&solution.red_edges);
    let heavy = |es: &[Edge]| es.iter().filter(|&&(u, v)| *inst.w(u, v) >= split.w_cross).count();
    let (heavy_blue, heavy_red) = (heavy(&blue), heavy(&red));
    let min_cross_weight = blue.iter().chain(&red).map(|&(u, v)| inst.w(u, v).clone()).min();
    let claim = match (pairs_in_l > 0, pairs_in_r > 0) {
        (false, false) => CrossClaim::NoClaim,
        (true, true) => CrossClaim::OnePerColor,
        _ => CrossClaim::AtLeastOne,
    };
    let holds = match claim {
        CrossClaim::NoClaim => true,
        CrossClaim::AtLeastOne => heavy_blue + heavy_red >= 1,
        CrossClaim::OnePerColor => heavy_blue >= 1 && heavy_red >= 1,
    };
    CrossEdgeAudit {
        pairs_in_l,
        pairs_in_r,
        cross_edges_blue: blue.len(),
        cross_edges_red: red.len(),
        heavy_blue,
        heavy_red,
        min_cross_weight,
        claim,
        holds,
    }
}
