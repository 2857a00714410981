//! Split-tree approximation for 2-MST and 2-TSP, and the decomposition
//! bound report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Color, Coloring, Edge, MetricInstance, StructureKind, StructurePair};
use crate::solvers::{euler_preorder, mst, tour_edges, NodeSet, OrderPolicy, SolverError, Tour, Tree};
use crate::weight::{signed, Signed, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("pair {0} is split by the heaviest tree edge; its colors are forced")]
    ForcedPair(usize),
    #[error("plan colors pair {0}, which does not exist")]
    UnknownPair(usize),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The global MST cut at its heaviest edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub tree: Tree,
    pub c_t: Weight,
    /// `(v_L, v_R)`.
    pub cross_edge: Edge,
    pub w_cross: Weight,
    pub w_l: Weight,
    pub w_r: Weight,
    pub v_l: Vec<usize>,
    pub v_r: Vec<usize>,
    pub t_l: Vec<Edge>,
    pub t_r: Vec<Edge>,
    /// Pairs with one member on each side.
    pub lone_pairs: Vec<usize>,
    /// Pairs with both members on the same side.
    pub free_pairs: Vec<usize>,
    pub pair_in_l: bool,
    pub pair_in_r: bool,
}

impl SplitReport {
    pub fn side_of(&self, node: usize) -> Side {
        if self.v_l.binary_search(&node).is_ok() {
            Side::L
        } else {
            Side::R
        }
    }

    pub fn c_t_l(&self, inst: &MetricInstance) -> Weight {
        self.t_l.iter().map(|&(u, v)| inst.w(u, v)).sum()
    }

    pub fn c_t_r(&self, inst: &MetricInstance) -> Weight {
        self.t_r.iter().map(|&(u, v)| inst.w(u, v)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

fn max_w(inst: &MetricInstance, edges: &[Edge]) -> Weight {
    edges.iter().map(|&(u, v)| inst.w(u, v)).max().cloned().unwrap_or_else(Weight::zero)
}

pub fn split_mst(inst: &MetricInstance) -> SplitReport {
    let tree = mst(&NodeSet::all(inst)).expect("instances have at least one pair");
    split_tree(inst, tree)
}

/// Cuts an arbitrary spanning tree of all nodes at its heaviest edge.
pub fn split_tree(inst: &MetricInstance, tree: Tree) -> SplitReport {
    let cross_edge = tree.max_edge(inst).expect("two or more nodes");
    let (v_l, v_r) = tree.split(cross_edge);
    let t_l = tree.edges_within(&v_l);
    let t_r = tree.edges_within(&v_r);
    let mut lone_pairs = Vec::new();
    let mut free_pairs = Vec::new();
    let (mut pair_in_l, mut pair_in_r) = (false, false);
    for i in 0..inst.n_pairs() {
        let p_left = v_l.binary_search(&(2 * i)).is_ok();
        let q_left = v_l.binary_search(&(2 * i + 1)).is_ok();
        if p_left != q_left {
            lone_pairs.push(i);
        } else {
            free_pairs.push(i);
            if p_left {
                pair_in_l = true;
            } else {
                pair_in_r = true;
            }
        }
    }
    SplitReport {
        c_t: tree.cost(inst),
        w_cross: inst.w(cross_edge.0, cross_edge.1).clone(),
        w_l: max_w(inst, &t_l),
        w_r: max_w(inst, &t_r),
        tree,
        cross_edge,
        v_l,
        v_r,
        t_l,
        t_r,
        lone_pairs,
        free_pairs,
        pair_in_l,
        pair_in_r,
    }
}

/// Choices left open by the algorithm.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TieBreakPlan {
    /// Pair index to "p is red" for free pairs. Unlisted free pairs get the
    /// default: `p_i` red iff `i` is odd.
    pub free_pair_colors: BTreeMap<usize, bool>,
    pub euler_policy: OrderPolicy,
    /// Start of the Euler walk; node 0 when absent.
    pub start_node: Option<usize>,
}

/// Lone pairs: the member in `V_L` is blue. Free pairs: plan or default.
pub fn algorithm_coloring(
    inst: &MetricInstance,
    split: &SplitReport,
    plan: &TieBreakPlan,
) -> Result<Coloring, ApproxError> {
    for &i in plan.free_pair_colors.keys() {
        if i >= inst.n_pairs() {
            return Err(ApproxError::UnknownPair(i));
        }
        if split.lone_pairs.binary_search(&i).is_ok() {
            return Err(ApproxError::ForcedPair(i));
        }
    }
    let bits = (0..inst.n_pairs())
        .map(|i| {
            if split.lone_pairs.binary_search(&i).is_ok() {
                // p in V_L means p blue.
                split.side_of(2 * i) == Side::R
            } else {
                plan.free_pair_colors.get(&i).copied().unwrap_or(i % 2 == 1)
            }
        })
        .collect();
    Ok(Coloring::new(bits))
}

pub fn approx_2mst(inst: &MetricInstance, plan: &TieBreakPlan) -> Result<StructurePair, ApproxError> {
    let split = split_mst(inst);
    let coloring = algorithm_coloring(inst, &split, plan)?;
    let blue = mst(&NodeSet::new(inst, coloring.class(Color::Blue))?)?;
    let red = mst(&NodeSet::new(inst, coloring.class(Color::Red))?)?;
    Ok(StructurePair { blue_edges: blue.edges, red_edges: red.edges, coloring, kind: StructureKind::SpanningTree })
}

/// Result of the tour variant, with the full tour it was shortcut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TspRun {
    pub pair: StructurePair,
    pub full_tour: Tour,
    pub blue_tour: Tour,
    pub red_tour: Tour,
}

pub fn approx_2tsp_run(inst: &MetricInstance, plan: &TieBreakPlan) -> Result<TspRun, ApproxError> {
    let split = split_mst(inst);
    let coloring = algorithm_coloring(inst, &split, plan)?;
    let start = plan.start_node.unwrap_or(0);
    let full = Tour { order: euler_preorder(&split.tree, start, &plan.euler_policy)? };
    let colors = coloring.node_colors();
    let restrict = |c: Color| Tour { order: full.order.iter().copied().filter(|&v| colors[v] == c).collect() };
    let blue_tour = restrict(Color::Blue);
    let red_tour = restrict(Color::Red);
    Ok(TspRun {
        pair: StructurePair {
            coloring,
            blue_edges: tour_edges(&blue_tour.order),
            red_edges: tour_edges(&red_tour.order),
            kind: StructureKind::Tour,
        },
        full_tour: full,
        blue_tour,
        red_tour,
    })
}

pub fn approx_2tsp(inst: &MetricInstance, plan: &TieBreakPlan) -> Result<StructurePair, ApproxError> {
    approx_2tsp_run(inst, plan).map(|r| r.pair)
}

/// Class costs and the slack of every applicable decomposition inequality.
/// Slacks `c` and `d` exist only when one side of the split is
/// monochromatic; if both are, the smaller slack is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub c_t: Weight,
    pub c_tb: Weight,
    pub c_tr: Weight,
    pub w_l: Weight,
    pub w_cross: Weight,
    pub w_r: Weight,
    pub slack_a: Signed,
    pub slack_b: Signed,
    pub slack_c: Option<Signed>,
    pub slack_d: Option<Signed>,
}

impl DecompositionReport {
    pub fn all_nonnegative(&self) -> bool {
        use num_traits::Signed as _;
        [Some(&self.slack_a), Some(&self.slack_b), self.slack_c.as_ref(), self.slack_d.as_ref()]
            .into_iter()
            .flatten()
            .all(|s| !s.is_negative())
    }
}

fn class_mst_cost(inst: &MetricInstance, nodes: Vec<usize>) -> Weight {
    if nodes.is_empty() {
        return Weight::zero();
    }
    mst(&NodeSet::new(inst, nodes).expect("valid class")).expect("non-empty").cost(inst)
}

/// Node colors need not respect the pairs.
pub fn decomposition_report(inst: &MetricInstance, colors: &[Color]) -> DecompositionReport {
    let split = split_mst(inst);
    decomposition_for_split(inst, &split, colors)
}

pub fn decomposition_for_split(inst: &MetricInstance, split: &SplitReport, colors: &[Color]) -> DecompositionReport {
    assert_eq!(colors.len(), inst.n_nodes(), "one color per node");
    let class = |c: Color| (0..inst.n_nodes()).filter(|&v| colors[v] == c).collect::<Vec<_>>();
    let c_tb = class_mst_cost(inst, class(Color::Blue));
    let c_tr = class_mst_cost(inst, class(Color::Red));
    let sum = signed(&c_tb) + signed(&c_tr);
    let max = signed(&c_tb.clone().max(c_tr.clone()));
    let heavy = signed(&split.w_l) + signed(&split.w_cross) + signed(&split.w_r);
    let c_t = signed(&split.c_t);
    let three = Signed::from_integer(3.into());
    let two = Signed::from_integer(2.into());
    let slack_a = &three * &c_t - &heavy - &sum;
    let slack_b = &two * &c_t - &heavy - &max;

    let mono = |side: &[usize]| side.iter().all(|&v| colors[v] == colors[side[0]]);
    let c_tl = signed(&split.c_t_l(inst));
    let c_trr = signed(&split.c_t_r(inst));
    let w_x = signed(&split.w_cross);
    let mut cs: Vec<Signed> = Vec::new();
    let mut ds: Vec<Signed> = Vec::new();
    let mut push = |mono_cost: &Signed, other_cost: &Signed, other_w: &Weight| {
        let base = mono_cost + &w_x - signed(other_w);
        cs.push(&base + &three * other_cost - &sum);
        ds.push(&base + &two * other_cost - &max);
    };
    if mono(&split.v_l) {
        push(&c_tl, &c_trr, &split.w_r);
    }
    if mono(&split.v_r) {
        push(&c_trr, &c_tl, &split.w_l);
    }
    DecompositionReport {
        c_t: split.c_t.clone(),
        c_tb,
        c_tr,
        w_l: split.w_l.clone(),
        w_cross: split.w_cross.clone(),
        w_r: split.w_r.clone(),
        slack_a,
        slack_b,
        slack_c: cs.into_iter().min(),
        slack_d: ds.into_iter().min(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{cost, validate_solution, Objective};
    use crate::matrix::Matrix;

    fn inst_from(n: usize, f: impl Fn(usize, usize) -> u64) -> MetricInstance {
        let m =
            Matrix::from_fn(n, |u, v| if u == v { Weight::zero() } else { Weight::from_int(f(u.min(v), u.max(v))) });
        MetricInstance::new(n / 2, m).unwrap()
    }

    #[test]
    fn single_pair_split() {
        let inst = inst_from(2, |_, _| 5);
        let s = split_mst(&inst);
        assert_eq!(s.w_cross, Weight::from_int(5));
        assert_eq!((s.v_l.len(), s.v_r.len()), (1, 1));
        assert_eq!(s.w_l, Weight::zero());
        assert_eq!(s.w_r, Weight::zero());
        assert_eq!(s.lone_pairs, vec![0]);
    }

    #[test]
    fn colocated_pair_gives_zero() {
        let inst = inst_from(2, |_, _| 0);
        let pair = approx_2mst(&inst, &TieBreakPlan::default()).unwrap();
        assert_eq!(validate_solution(&inst, &pair), Ok(()));
        assert_eq!(cost(&inst, &pair, Objective::MinSum), Weight::zero());
    }

    #[test]
    fn unit_two_pairs() {
        let inst = inst_from(4, |_, _| 1);
        let pair = approx_2mst(&inst, &TieBreakPlan::default()).unwrap();
        assert_eq!(validate_solution(&inst, &pair), Ok(()));
        assert_eq!(cost(&inst, &pair, Objective::MinSum), Weight::from_int(2));
    }

    #[test]
    fn colocated_tours_cost_zero() {
        let inst = inst_from(4, |_, _| 0);
        let pair = approx_2tsp(&inst, &TieBreakPlan::default()).unwrap();
        assert_eq!(validate_solution(&inst, &pair), Ok(()));
        assert_eq!(cost(&inst, &pair, Objective::MinSum), Weight::zero());
    }

    #[test]
    fn lone_member_in_left_is_blue() {
        // Two clusters {0,2} and {1,3} far apart: both pairs are lone.
        let inst = inst_from(4, |u, v| if u % 2 == v % 2 { 1 } else { 10 });
        let s = split_mst(&inst);
        assert_eq!(s.lone_pairs, vec![0, 1]);
        let c = algorithm_coloring(&inst, &s, &TieBreakPlan::default()).unwrap();
        for v in &s.v_l {
            assert_eq!(c.node_color(*v), Color::Blue);
        }
        let mut plan = TieBreakPlan::default();
        plan.free_pair_colors.insert(0, true);
        assert_eq!(algorithm_coloring(&inst, &s, &plan), Err(ApproxError::ForcedPair(0)));
    }

    #[test]
    fn monochromatic_report() {
        let inst = inst_from(6, |u, v| (u + v) as u64 % 3 + 1);
        let r = decomposition_report(&inst, &[Color::Blue; 6]);
        assert_eq!(r.c_tr, Weight::zero());
        assert_eq!(r.c_tb, r.c_t);
        let expected =
            signed(&r.c_t) * Signed::from_integer(2.into()) - signed(&r.w_l) - signed(&r.w_cross) - signed(&r.w_r);
        assert_eq!(r.slack_a, expected);
        assert!(r.all_nonnegative());
        assert!(r.slack_c.is_some());
    }

    #[test]
    fn plan_serializes() {
        let mut plan = TieBreakPlan { euler_policy: OrderPolicy::IndexDescending, ..Default::default() };
        plan.free_pair_colors.insert(3, true);
        let text = serde_json::to_string(&plan).unwrap();
        let back: TieBreakPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(back, plan);
        let empty: TieBreakPlan = serde_json::from_str("{}").unwrap();
        assert_eq!(empty, TieBreakPlan::default());
    }
}
