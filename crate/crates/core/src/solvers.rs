//! Exact single-class solvers: MST, minimum forests, Held-Karp TSP,
//! subset-DP perfect matching, bottleneck variants and Euler shortcutting.
//!
//! The `*_raw` functions work on any [`Cost`] matrix and a list of node ids;
//! the [`NodeSet`] wrappers pick the integer fast path when it exists.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Edge, MetricInstance};
use crate::matrix::Matrix;
use crate::weight::{Cost, Weight};
use crate::with_costs;

pub const DEFAULT_TSP_CAP: usize = 18;
pub const DEFAULT_MATCHING_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("empty node set")]
    EmptyNodeSet,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("node {0} listed twice")]
    DuplicateNode(usize),
    #[error("k = {k} outside 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("{size} nodes exceed the solver cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("perfect matching needs an even node count, got {0}")]
    OddSet(usize),
    #[error("start node {0} is not in the tree")]
    StartNotInTree(usize),
}

/// Size limits for the exponential solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverCaps {
    pub tsp: usize,
    pub matching: usize,
}

impl Default for SolverCaps {
    fn default() -> Self {
        SolverCaps { tsp: DEFAULT_TSP_CAP, matching: DEFAULT_MATCHING_CAP }
    }
}

/// A sorted set of distinct nodes of one instance.
#[derive(Debug, Clone)]
pub struct NodeSet<'a> {
    inst: &'a MetricInstance,
    nodes: Vec<usize>,
}

impl<'a> NodeSet<'a> {
    pub fn new(inst: &'a MetricInstance, mut nodes: Vec<usize>) -> Result<Self, SolverError> {
        nodes.sort_unstable();
        for w in nodes.windows(2) {
            if w[0] == w[1] {
                return Err(SolverError::DuplicateNode(w[0]));
            }
        }
        if let Some(&v) = nodes.last() {
            if v >= inst.n_nodes() {
                return Err(SolverError::NodeOutOfRange(v));
            }
        }
        Ok(NodeSet { inst, nodes })
    }

    pub fn all(inst: &'a MetricInstance) -> Self {
        NodeSet { inst, nodes: inst.all_nodes() }
    }

    pub fn instance(&self) -> &'a MetricInstance {
        self.inst
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Spanning tree (or forest) edges over a node list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub nodes: Vec<usize>,
    pub edges: Vec<Edge>,
    pub root: Option<usize>,
}

impl Tree {
    pub fn cost(&self, inst: &MetricInstance) -> Weight {
        self.edges.iter().map(|&(u, v)| inst.w(u, v)).sum()
    }

    /// Heaviest edge; among equal weights the lexicographically largest
    /// `(min, max)` endpoint pair, i.e. the last edge in Kruskal order.
    pub fn max_edge(&self, inst: &MetricInstance) -> Option<Edge> {
        self.edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .max_by(|a, b| inst.w(a.0, a.1).cmp(inst.w(b.0, b.1)).then(a.cmp(b)))
    }

    pub fn max_weight(&self, inst: &MetricInstance) -> Weight {
        self.max_edge(inst).map(|(u, v)| inst.w(u, v).clone()).unwrap_or_else(Weight::zero)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Node sets of the two components left after deleting `edge`; the first
    /// contains `edge.0`.
    pub fn split(&self, edge: Edge) -> (Vec<usize>, Vec<usize>) {
        let (a, b) = edge;
        let rest: Vec<Edge> =
            self.edges.iter().copied().filter(|&(u, v)| (u.min(v), u.max(v)) != (a.min(b), a.max(b))).collect();
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &(u, v) in &rest {
                let y = if u == x {
                    v
                } else if v == x {
                    u
                } else {
                    continue;
                };
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let left: Vec<usize> = self.nodes.iter().copied().filter(|v| seen.contains(v)).collect();
        let right: Vec<usize> = self.nodes.iter().copied().filter(|v| !seen.contains(v)).collect();
        (left, right)
    }

    /// Edges of the tree with both endpoints in `side`.
    pub fn edges_within(&self, side: &[usize]) -> Vec<Edge> {
        let set: BTreeSet<usize> = side.iter().copied().collect();
        self.edges.iter().copied().filter(|(u, v)| set.contains(u) && set.contains(v)).collect()
    }
}

/// Cyclic node order. One node gives no edges; two nodes give the doubled
/// edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    pub order: Vec<usize>,
}

impl Tour {
    pub fn edges(&self) -> Vec<Edge> {
        tour_edges(&self.order)
    }

    pub fn cost(&self, inst: &MetricInstance) -> Weight {
        self.edges().iter().map(|&(u, v)| inst.w(u, v)).sum()
    }
}

pub fn tour_edges(order: &[usize]) -> Vec<Edge> {
    match order.len() {
        0 | 1 => Vec::new(),
        2 => vec![(order[0], order[1]), (order[1], order[0])],
        k => (0..k).map(|i| (order[i], order[(i + 1) % k])).collect(),
    }
}

fn tour_cost_raw<C: Cost>(m: &Matrix<C>, order: &[usize]) -> C {
    tour_edges(order).iter().fold(C::zero(), |acc, &(u, v)| acc.plus(m.get(u, v)))
}

fn edge_max_raw<C: Cost>(m: &Matrix<C>, edges: &[Edge]) -> C {
    edges.iter().map(|&(u, v)| m.get(u, v)).max().cloned().unwrap_or_else(C::zero)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal on the complete graph over `nodes`, stopping once `components`
/// trees remain. Edges come back in insertion order, i.e. sorted by
/// `(weight, min endpoint, max endpoint)`.
pub fn kruskal_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize], components: usize) -> Vec<Edge> {
    let k = nodes.len();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j));
        }
    }
    let key = |&(i, j): &(usize, usize)| {
        let (u, v) = (nodes[i].min(nodes[j]), nodes[i].max(nodes[j]));
        (m.get(u, v), u, v)
    };
    edges.sort_by(|a, b| key(a).cmp(&key(b)));
    let target = k.saturating_sub(components);
    let mut dsu = Dsu::new(k);
    let mut out = Vec::with_capacity(target);
    for (i, j) in edges {
        if out.len() >= target {
            break;
        }
        if dsu.union(i, j) {
            let (u, v) = (nodes[i].min(nodes[j]), nodes[i].max(nodes[j]));
            out.push((u, v));
        }
    }
    out
}

pub fn mst_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> (C, Vec<Edge>) {
    let edges = kruskal_raw(m, nodes, 1);
    let c = edges.iter().fold(C::zero(), |acc, &(u, v)| acc.plus(m.get(u, v)));
    (c, edges)
}

/// Minimum Hamiltonian cycle by Held-Karp. Degenerate sizes follow the tour
/// conventions.
pub fn held_karp_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> (C, Vec<usize>) {
    let k = nodes.len();
    if k <= 2 {
        return (tour_cost_raw(m, nodes), nodes.to_vec());
    }
    let r = k - 1;
    let full = (1usize << r) - 1;
    let w = |a: usize, b: usize| m.get(nodes[a], nodes[b]);
    let mut dp: Vec<Option<C>> = vec![None; (full + 1) * r];
    let mut parent: Vec<u8> = vec![u8::MAX; (full + 1) * r];
    for j in 0..r {
        dp[(1 << j) * r + j] = Some(w(0, j + 1).clone());
    }
    for mask in 1..=full {
        for j in 0..r {
            if mask & (1 << j) == 0 {
                continue;
            }
            let Some(cur) = dp[mask * r + j].clone() else { continue };
            let mut rest = full & !mask;
            while rest != 0 {
                let nxt = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cand = cur.plus(w(j + 1, nxt + 1));
                let slot = (mask | (1 << nxt)) * r + nxt;
                if dp[slot].as_ref().is_none_or(|old| cand < *old) {
                    dp[slot] = Some(cand);
                    parent[slot] = j as u8;
                }
            }
        }
    }
    let mut best: Option<(C, usize)> = None;
    for j in 0..r {
        if let Some(c) = &dp[full * r + j] {
            let total = c.plus(w(j + 1, 0));
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, j));
            }
        }
    }
    let (cost, mut j) = best.expect("complete graph has a tour");
    let mut mask = full;
    let mut rev = Vec::with_capacity(k);
    loop {
        rev.push(nodes[j + 1]);
        let p = parent[mask * r + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    rev.push(nodes[0]);
    rev.reverse();
    (cost, rev)
}

/// Minimum perfect matching by DP over subsets, always pairing the lowest
/// unmatched node next. `nodes.len()` must be even.
pub fn matching_dp_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> (C, Vec<Edge>) {
    let k = nodes.len();
    assert!(k.is_multiple_of(2), "odd matching set");
    if k == 0 {
        return (C::zero(), Vec::new());
    }
    let full = (1usize << k) - 1;
    let mut dp: Vec<Option<C>> = vec![None; full + 1];
    let mut choice: Vec<(u8, u8)> = vec![(0, 0); full + 1];
    dp[0] = Some(C::zero());
    for mask in 0..full {
        let Some(cur) = dp[mask].clone() else { continue };
        let i = (!mask).trailing_zeros() as usize;
        for j in i + 1..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let next = mask | (1 << i) | (1 << j);
            let cand = cur.plus(m.get(nodes[i], nodes[j]));
            if dp[next].as_ref().is_none_or(|old| cand < *old) {
                dp[next] = Some(cand);
                choice[next] = (i as u8, j as u8);
            }
        }
    }
    let cost = dp[full].clone().expect("complete graph has a perfect matching");
    let mut edges = Vec::with_capacity(k / 2);
    let mut mask = full;
    while mask != 0 {
        let (i, j) = (choice[mask].0 as usize, choice[mask].1 as usize);
        edges.push((nodes[i].min(nodes[j]), nodes[i].max(nodes[j])));
        mask &= !((1 << i) | (1 << j));
    }
    edges.sort_unstable();
    (cost, edges)
}

fn threshold_candidates<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> Vec<C> {
    let mut ws: Vec<C> = Vec::new();
    for (a, &u) in nodes.iter().enumerate() {
        for &v in &nodes[a + 1..] {
            ws.push(m.get(u, v).clone());
        }
    }
    ws.sort();
    ws.dedup();
    ws
}

/// Smallest index in `0..len` for which `feasible` holds, assuming
/// monotonicity and that the last index is feasible.
fn first_feasible<T>(len: usize, mut feasible: impl FnMut(usize) -> Option<T>) -> (usize, T) {
    let mut lo = 0;
    let mut hi = len - 1;
    let mut best = feasible(hi).expect("largest threshold is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(mid) {
            Some(t) => {
                hi = mid;
                best = t;
            }
            None => lo = mid + 1,
        }
    }
    (hi, best)
}

/// Hamiltonian cycle on `nodes` using only edges allowed by `adj`, if any
/// (`nodes.len() >= 3`). `adj[i]` is a bitmask over local indices.
fn ham_cycle(adj: &[u32], nodes: &[usize]) -> Option<Vec<usize>> {
    let k = nodes.len();
    let r = k - 1;
    let full = (1usize << r) - 1;
    // reach[mask] has bit j when a path 0 -> ... -> j+1 covers exactly mask.
    let mut reach: Vec<u32> = vec![0; full + 1];
    for j in 0..r {
        if adj[0] & (1 << (j + 1)) != 0 {
            reach[1 << j] |= 1 << j;
        }
    }
    for mask in 1..=full {
        let mut ends = reach[mask];
        while ends != 0 {
            let j = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut nxt = (adj[j + 1] >> 1) & (full as u32) & !(mask as u32);
            while nxt != 0 {
                let t = nxt.trailing_zeros() as usize;
                nxt &= nxt - 1;
                reach[mask | (1 << t)] |= 1 << t;
            }
        }
    }
    let closing = reach[full] & (adj[0] >> 1);
    if closing == 0 {
        return None;
    }
    let mut j = closing.trailing_zeros() as usize;
    let mut mask = full;
    let mut rev = vec![nodes[j + 1]];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << j);
        let cands = reach[prev_mask] & (adj[j + 1] >> 1);
        let p = cands.trailing_zeros() as usize;
        rev.push(nodes[p + 1]);
        mask = prev_mask;
        j = p;
    }
    rev.push(nodes[0]);
    rev.reverse();
    Some(rev)
}

/// Tour minimizing its heaviest edge, by threshold search over the distinct
/// class weights with a Hamiltonicity DP at each threshold.
pub fn bottleneck_tour_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> (C, Vec<usize>) {
    let k = nodes.len();
    if k <= 2 {
        return (edge_max_raw(m, &tour_edges(nodes)), nodes.to_vec());
    }
    let ws = threshold_candidates(m, nodes);
    let (idx, order) = first_feasible(ws.len(), |i| {
        let t = &ws[i];
        let adj: Vec<u32> = (0..k)
            .map(|a| (0..k).filter(|&b| b != a && m.get(nodes[a], nodes[b]) <= t).fold(0u32, |acc, b| acc | (1 << b)))
            .collect();
        ham_cycle(&adj, nodes)
    });
    (ws[idx].clone(), order)
}

fn perfect_matching_within(adj: &[u32], nodes: &[usize]) -> Option<Vec<Edge>> {
    let k = nodes.len();
    let full = (1usize << k) - 1;
    let partners = |mask: usize| -> (usize, u32) {
        let i = (!mask).trailing_zeros() as usize;
        (i, adj[i] & !(mask as u32) & !((1u32 << (i + 1)) - 1))
    };
    // done[mask]: the nodes outside mask can be perfectly matched.
    let mut done = vec![false; full + 1];
    done[full] = true;
    for mask in (0..full).rev() {
        let (i, mut cands) = partners(mask);
        while cands != 0 {
            let j = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if done[mask | (1 << i) | (1 << j)] {
                done[mask] = true;
                break;
            }
        }
    }
    if !done[0] {
        return None;
    }
    let mut mask = 0usize;
    let mut edges = Vec::with_capacity(k / 2);
    while mask != full {
        let (i, mut cands) = partners(mask);
        let mut picked = None;
        while cands != 0 {
            let j = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if done[mask | (1 << i) | (1 << j)] {
                picked = Some(j);
                break;
            }
        }
        let j = picked.expect("feasible matching");
        edges.push((nodes[i].min(nodes[j]), nodes[i].max(nodes[j])));
        mask |= (1 << i) | (1 << j);
    }
    edges.sort_unstable();
    Some(edges)
}

/// Perfect matching minimizing its heaviest edge, by threshold search.
pub fn bottleneck_matching_raw<C: Cost>(m: &Matrix<C>, nodes: &[usize]) -> (C, Vec<Edge>) {
    let k = nodes.len();
    assert!(k.is_multiple_of(2), "odd matching set");
    if k == 0 {
        return (C::zero(), Vec::new());
    }
    let ws = threshold_candidates(m, nodes);
    let (idx, edges) = first_feasible(ws.len(), |i| {
        let t = &ws[i];
        let adj: Vec<u32> = (0..k)
            .map(|a| (0..k).filter(|&b| b != a && m.get(nodes[a], nodes[b]) <= t).fold(0u32, |acc, b| acc | (1 << b)))
            .collect();
        perfect_matching_within(&adj, nodes)
    });
    (ws[idx].clone(), edges)
}

pub fn mst(set: &NodeSet) -> Result<Tree, SolverError> {
    if set.is_empty() {
        return Err(SolverError::EmptyNodeSet);
    }
    let edges = with_costs!(set.inst, m => kruskal_raw(m, &set.nodes, 1));
    Ok(Tree { nodes: set.nodes.clone(), edges, root: None })
}

/// Lightest forest with exactly `|nodes| - k` edges.
pub fn min_forest(set: &NodeSet, k: usize) -> Result<Vec<Edge>, SolverError> {
    if k == 0 || k > set.len() {
        return Err(SolverError::BadK { k, n: set.len() });
    }
    Ok(with_costs!(set.inst, m => kruskal_raw(m, &set.nodes, k)))
}

pub fn exact_tsp(set: &NodeSet, cap: usize) -> Result<Tour, SolverError> {
    if set.is_empty() {
        return Err(SolverError::EmptyNodeSet);
    }
    if set.len() > cap {
        return Err(SolverError::TooLarge { size: set.len(), cap });
    }
    let order = with_costs!(set.inst, m => held_karp_raw(m, &set.nodes).1);
    Ok(Tour { order })
}

pub fn min_perfect_matching(set: &NodeSet, cap: usize) -> Result<Vec<Edge>, SolverError> {
    if set.len() % 2 == 1 {
        return Err(SolverError::OddSet(set.len()));
    }
    if set.len() > cap {
        return Err(SolverError::TooLarge { size: set.len(), cap });
    }
    Ok(with_costs!(set.inst, m => matching_dp_raw(m, &set.nodes).1))
}

pub fn bottleneck_tsp(set: &NodeSet, cap: usize) -> Result<Tour, SolverError> {
    if set.is_empty() {
        return Err(SolverError::EmptyNodeSet);
    }
    if set.len() > cap {
        return Err(SolverError::TooLarge { size: set.len(), cap });
    }
    let order = with_costs!(set.inst, m => bottleneck_tour_raw(m, &set.nodes).1);
    Ok(Tour { order })
}

pub fn bottleneck_matching(set: &NodeSet, cap: usize) -> Result<Vec<Edge>, SolverError> {
    if set.len() % 2 == 1 {
        return Err(SolverError::OddSet(set.len()));
    }
    if set.len() > cap {
        return Err(SolverError::TooLarge { size: set.len(), cap });
    }
    Ok(with_costs!(set.inst, m => bottleneck_matching_raw(m, &set.nodes).1))
}

/// Child order used when walking a doubled tree.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPolicy {
    #[default]
    IndexAscending,
    IndexDescending,
    /// `rank[v]` for every node of the instance; lower rank is visited first,
    /// ties by index.
    ExplicitPermutation(Vec<usize>),
}

impl OrderPolicy {
    fn sort(&self, children: &mut [usize]) {
        match self {
            OrderPolicy::IndexAscending => children.sort_unstable(),
            OrderPolicy::IndexDescending => children.sort_unstable_by(|a, b| b.cmp(a)),
            OrderPolicy::ExplicitPermutation(rank) => {
                children.sort_unstable_by_key(|&c| (rank.get(c).copied().unwrap_or(usize::MAX), c))
            }
        }
    }
}

/// Preorder of `tree` from `start` with children ordered by `policy`: the
/// first-visit sequence of the Euler circuit of the doubled tree.
pub fn euler_preorder(tree: &Tree, start: usize, policy: &OrderPolicy) -> Result<Vec<usize>, SolverError> {
    if !tree.nodes.contains(&start) {
        return Err(SolverError::StartNotInTree(start));
    }
    let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = tree.nodes.iter().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in &tree.edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut order = Vec::with_capacity(tree.nodes.len());
    let mut visited = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        if !visited.insert(x) {
            continue;
        }
        order.push(x);
        let mut kids: Vec<usize> = adj[&x].iter().copied().filter(|c| !visited.contains(c)).collect();
        policy.sort(&mut kids);
        for &c in kids.iter().rev() {
            stack.push(c);
        }
    }
    Ok(order)
}

/// Doubles the tree, walks its Euler circuit from `start` and keeps the
/// first visits of nodes in `subset`, preserving their order.
pub fn euler_shortcut(tree: &Tree, start: usize, subset: &[usize], policy: &OrderPolicy) -> Result<Tour, SolverError> {
    let keep: BTreeSet<usize> = subset.iter().copied().collect();
    let order = euler_preorder(tree, start, policy)?.into_iter().filter(|v| keep.contains(v)).collect();
    Ok(Tour { order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::MetricInstance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst_from(n: usize, f: impl Fn(usize, usize) -> u64) -> MetricInstance {
        let m =
            Matrix::from_fn(n, |u, v| if u == v { Weight::zero() } else { Weight::from_int(f(u.min(v), u.max(v))) });
        MetricInstance::new(n / 2, m).unwrap()
    }

    fn random_inst(n: usize, seed: u64) -> MetricInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = vec![vec![0u64; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let x = rng.gen_range(5..=10);
                w[u][v] = x;
                w[v][u] = x;
            }
        }
        inst_from(n, |u, v| w[u][v])
    }

    fn unit(n: usize) -> MetricInstance {
        inst_from(n, |_, _| 1)
    }

    #[test]
    fn mst_of_single_node_is_empty() {
        let inst = unit(2);
        let set = NodeSet::new(&inst, vec![1]).unwrap();
        let t = mst(&set).unwrap();
        assert!(t.edges.is_empty());
        assert_eq!(t.cost(&inst), Weight::zero());
    }

    #[test]
    fn unit_mst_uses_lexicographic_star() {
        let inst = unit(4);
        let t = mst(&NodeSet::all(&inst)).unwrap();
        assert_eq!(t.edges, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(t.cost(&inst), Weight::from_int(3));
    }

    #[test]
    fn empty_set_errors() {
        let inst = unit(2);
        let set = NodeSet::new(&inst, vec![]).unwrap();
        assert_eq!(mst(&set), Err(SolverError::EmptyNodeSet));
        assert!(NodeSet::new(&inst, vec![0, 0]).is_err());
        assert!(NodeSet::new(&inst, vec![5]).is_err());
    }

    #[test]
    fn min_forest_limits() {
        let inst = random_inst(6, 1);
        let set = NodeSet::all(&inst);
        assert!(min_forest(&set, 6).unwrap().is_empty());
        assert_eq!(min_forest(&set, 1).unwrap(), mst(&set).unwrap().edges);
        assert!(min_forest(&set, 0).is_err());
        assert!(min_forest(&set, 7).is_err());
    }

    #[test]
    fn triangle_and_pair_tours() {
        let inst = unit(4);
        let set = NodeSet::new(&inst, vec![0, 1, 2]).unwrap();
        assert_eq!(exact_tsp(&set, 18).unwrap().cost(&inst), Weight::from_int(3));
        let inst = inst_from(2, |_, _| 7);
        let t = exact_tsp(&NodeSet::all(&inst), 18).unwrap();
        assert_eq!(t.cost(&inst), Weight::from_int(14));
        assert!(matches!(
            exact_tsp(&NodeSet::all(&random_inst(20, 3)), 18),
            Err(SolverError::TooLarge { size: 20, cap: 18 })
        ));
    }

    #[test]
    fn forced_matching() {
        let inst = inst_from(4, |u, v| if (u, v) == (0, 1) || (u, v) == (2, 3) { 1 } else { 2 });
        let m = min_perfect_matching(&NodeSet::all(&inst), 20).unwrap();
        assert_eq!(m, vec![(0, 1), (2, 3)]);
        let inst2 = inst_from(2, |_, _| 9);
        assert_eq!(min_perfect_matching(&NodeSet::all(&inst2), 20).unwrap(), vec![(0, 1)]);
        let odd = NodeSet::new(&inst, vec![0, 1, 2]).unwrap();
        assert_eq!(min_perfect_matching(&odd, 20), Err(SolverError::OddSet(3)));
    }

    #[test]
    fn path_tree_shortcut() {
        let inst = unit(4);
        let tree = Tree { nodes: vec![0, 1, 2], edges: vec![(0, 1), (1, 2)], root: None };
        let t = euler_shortcut(&tree, 0, &[0, 1, 2], &OrderPolicy::IndexAscending).unwrap();
        assert_eq!(t.order, vec![0, 1, 2]);
        assert!(t.cost(&inst) <= &tree.cost(&inst) * 2);
        let single = euler_shortcut(&tree, 0, &[2], &OrderPolicy::IndexAscending).unwrap();
        assert_eq!(single.cost(&inst), Weight::zero());
        assert_eq!(euler_shortcut(&tree, 3, &[0], &OrderPolicy::IndexAscending), Err(SolverError::StartNotInTree(3)));
    }

    #[test]
    fn policies_change_child_order() {
        let tree = Tree { nodes: vec![0, 1, 2, 3], edges: vec![(0, 1), (0, 2), (0, 3)], root: None };
        let all = [0, 1, 2, 3];
        let asc = euler_shortcut(&tree, 0, &all, &OrderPolicy::IndexAscending).unwrap();
        let desc = euler_shortcut(&tree, 0, &all, &OrderPolicy::IndexDescending).unwrap();
        let perm = euler_shortcut(&tree, 0, &all, &OrderPolicy::ExplicitPermutation(vec![0, 2, 0, 1])).unwrap();
        assert_eq!(asc.order, vec![0, 1, 2, 3]);
        assert_eq!(desc.order, vec![0, 3, 2, 1]);
        assert_eq!(perm.order, vec![0, 2, 3, 1]);
    }

    #[test]
    fn bottleneck_solvers_small() {
        let inst = inst_from(4, |u, v| if (u, v) == (0, 1) || (u, v) == (2, 3) { 1 } else { 2 });
        let set = NodeSet::all(&inst);
        let m = bottleneck_matching(&set, 20).unwrap();
        assert_eq!(m, vec![(0, 1), (2, 3)]);
        let t = bottleneck_tsp(&set, 18).unwrap();
        assert_eq!(t.order.len(), 4);
        let max = t.edges().iter().map(|&(u, v)| inst.w(u, v).clone()).max().unwrap();
        assert_eq!(max, Weight::from_int(2));
    }

    #[test]
    fn split_components() {
        let tree = Tree { nodes: vec![0, 1, 2, 3], edges: vec![(0, 1), (1, 2), (2, 3)], root: None };
        assert_eq!(tree.split((1, 2)), (vec![0, 1], vec![2, 3]));
        assert_eq!(tree.split((2, 1)), (vec![2, 3], vec![0, 1]));
    }
}
