//! Brute-force reference implementations, independent of the library solvers.

#![allow(dead_code)]

use redblue::instance::Edge;
use redblue::{Color, Coloring, MetricInstance, Objective, StructureKind, Weight};

pub fn wt(inst: &MetricInstance, u: usize, v: usize) -> Weight {
    inst.w(u, v).clone()
}

/// Every labeled tree on `nodes`, decoded from Prüfer sequences.
pub fn all_trees(nodes: &[usize]) -> Vec<Vec<Edge>> {
    let k = nodes.len();
    if k <= 1 {
        return vec![Vec::new()];
    }
    if k == 2 {
        return vec![vec![(nodes[0], nodes[1])]];
    }
    let mut out = Vec::new();
    let total = k.pow(k as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(k - 2);
        let mut c = code;
        for _ in 0..k - 2 {
            seq.push(c % k);
            c /= k;
        }
        let mut degree = vec![1; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..k).find(|&i| degree[i] == 1).unwrap();
            edges.push((nodes[leaf], nodes[s]));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&i| degree[i] == 1).collect();
        edges.push((nodes[rest[0]], nodes[rest[1]]));
        out.push(edges);
    }
    out
}

/// Every cyclic order of `nodes` with the first node fixed.
pub fn all_cycles(nodes: &[usize]) -> Vec<Vec<usize>> {
    fn permute(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            permute(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let Some((&first, tail)) = nodes.split_first() else { return vec![Vec::new()] };
    let mut out = Vec::new();
    permute(&mut vec![first], &mut tail.to_vec(), &mut out);
    out
}

/// Every perfect matching of `nodes`.
pub fn all_matchings(nodes: &[usize]) -> Vec<Vec<Edge>> {
    let Some((&first, rest)) = nodes.split_first() else { return vec![Vec::new()] };
    let mut out = Vec::new();
    for i in 0..rest.len() {
        let others: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        for mut m in all_matchings(&others) {
            m.push((first, rest[i]));
            out.push(m);
        }
    }
    out
}

pub fn cycle_edges(order: &[usize]) -> Vec<Edge> {
    match order.len() {
        0 | 1 => Vec::new(),
        2 => vec![(order[0], order[1]), (order[1], order[0])],
        k => (0..k).map(|i| (order[i], order[(i + 1) % k])).collect(),
    }
}

fn sum(inst: &MetricInstance, edges: &[Edge]) -> Weight {
    edges.iter().map(|&(u, v)| wt(inst, u, v)).sum()
}

fn heaviest(inst: &MetricInstance, edges: &[Edge]) -> Weight {
    edges.iter().map(|&(u, v)| wt(inst, u, v)).max().unwrap_or_else(Weight::zero)
}

pub fn structures(nodes: &[usize], kind: StructureKind) -> Vec<Vec<Edge>> {
    match kind {
        StructureKind::SpanningTree => all_trees(nodes),
        StructureKind::Tour => all_cycles(nodes).iter().map(|c| cycle_edges(c)).collect(),
        StructureKind::PerfectMatching => all_matchings(nodes),
    }
}

/// Least total cost and least heaviest edge over all structures on `nodes`.
pub fn best_class(inst: &MetricInstance, nodes: &[usize], kind: StructureKind) -> (Weight, Weight) {
    let all = structures(nodes, kind);
    let min_sum = all.iter().map(|s| sum(inst, s)).min().unwrap();
    let min_max = all.iter().map(|s| heaviest(inst, s)).min().unwrap();
    (min_sum, min_max)
}

/// Optimum over every coloring (both orientations), every structure.
pub fn brute_opt(inst: &MetricInstance, kind: StructureKind, objective: Objective) -> Weight {
    let n = inst.n_pairs();
    (0u32..1 << n)
        .map(|mask| {
            let c = Coloring::new((0..n).map(|i| mask >> i & 1 == 1).collect());
            let (bs, bm) = best_class(inst, &c.class(Color::Blue), kind);
            let (rs, rm) = best_class(inst, &c.class(Color::Red), kind);
            match objective {
                Objective::MinSum => bs + rs,
                Objective::MinMax => bs.max(rs),
                Objective::Bottleneck => bm.max(rm),
            }
        })
        .min()
        .unwrap()
}
