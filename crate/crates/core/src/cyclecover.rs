//! Dummy-graph view of 2-matching: each pair `{p_i, q_i}` becomes a path
//! `p_i - d_i - q_i`, and a feasible 2-matching is a cycle cover whose
//! cycles all have length divisible by 6.
//!
//! Real nodes keep their instance ids `0..2n`; dummy `d_i` is node `2n + i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{partner, Coloring, Edge, MetricInstance, StructureKind, StructurePair};
use crate::weight::Weight;

pub const DEFAULT_COVER_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("{real} real nodes exceed the cover search cap of {cap}")]
    TooLarge { real: usize, cap: usize },
    #[error("bad cover: {0}")]
    BadCover(String),
    #[error("structural check failed: {0}")]
    StructuralCheckFailed(String),
    #[error("perfect matchings need an even number of pairs, got {0}")]
    OddPairs(usize),
}

/// A real edge of the dummy graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealEdge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DummyGraph {
    n_pairs: usize,
    edges: Vec<RealEdge>,
    unit_threshold: Weight,
}

#[derive(Serialize, Deserialize)]
struct DummyGraphFile {
    triples: usize,
    real_edges: Vec<(usize, usize, Weight)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Option<String>>>,
    unit_threshold: Weight,
}

impl DummyGraph {
    /// Parallel edges are allowed; edges between partners are kept but never
    /// usable in a cover.
    pub fn new(n_pairs: usize, edges: Vec<RealEdge>, unit_threshold: Weight) -> Result<Self, CoverError> {
        for e in &edges {
            if e.u >= 2 * n_pairs || e.v >= 2 * n_pairs || e.u == e.v {
                return Err(CoverError::StructuralCheckFailed(format!(
                    "real edge ({},{}) must join two distinct real nodes",
                    e.u, e.v
                )));
            }
        }
        Ok(DummyGraph { n_pairs, edges, unit_threshold })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_real(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn n_nodes(&self) -> usize {
        3 * self.n_pairs
    }

    pub fn dummy_of(&self, real: usize) -> usize {
        2 * self.n_pairs + real / 2
    }

    pub fn is_dummy(&self, node: usize) -> bool {
        node >= 2 * self.n_pairs
    }

    pub fn edges(&self) -> &[RealEdge] {
        &self.edges
    }

    pub fn unit_threshold(&self) -> &Weight {
        &self.unit_threshold
    }

    pub fn is_unit(&self, e: &RealEdge) -> bool {
        e.w <= self.unit_threshold && partner(e.u) != e.v
    }

    /// Neighbors of a node in G': the dummy (or its two reals) plus every
    /// listed real edge.
    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        if self.is_dummy(node) {
            let i = node - 2 * self.n_pairs;
            return vec![2 * i, 2 * i + 1];
        }
        let mut out = vec![self.dummy_of(node)];
        for e in &self.edges {
            if e.u == node {
                out.push(e.v);
            } else if e.v == node {
                out.push(e.u);
            }
        }
        out
    }

    /// Every dummy has exactly two (real) neighbors and every real node
    /// exactly one dummy neighbor.
    pub fn validate_structure(&self) -> Result<(), CoverError> {
        for d in 2 * self.n_pairs..3 * self.n_pairs {
            let nb = self.neighbors(d);
            if nb.len() != 2 || nb.iter().any(|&x| self.is_dummy(x)) {
                return Err(CoverError::StructuralCheckFailed(format!("dummy {d} has neighbors {nb:?}")));
            }
        }
        for r in 0..self.n_real() {
            let dummies = self.neighbors(r).into_iter().filter(|&x| self.is_dummy(x)).count();
            if dummies != 1 {
                return Err(CoverError::StructuralCheckFailed(format!("real node {r} has {dummies} dummy neighbors")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let labels: Vec<Option<String>> = self.edges.iter().map(|e| e.label.clone()).collect();
        let file = DummyGraphFile {
            triples: self.n_pairs,
            real_edges: self.edges.iter().map(|e| (e.u, e.v, e.w.clone())).collect(),
            labels: labels.iter().any(|l| l.is_some()).then_some(labels),
            unit_threshold: self.unit_threshold.clone(),
        };
        serde_json::to_string(&file).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        let file: DummyGraphFile =
            serde_json::from_str(text).map_err(|e| CoverError::StructuralCheckFailed(e.to_string()))?;
        let labels = file.labels.unwrap_or_default();
        let edges = file
            .real_edges
            .into_iter()
            .enumerate()
            .map(|(i, (u, v, w))| RealEdge { u, v, w, label: labels.get(i).cloned().flatten() })
            .collect();
        DummyGraph::new(file.triples, edges, file.unit_threshold)
    }

    /// Graphviz rendering: dummy paths and unit real edges solid, other
    /// listed real edges dashed. `names` may supply node labels.
    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let mut out =
            String::from("graph G {\n  node [shape=circle, style=filled, fillcolor=black, fontcolor=white];\n");
        for v in 0..self.n_nodes() {
            let name = names.and_then(|n| n.get(v)).cloned().unwrap_or_else(|| v.to_string());
            if self.is_dummy(v) {
                let _ = writeln!(out, "  n{v} [label=\"{name}\", fillcolor=white, fontcolor=black];");
            } else {
                let _ = writeln!(out, "  n{v} [label=\"{name}\"];");
            }
        }
        for i in 0..self.n_pairs {
            let d = 2 * self.n_pairs + i;
            let _ = writeln!(out, "  n{} -- n{d};\n  n{d} -- n{};", 2 * i, 2 * i + 1);
        }
        for e in &self.edges {
            let style = if self.is_unit(e) { "solid" } else { "dashed" };
            let label = e.label.as_deref().map(|l| format!(", label=\"{l}\"")).unwrap_or_default();
            let _ = writeln!(out, "  n{} -- n{} [style={style}{label}];", e.u, e.v);
        }
        out.push_str("}\n");
        out
    }
}

/// Every non-partner real edge of `inst`, unit when its weight is at most
/// `unit_threshold`.
pub fn to_dummy_graph(inst: &MetricInstance, unit_threshold: &Weight) -> DummyGraph {
    let n = inst.n_nodes();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if partner(u) != v {
                edges.push(RealEdge { u, v, w: inst.w(u, v).clone(), label: None });
            }
        }
    }
    DummyGraph { n_pairs: inst.n_pairs(), edges, unit_threshold: unit_threshold.clone() }
}

/// Node-disjoint cycles of G' covering every node, plus the real edge
/// (index into the graph's edge list) chosen at each real node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    pub cycles: Vec<Vec<usize>>,
    pub real_edges: Vec<usize>,
}

impl CycleCover {
    /// Edge indices of the chosen real edges.
    pub fn edge_set(&self) -> BTreeSet<usize> {
        self.real_edges.iter().copied().collect()
    }

    pub fn has_label(&self, g: &DummyGraph, label: &str) -> bool {
        self.real_edges.iter().any(|&e| g.edges[e].label.as_deref() == Some(label))
    }
}

/// Builds the cycles from one chosen real edge per real node and checks
/// that every cycle is a multiple of 6 long.
pub fn cover_from_choices(g: &DummyGraph, choice: &[usize]) -> Result<CycleCover, CoverError> {
    let n_real = g.n_real();
    if choice.len() != n_real {
        return Err(CoverError::BadCover(format!("{} choices for {n_real} real nodes", choice.len())));
    }
    let mut mate = vec![usize::MAX; n_real];
    for (v, &e) in choice.iter().enumerate() {
        let edge = g.edges.get(e).ok_or_else(|| CoverError::BadCover(format!("edge {e} missing")))?;
        let other = if edge.u == v {
            edge.v
        } else if edge.v == v {
            edge.u
        } else {
            return Err(CoverError::BadCover(format!("edge {e} does not touch node {v}")));
        };
        if choice[other] != e {
            return Err(CoverError::BadCover(format!("edge {e} chosen by {v} but not by {other}")));
        }
        if partner(v) == other {
            return Err(CoverError::BadCover(format!("edge {e} joins partners")));
        }
        mate[v] = other;
    }
    let mut seen = vec![false; n_real];
    let mut cycles = Vec::new();
    for start in 0..n_real {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            // v -> mate -> dummy -> partner
            seen[v] = true;
            let m = mate[v];
            seen[m] = true;
            cycle.push(v);
            cycle.push(m);
            cycle.push(g.dummy_of(m));
            v = partner(m);
            if v == start {
                break;
            }
        }
        if cycle.len() % 6 != 0 {
            return Err(CoverError::BadCover(format!("cycle of length {}", cycle.len())));
        }
        cycles.push(cycle);
    }
    let mut real_edges: Vec<usize> = choice.to_vec();
    real_edges.sort_unstable();
    real_edges.dedup();
    Ok(CycleCover { cycles, real_edges })
}

/// Checks a cover against the graph: every node in exactly one cycle,
/// consecutive nodes adjacent through unit or dummy edges, lengths
/// divisible by 6.
pub fn validate_cover(g: &DummyGraph, cover: &CycleCover) -> Result<(), CoverError> {
    let mut seen = vec![false; g.n_nodes()];
    for c in &cover.cycles {
        if c.len() % 6 != 0 {
            return Err(CoverError::BadCover(format!("cycle of length {}", c.len())));
        }
        for (i, &v) in c.iter().enumerate() {
            if v >= g.n_nodes() || std::mem::replace(&mut seen[v], true) {
                return Err(CoverError::BadCover(format!("node {v} repeated or out of range")));
            }
            let w = c[(i + 1) % c.len()];
            let dummy_step = (g.is_dummy(v) && !g.is_dummy(w) && g.dummy_of(w) == v)
                || (g.is_dummy(w) && !g.is_dummy(v) && g.dummy_of(v) == w);
            let real_step = !g.is_dummy(v)
                && !g.is_dummy(w)
                && g.edges.iter().any(|e| g.is_unit(e) && ((e.u, e.v) == (v, w) || (e.u, e.v) == (w, v)));
            if !dummy_step && !real_step {
                return Err(CoverError::BadCover(format!("step {v} -> {w} is not a unit edge")));
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(CoverError::BadCover(format!("node {v} uncovered")));
    }
    Ok(())
}

struct Search<'a> {
    g: &'a DummyGraph,
    adj: Vec<Vec<(usize, usize)>>,
    static_key: Vec<(usize, usize)>,
    choice: Vec<Option<usize>>,
    other_end: Vec<usize>,
    count: Vec<u32>,
}

enum Undo {
    Close,
    Merge { a: usize, a_end: usize, a_cnt: u32, b: usize, b_end: usize, b_cnt: u32 },
}

impl<'a> Search<'a> {
    fn new(g: &'a DummyGraph) -> Self {
        let n = g.n_real();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in g.edges.iter().enumerate() {
            if g.is_unit(e) {
                adj[e.u].push((i, e.v));
                adj[e.v].push((i, e.u));
            }
        }
        let static_key = (0..n).map(|v| (adj[v].len(), v)).collect();
        Search {
            g,
            adj,
            static_key,
            choice: vec![None; n],
            other_end: (0..n).map(partner).collect(),
            count: vec![0; n],
        }
    }

    fn allowed(&self, v: usize, w: usize) -> bool {
        self.choice[w].is_none() && (self.other_end[v] != w || (self.count[v] + 1).is_multiple_of(2))
    }

    fn candidates(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().copied().filter(move |&(_, w)| self.allowed(v, w))
    }

    fn pick(&self) -> Option<usize> {
        (0..self.g.n_real())
            .filter(|&v| self.choice[v].is_none())
            .min_by_key(|&v| (self.candidates(v).count(), self.static_key[v]))
    }

    fn apply(&mut self, v: usize, w: usize, e: usize) -> Undo {
        self.choice[v] = Some(e);
        self.choice[w] = Some(e);
        if self.other_end[v] == w {
            return Undo::Close;
        }
        let (a, b) = (self.other_end[v], self.other_end[w]);
        let undo = Undo::Merge {
            a,
            a_end: self.other_end[a],
            a_cnt: self.count[a],
            b,
            b_end: self.other_end[b],
            b_cnt: self.count[b],
        };
        let c = self.count[v] + self.count[w] + 1;
        self.other_end[a] = b;
        self.other_end[b] = a;
        self.count[a] = c;
        self.count[b] = c;
        undo
    }

    fn revert(&mut self, v: usize, w: usize, undo: Undo) {
        self.choice[v] = None;
        self.choice[w] = None;
        if let Undo::Merge { a, a_end, a_cnt, b, b_end, b_cnt } = undo {
            self.other_end[b] = b_end;
            self.count[b] = b_cnt;
            self.other_end[a] = a_end;
            self.count[a] = a_cnt;
        }
    }

    /// Depth-first search; `visit` returns false to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some(v) = self.pick() else {
            let choice: Vec<usize> = self.choice.iter().map(|c| c.expect("complete")).collect();
            return visit(&choice);
        };
        let cands: Vec<(usize, usize)> = self.candidates(v).collect();
        for (e, w) in cands {
            let undo = self.apply(v, w, e);
            let go_on = self.run(visit);
            self.revert(v, w, undo);
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn check_cap(g: &DummyGraph, cap: usize) -> Result<(), CoverError> {
    if g.n_real() > cap {
        Err(CoverError::TooLarge { real: g.n_real(), cap })
    } else {
        Ok(())
    }
}

/// Exhaustive backtracking for a cover using only unit real edges.
pub fn find_c6_cover(g: &DummyGraph, cap: usize) -> Result<Option<CycleCover>, CoverError> {
    check_cap(g, cap)?;
    let mut found = None;
    Search::new(g).run(&mut |choice| {
        found = Some(choice.to_vec());
        false
    });
    found.map(|c| cover_from_choices(g, &c)).transpose()
}

/// All covers, up to `limit` of them, as chosen-edge index sets.
pub fn enumerate_c6_covers(g: &DummyGraph, cap: usize, limit: usize) -> Result<Vec<CycleCover>, CoverError> {
    check_cap(g, cap)?;
    let mut out = Vec::new();
    Search::new(g).run(&mut |choice| {
        out.push(choice.to_vec());
        out.len() < limit
    });
    let mut covers: Vec<CycleCover> = out.iter().map(|c| cover_from_choices(g, c)).collect::<Result<_, _>>()?;
    covers.sort_by(|a, b| a.real_edges.cmp(&b.real_edges));
    covers.dedup_by(|a, b| a.real_edges == b.real_edges);
    Ok(covers)
}

/// Walks every cycle, coloring its smallest real node red and alternating
/// across dummy paths. Returns the coloring and the per-color matchings.
pub fn decode_cover(g: &DummyGraph, cover: &CycleCover) -> Result<(Coloring, StructurePair), CoverError> {
    validate_cover(g, cover)?;
    let n = g.n_pairs();
    let mut red: Vec<Option<bool>> = vec![None; 2 * n];
    let mut blue_edges = Vec::new();
    let mut red_edges = Vec::new();
    for cycle in &cover.cycles {
        let reals: Vec<usize> = cycle.iter().copied().filter(|&v| !g.is_dummy(v)).collect();
        let start_pos = reals.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
        let k = reals.len();
        // Rotate so the cycle starts at its smallest real node; reals then
        // alternate "real edge, dummy path" in one of the two directions.
        let rot: Vec<usize> = (0..k).map(|i| reals[(start_pos + i) % k]).collect();
        let forward_is_real = rot.len() > 1 && partner(rot[0]) != rot[1];
        let seq: Vec<usize> =
            if forward_is_real { rot } else { std::iter::once(rot[0]).chain(rot[1..].iter().rev().copied()).collect() };
        let mut color = true;
        for pair in seq.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            for v in [a, b] {
                if let Some(prev) = red[v] {
                    if prev != color {
                        return Err(CoverError::BadCover(format!("inconsistent color at node {v}")));
                    }
                }
                red[v] = Some(color);
            }
            let e = (a.min(b), a.max(b));
            if color {
                red_edges.push(e);
            } else {
                blue_edges.push(e);
            }
            color = !color;
        }
    }
    let mut bits = Vec::with_capacity(n);
    for i in 0..n {
        let p = red[2 * i].ok_or_else(|| CoverError::BadCover(format!("node {} uncolored", 2 * i)))?;
        let q = red[2 * i + 1].ok_or_else(|| CoverError::BadCover(format!("node {} uncolored", 2 * i + 1)))?;
        if p == q {
            return Err(CoverError::BadCover(format!("pair {i} got one color")));
        }
        bits.push(p);
    }
    blue_edges.sort_unstable();
    red_edges.sort_unstable();
    let coloring = Coloring::new(bits);
    Ok((coloring.clone(), StructurePair { coloring, blue_edges, red_edges, kind: StructureKind::PerfectMatching }))
}

/// The cover induced by a 2-matching (the forward map). Each matching edge
/// is mapped to the lowest-index unit graph edge joining its endpoints.
pub fn encode_matching(g: &DummyGraph, pair: &StructurePair) -> Result<CycleCover, CoverError> {
    let mut choice = vec![usize::MAX; g.n_real()];
    let index: BTreeMap<Edge, usize> = g
        .edges
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, e)| g.is_unit(e))
        .map(|(i, e)| ((e.u.min(e.v), e.u.max(e.v)), i))
        .collect();
    for &(u, v) in pair.blue_edges.iter().chain(&pair.red_edges) {
        let e = *index
            .get(&(u.min(v), u.max(v)))
            .ok_or_else(|| CoverError::BadCover(format!("({u},{v}) is not a unit edge")))?;
        for x in [u, v] {
            if choice[x] != usize::MAX {
                return Err(CoverError::BadCover(format!("node {x} matched twice")));
            }
            choice[x] = e;
        }
    }
    if let Some(v) = choice.iter().position(|&c| c == usize::MAX) {
        return Err(CoverError::BadCover(format!("node {v} unmatched")));
    }
    cover_from_choices(g, &choice)
}

/// Smallest distinct weight `t` for which a cover exists using edges of
/// weight at most `t`.
pub fn exact_bottleneck_2matching(inst: &MetricInstance, cap: usize) -> Result<Weight, CoverError> {
    if inst.n_pairs() % 2 == 1 {
        return Err(CoverError::OddPairs(inst.n_pairs()));
    }
    if inst.n_nodes() > cap {
        return Err(CoverError::TooLarge { real: inst.n_nodes(), cap });
    }
    for t in inst.distinct_weights() {
        if find_c6_cover(&to_dummy_graph(inst, &t), cap)?.is_some() {
            return Ok(t);
        }
    }
    Err(CoverError::BadCover("no threshold admits a cover".into()))
}

/// Sink for gadget wiring, shared by full graphs and isolated gadgets.
pub trait GadgetSink {
    fn real(&mut self, name: &str) -> usize;
    fn dummy_path(&mut self, u: usize, v: usize, name: &str);
    fn edge(&mut self, u: usize, v: usize, label: Option<&str>) -> usize;
}

impl GadgetSink for GadgetBuilder {
    fn real(&mut self, name: &str) -> usize {
        self.add_real(name)
    }

    fn dummy_path(&mut self, u: usize, v: usize, name: &str) {
        self.add_dummy_path(u, v, name);
    }

    fn edge(&mut self, u: usize, v: usize, label: Option<&str>) -> usize {
        self.add_edge(u, v, label.map(str::to_string))
    }
}

impl GadgetSink for OpenGadget {
    fn real(&mut self, name: &str) -> usize {
        self.add_node(name, false)
    }

    fn dummy_path(&mut self, u: usize, v: usize, _name: &str) {
        self.add_path(u, v);
    }

    fn edge(&mut self, u: usize, v: usize, label: Option<&str>) -> usize {
        self.add_edge(u, v, label);
        self.edges.len() - 1
    }
}

/// Incremental construction of gadget graphs. Nodes get temporary ids; each
/// dummy path turns its two ends into a pair.
#[derive(Debug, Clone, Default)]
pub struct GadgetBuilder {
    names: Vec<String>,
    paths: Vec<(usize, usize, String)>,
    edges: Vec<(usize, usize, Option<String>)>,
}

/// A finished gadget graph with node names and the map from builder ids.
#[derive(Debug, Clone)]
pub struct BuiltGraph {
    pub graph: DummyGraph,
    /// Name of every G' node, dummies included.
    pub names: Vec<String>,
    /// Builder id to G' real node.
    pub node_of: Vec<usize>,
    /// Builder path index to G' dummy node.
    pub dummy_of_path: Vec<usize>,
}

impl GadgetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_real(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.names.len() - 1
    }

    /// Joins `u` and `v` through a new dummy node; returns the path index.
    pub fn add_dummy_path(&mut self, u: usize, v: usize, dummy_name: impl Into<String>) -> usize {
        self.paths.push((u, v, dummy_name.into()));
        self.paths.len() - 1
    }

    /// Adds a unit real edge and returns its index in the final edge list.
    pub fn add_edge(&mut self, u: usize, v: usize, label: Option<String>) -> usize {
        self.edges.push((u, v, label));
        self.edges.len() - 1
    }

    pub fn n_real(&self) -> usize {
        self.names.len()
    }

    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    /// Checks the dummy-path structure and renumbers so that path `i` is
    /// pair `i`. All edges get weight 1; unlisted pairs are implicitly 2.
    pub fn build(&self) -> Result<BuiltGraph, CoverError> {
        let n_real = self.names.len();
        let mut dummy_count = vec![0usize; n_real];
        for (u, v, name) in &self.paths {
            if u == v || *u >= n_real || *v >= n_real {
                return Err(CoverError::StructuralCheckFailed(format!("dummy {name} has bad ends ({u},{v})")));
            }
            dummy_count[*u] += 1;
            dummy_count[*v] += 1;
        }
        if let Some(v) = dummy_count.iter().position(|&c| c != 1) {
            return Err(CoverError::StructuralCheckFailed(format!(
                "real node {} has {} dummy neighbors",
                self.names[v], dummy_count[v]
            )));
        }
        let n_pairs = self.paths.len();
        let mut node_of = vec![0; n_real];
        for (i, (u, v, _)) in self.paths.iter().enumerate() {
            node_of[*u] = 2 * i;
            node_of[*v] = 2 * i + 1;
        }
        let mut names = vec![String::new(); 3 * n_pairs];
        for (b, &g) in node_of.iter().enumerate() {
            names[g] = self.names[b].clone();
        }
        for (i, (_, _, name)) in self.paths.iter().enumerate() {
            names[2 * n_pairs + i] = name.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|(u, v, label)| RealEdge { u: node_of[*u], v: node_of[*v], w: Weight::one(), label: label.clone() })
            .collect();
        let graph = DummyGraph::new(n_pairs, edges, Weight::one())?;
        graph.validate_structure()?;
        Ok(BuiltGraph { graph, names, node_of, dummy_of_path: (0..n_pairs).map(|i| 2 * n_pairs + i).collect() })
    }
}

impl BuiltGraph {
    /// The weight-{1,2} instance whose dummy graph this is.
    pub fn to_instance(&self) -> MetricInstance {
        let n = self.graph.n_real();
        let two = Weight::from_int(2);
        let mut m = crate::matrix::Matrix::from_fn(n, |u, v| if u == v { Weight::zero() } else { two.clone() });
        for e in self.graph.edges() {
            m.set_sym(e.u, e.v, Weight::one());
        }
        MetricInstance::new(self.graph.n_pairs(), m).expect("structurally valid")
    }
}

/// A gadget cut out of a larger graph: internal real nodes belong to dummy
/// paths, boundary nodes have their dummy paths elsewhere.
#[derive(Debug, Clone, Default)]
pub struct OpenGadget {
    pub names: Vec<String>,
    pub boundary: BTreeSet<usize>,
    /// Dummy paths between internal nodes.
    pub paths: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize, Option<String>)>,
}

impl OpenGadget {
    pub fn add_node(&mut self, name: &str, boundary: bool) -> usize {
        self.names.push(name.to_string());
        let id = self.names.len() - 1;
        if boundary {
            self.boundary.insert(id);
        }
        id
    }

    pub fn add_path(&mut self, u: usize, v: usize) {
        self.paths.push((u, v));
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: Option<&str>) {
        self.edges.push((u, v, label.map(str::to_string)));
    }

    fn path_mate(&self) -> Vec<Option<usize>> {
        let mut mate = vec![None; self.names.len()];
        for &(u, v) in &self.paths {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }

    /// Every local cover: internal real nodes take exactly one real edge,
    /// boundary nodes at most one; closed cycles need an even number of real
    /// edges and boundary-to-boundary paths must cross an even number of
    /// dummy paths (so their internal length is a multiple of 6). Returns the
    /// chosen edge index sets.
    pub fn local_covers(&self) -> Vec<BTreeSet<usize>> {
        let n = self.names.len();
        let mate = self.path_mate();
        let mut used: Vec<Option<usize>> = vec![None; n];
        let mut out = Vec::new();
        self.extend(0, &mut used, &mate, &mut out);
        out
    }

    fn extend(
        &self,
        from: usize,
        used: &mut Vec<Option<usize>>,
        mate: &[Option<usize>],
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        let next = (from..self.names.len()).find(|&v| !self.boundary.contains(&v) && used[v].is_none());
        let Some(v) = next else {
            if self.legal(used, mate) {
                out.push(used.iter().flatten().copied().collect());
            }
            return;
        };
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if w == v || used[w].is_some() || mate[v] == Some(w) {
                continue;
            }
            used[v] = Some(i);
            used[w] = Some(i);
            self.extend(v + 1, used, mate, out);
            used[v] = None;
            used[w] = None;
        }
    }

    fn legal(&self, used: &[Option<usize>], mate: &[Option<usize>]) -> bool {
        let n = self.names.len();
        let other = |v: usize, e: usize| {
            let (a, b, _) = &self.edges[e];
            if *a == v {
                *b
            } else {
                *a
            }
        };
        let mut seen = vec![false; n];
        // Open paths start at a boundary node with an edge.
        for &s in &self.boundary {
            let Some(mut e) = used[s] else { continue };
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut v = other(s, e);
            let mut crossings = 0;
            loop {
                seen[v] = true;
                if self.boundary.contains(&v) {
                    break;
                }
                let m = mate[v].expect("internal nodes have a dummy path");
                crossings += 1;
                seen[m] = true;
                e = used[m].expect("internal nodes are matched");
                v = other(m, e);
            }
            if crossings % 2 == 1 {
                return false;
            }
        }
        // Remaining internal nodes lie on closed cycles.
        for s in 0..n {
            if seen[s] || self.boundary.contains(&s) {
                continue;
            }
            let mut real = 0;
            let mut v = s;
            loop {
                seen[v] = true;
                let w = other(v, used[v].expect("matched"));
                seen[w] = true;
                real += 1;
                v = mate[w].expect("internal");
                if v == s {
                    break;
                }
            }
            if real % 2 == 1 {
                return false;
            }
        }
        true
    }

    /// Distinct projections of the local covers onto the labeled edges.
    pub fn label_states(&self) -> BTreeSet<BTreeSet<String>> {
        self.local_covers()
            .into_iter()
            .map(|s| s.into_iter().filter_map(|e| self.edges[e].2.clone()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_solution;
    use crate::matrix::Matrix;

    fn inst4(unit: &[(usize, usize)]) -> MetricInstance {
        let m = Matrix::from_fn(4, |u, v| {
            if u == v {
                Weight::zero()
            } else if unit.contains(&(u.min(v), u.max(v))) {
                Weight::one()
            } else {
                Weight::from_int(2)
            }
        });
        MetricInstance::new(2, m).unwrap()
    }

    #[test]
    fn two_pair_graph_shape() {
        let g = to_dummy_graph(&inst4(&[]), &Weight::one());
        assert_eq!(g.n_nodes(), 6);
        assert_eq!(g.neighbors(4), vec![0, 1]);
        assert_eq!(g.neighbors(5), vec![2, 3]);
        g.validate_structure().unwrap();
    }

    #[test]
    fn parallel_unit_edges_give_c6() {
        // p1p2 and q1q2 unit.
        let inst = inst4(&[(0, 2), (1, 3)]);
        let g = to_dummy_graph(&inst, &Weight::one());
        let cover = find_c6_cover(&g, 40).unwrap().unwrap();
        assert_eq!(cover.cycles.len(), 1);
        assert_eq!(cover.cycles[0].len(), 6);
        let (c, pair) = decode_cover(&g, &cover).unwrap();
        assert_eq!(c.node_color(0), c.node_color(2));
        assert_ne!(c.node_color(0), c.node_color(1));
        assert_eq!(validate_solution(&inst, &pair), Ok(()));
        let all: Vec<Edge> = pair.blue_edges.iter().chain(&pair.red_edges).copied().collect();
        assert!(all.contains(&(0, 2)) && all.contains(&(1, 3)));
        assert_eq!(encode_matching(&g, &pair).unwrap(), cover);
    }

    #[test]
    fn crossed_unit_edges_give_c6() {
        let inst = inst4(&[(0, 3), (1, 2)]);
        let g = to_dummy_graph(&inst, &Weight::one());
        assert!(find_c6_cover(&g, 40).unwrap().is_some());
    }

    #[test]
    fn single_unit_edge_has_no_cover() {
        let inst = inst4(&[(0, 2)]);
        let g = to_dummy_graph(&inst, &Weight::one());
        assert!(find_c6_cover(&g, 40).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let m = Matrix::from_fn(42, |u, v| if u == v { Weight::zero() } else { Weight::one() });
        let inst = MetricInstance::new(21, m).unwrap();
        let g = to_dummy_graph(&inst, &Weight::one());
        assert_eq!(find_c6_cover(&g, 40), Err(CoverError::TooLarge { real: 42, cap: 40 }));
    }

    #[test]
    fn builder_rejects_missing_dummy() {
        let mut b = GadgetBuilder::new();
        let x = b.add_real("x");
        let y = b.add_real("y");
        let z = b.add_real("z");
        b.add_dummy_path(x, y, "d");
        b.add_edge(x, z, None);
        assert!(matches!(b.build(), Err(CoverError::StructuralCheckFailed(_))));
    }

    #[test]
    fn json_round_trip() {
        let inst = inst4(&[(0, 2), (1, 3)]);
        let g = to_dummy_graph(&inst, &Weight::one());
        assert_eq!(DummyGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(g.to_dot(None).starts_with("graph G {"));
    }

    #[test]
    fn bottleneck_on_unit_instance() {
        let m = Matrix::from_fn(4, |u, v| if u == v { Weight::zero() } else { Weight::one() });
        let inst = MetricInstance::new(2, m).unwrap();
        assert_eq!(exact_bottleneck_2matching(&inst, 40).unwrap(), Weight::one());
        assert_eq!(exact_bottleneck_2matching(&inst4(&[(0, 2)]), 40).unwrap(), Weight::from_int(2));
    }
}
