//! Partitioned-pairs instances, colorings, solutions and their costs.
//!
//! Nodes are numbered so that pair `i` is `{2i, 2i+1}`: node `2i` plays the
//! role of `p_i` and node `2i+1` the role of `q_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{Matrix, ScaledMatrix};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("matrix row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("matrix has {nodes} rows but n_pairs = {n_pairs} needs {}", 2 * n_pairs)]
    PairCountMismatch { n_pairs: usize, nodes: usize },
    #[error("n_pairs must be positive")]
    NoPairs,
    #[error("asymmetric weights: w({u},{v}) = {uv} but w({v},{u}) = {vu}")]
    Asymmetric { u: usize, v: usize, uv: Box<Weight>, vu: Box<Weight> },
    #[error("non-zero diagonal entry w({u},{u}) = {w}")]
    NonZeroDiagonal { u: usize, w: Weight },
    #[error("negative weight at ({u},{v}): {detail}")]
    NegativeWeight { u: usize, v: usize, detail: String },
    #[error("defined entry w({u},{v}) = {defined} exceeds shortest-path distance {shortest}")]
    InconsistentEntry { u: usize, v: usize, defined: Box<Weight>, shortest: Box<Weight> },
    #[error("points list has {got} entries for {expected} nodes")]
    PointCount { got: usize, expected: usize },
}

/// Checks that `rows` form a square, symmetric, zero-diagonal matrix.
pub fn check_structure(rows: Vec<Vec<Weight>>) -> Result<Matrix<Weight>, InstanceError> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(InstanceError::NonSquare { row, len: r.len(), expected: n });
        }
    }
    for u in 0..n {
        if !rows[u][u].is_zero() {
            return Err(InstanceError::NonZeroDiagonal { u, w: rows[u][u].clone() });
        }
        for v in u + 1..n {
            if rows[u][v] != rows[v][u] {
                return Err(InstanceError::Asymmetric {
                    u,
                    v,
                    uv: Box::new(rows[u][v].clone()),
                    vu: Box::new(rows[v][u].clone()),
                });
            }
        }
    }
    Ok(Matrix::from_fn(n, |u, v| rows[u][v].clone()))
}

/// A triple `(u, v, w)` with `weight(u, w) > weight(u, v) + weight(v, w)`.
pub type TriangleViolation = (usize, usize, usize);

/// Every violated triangle inequality of a structurally valid matrix.
pub fn triangle_violations(m: &Matrix<Weight>) -> Vec<TriangleViolation> {
    fn scan<C: crate::weight::Cost>(m: &Matrix<C>) -> Vec<TriangleViolation> {
        let n = m.size();
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if v == u {
                    continue;
                }
                for w in 0..n {
                    if w == u || w == v {
                        continue;
                    }
                    if *m.get(u, w) > m.get(u, v).plus(m.get(v, w)) {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out
    }
    match ScaledMatrix::try_new(m) {
        Some(s) => scan(&s.ints),
        None => scan(m),
    }
}

/// Completes a partially specified weight matrix into a metric.
///
/// Missing entries take `default`; all-pairs shortest paths then enforce the
/// triangle inequality. A defined entry that the shortest paths would shrink
/// is reported as [`InstanceError::InconsistentEntry`].
pub fn metric_closure(partial: &[Vec<Option<Weight>>], default: &Weight) -> Result<Matrix<Weight>, InstanceError> {
    let n = partial.len();
    for (row, r) in partial.iter().enumerate() {
        if r.len() != n {
            return Err(InstanceError::NonSquare { row, len: r.len(), expected: n });
        }
    }
    let get = |u: usize, v: usize| -> Option<&Weight> { partial[u][v].as_ref().or(partial[v][u].as_ref()) };
    for u in 0..n {
        for v in u + 1..n {
            if let (Some(a), Some(b)) = (&partial[u][v], &partial[v][u]) {
                if a != b {
                    return Err(InstanceError::Asymmetric { u, v, uv: Box::new(a.clone()), vu: Box::new(b.clone()) });
                }
            }
        }
    }
    let filled =
        Matrix::from_fn(
            n,
            |u, v| {
                if u == v {
                    Weight::zero()
                } else {
                    get(u, v).cloned().unwrap_or_else(|| default.clone())
                }
            },
        );
    let closed = floyd_warshall(&filled);
    for u in 0..n {
        for v in u + 1..n {
            if let Some(d) = get(u, v) {
                if closed.get(u, v) < d {
                    return Err(InstanceError::InconsistentEntry {
                        u,
                        v,
                        defined: Box::new(d.clone()),
                        shortest: Box::new(closed.get(u, v).clone()),
                    });
                }
            }
        }
    }
    Ok(closed)
}

/// All-pairs shortest paths on a complete weighted graph.
pub fn floyd_warshall(m: &Matrix<Weight>) -> Matrix<Weight> {
    fn run<C: crate::weight::Cost>(m: &Matrix<C>) -> Matrix<C> {
        let n = m.size();
        let mut d = m.clone();
        for k in 0..n {
            for u in 0..n {
                for v in 0..n {
                    let via = d.get(u, k).plus(d.get(k, v));
                    if via < *d.get(u, v) {
                        d.set(u, v, via);
                    }
                }
            }
        }
        d
    }
    match ScaledMatrix::try_new(m) {
        Some(s) => run(&s.ints).map(|v| s.unscale(*v)),
        None => run(m),
    }
}

/// Borrowed view of an instance's weights in whichever representation the
/// solvers should use.
pub enum Costs<'a> {
    Scaled(&'a Matrix<i128>),
    Exact(&'a Matrix<Weight>),
}

/// Evaluates `$body` with `$m` bound to the instance's cost matrix, using the
/// integer fast path when available.
#[macro_export]
macro_rules! with_costs {
    ($inst:expr, $m:ident => $body:expr) => {
        match $inst.costs() {
            $crate::instance::Costs::Scaled($m) => $body,
            $crate::instance::Costs::Exact($m) => $body,
        }
    };
}

#[derive(Clone, Debug)]
pub struct MetricInstance {
    n_pairs: usize,
    weights: Matrix<Weight>,
    points: Option<Vec<Vec<Weight>>>,
    meta: Option<serde_json::Value>,
    scaled: Option<ScaledMatrix>,
}

impl PartialEq for MetricInstance {
    fn eq(&self, other: &Self) -> bool {
        self.n_pairs == other.n_pairs
            && self.weights == other.weights
            && self.points == other.points
            && self.meta == other.meta
    }
}

impl MetricInstance {
    /// Builds an instance from a structurally valid matrix. The triangle
    /// inequality is not checked here; see [`validate_metric`].
    pub fn new(n_pairs: usize, weights: Matrix<Weight>) -> Result<Self, InstanceError> {
        if n_pairs == 0 {
            return Err(InstanceError::NoPairs);
        }
        if weights.size() != 2 * n_pairs {
            return Err(InstanceError::PairCountMismatch { n_pairs, nodes: weights.size() });
        }
        let n = weights.size();
        for u in 0..n {
            if !weights.get(u, u).is_zero() {
                return Err(InstanceError::NonZeroDiagonal { u, w: weights.get(u, u).clone() });
            }
            for v in u + 1..n {
                if weights.get(u, v) != weights.get(v, u) {
                    return Err(InstanceError::Asymmetric {
                        u,
                        v,
                        uv: Box::new(weights.get(u, v).clone()),
                        vu: Box::new(weights.get(v, u).clone()),
                    });
                }
            }
        }
        let scaled = ScaledMatrix::try_new(&weights);
        Ok(MetricInstance { n_pairs, weights, points: None, meta: None, scaled })
    }

    pub fn from_rows(n_pairs: usize, rows: Vec<Vec<Weight>>) -> Result<Self, InstanceError> {
        let m = check_structure(rows)?;
        Self::new(n_pairs, m)
    }

    /// Missing entries get `default`, then the matrix is metric-closed.
    pub fn from_partial(
        n_pairs: usize,
        partial: &[Vec<Option<Weight>>],
        default: &Weight,
    ) -> Result<Self, InstanceError> {
        Self::new(n_pairs, metric_closure(partial, default)?)
    }

    pub fn with_points(mut self, points: Vec<Vec<Weight>>) -> Result<Self, InstanceError> {
        if points.len() != self.n_nodes() {
            return Err(InstanceError::PointCount { got: points.len(), expected: self.n_nodes() });
        }
        self.points = Some(points);
        Ok(self)
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_nodes(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn weights(&self) -> &Matrix<Weight> {
        &self.weights
    }

    pub fn points(&self) -> Option<&[Vec<Weight>]> {
        self.points.as_deref()
    }

    pub fn meta(&self) -> Option<&serde_json::Value> {
        self.meta.as_ref()
    }

    #[inline]
    pub fn w(&self, u: usize, v: usize) -> &Weight {
        self.weights.get(u, v)
    }

    pub fn costs(&self) -> Costs<'_> {
        match &self.scaled {
            Some(s) => Costs::Scaled(&s.ints),
            None => Costs::Exact(&self.weights),
        }
    }

    pub fn scaled(&self) -> Option<&ScaledMatrix> {
        self.scaled.as_ref()
    }

    pub fn all_nodes(&self) -> Vec<usize> {
        (0..self.n_nodes()).collect()
    }

    /// Sorted distinct off-diagonal weights.
    pub fn distinct_weights(&self) -> Vec<Weight> {
        let n = self.n_nodes();
        let mut ws: Vec<Weight> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| self.w(u, v).clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }
}

pub fn pair_of(node: usize) -> usize {
    node / 2
}

pub fn partner(node: usize) -> usize {
    node ^ 1
}

pub fn p_node(pair: usize) -> usize {
    2 * pair
}

pub fn q_node(pair: usize) -> usize {
    2 * pair + 1
}

pub fn validate_metric(inst: &MetricInstance) -> Vec<TriangleViolation> {
    triangle_violations(inst.weights())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

/// One bit per pair: bit `i` set means `p_i` is red (and so `q_i` blue).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    bits: Vec<bool>,
}

impl Coloring {
    pub fn new(bits: Vec<bool>) -> Self {
        Coloring { bits }
    }

    pub fn all_p_blue(n_pairs: usize) -> Self {
        Coloring { bits: vec![false; n_pairs] }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn n_pairs(&self) -> usize {
        self.bits.len()
    }

    pub fn node_color(&self, node: usize) -> Color {
        let p_red = self.bits[pair_of(node)];
        let is_p = node.is_multiple_of(2);
        if p_red == is_p {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn class(&self, color: Color) -> Vec<usize> {
        (0..2 * self.bits.len()).filter(|&v| self.node_color(v) == color).collect()
    }

    /// Per-node colors, indexed by node.
    pub fn node_colors(&self) -> Vec<Color> {
        (0..2 * self.bits.len()).map(|v| self.node_color(v)).collect()
    }

    pub fn flipped(&self) -> Coloring {
        Coloring { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// `"0101..."`, character `i` is bit `i`.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Coloring::new)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureKind {
    #[serde(rename = "mst")]
    SpanningTree,
    #[serde(rename = "tsp")]
    Tour,
    #[serde(rename = "matching")]
    PerfectMatching,
}

impl StructureKind {
    pub const ALL: [StructureKind; 3] =
        [StructureKind::SpanningTree, StructureKind::Tour, StructureKind::PerfectMatching];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::SpanningTree => "mst",
            StructureKind::Tour => "tsp",
            StructureKind::PerfectMatching => "matching",
        }
    }
}

impl std::str::FromStr for StructureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mst" => Ok(StructureKind::SpanningTree),
            "tsp" => Ok(StructureKind::Tour),
            "matching" => Ok(StructureKind::PerfectMatching),
            other => Err(format!("unknown structure kind {other:?} (mst|tsp|matching)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MinSum,
    MinMax,
    Bottleneck,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::MinSum, Objective::MinMax, Objective::Bottleneck];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::MinSum => "min-sum",
            Objective::MinMax => "min-max",
            Objective::Bottleneck => "bottleneck",
        }
    }

    /// Combines per-class values (sum cost, or bottleneck edge) into the
    /// objective value.
    pub fn combine<C: crate::weight::Cost>(self, blue: &C, red: &C) -> C {
        match self {
            Objective::MinSum => blue.plus(red),
            Objective::MinMax | Objective::Bottleneck => blue.max(red).clone(),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "min-sum" => Ok(Objective::MinSum),
            "min-max" => Ok(Objective::MinMax),
            "bottleneck" => Ok(Objective::Bottleneck),
            other => Err(format!("unknown objective {other:?} (min-sum|min-max|bottleneck)")),
        }
    }
}

pub type Edge = (usize, usize);

/// Two node-disjoint structures, one per color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructurePair {
    pub coloring: Coloring,
    pub blue_edges: Vec<Edge>,
    pub red_edges: Vec<Edge>,
    pub kind: StructureKind,
}

impl StructurePair {
    pub fn edges(&self, color: Color) -> &[Edge] {
        match color {
            Color::Blue => &self.blue_edges,
            Color::Red => &self.red_edges,
        }
    }

    /// Flips every pair and swaps the two edge sets.
    pub fn swapped(&self) -> StructurePair {
        StructurePair {
            coloring: self.coloring.flipped(),
            blue_edges: self.red_edges.clone(),
            red_edges: self.blue_edges.clone(),
            kind: self.kind,
        }
    }
}

pub fn edge_sum(inst: &MetricInstance, edges: &[Edge]) -> Weight {
    edges.iter().map(|&(u, v)| inst.w(u, v)).sum()
}

pub fn edge_max(inst: &MetricInstance, edges: &[Edge]) -> Weight {
    edges.iter().map(|&(u, v)| inst.w(u, v)).max().cloned().unwrap_or_else(Weight::zero)
}

/// Objective value of a solution. Assumes the pair already validates.
pub fn cost(inst: &MetricInstance, pair: &StructurePair, objective: Objective) -> Weight {
    match objective {
        Objective::MinSum => edge_sum(inst, &pair.blue_edges) + edge_sum(inst, &pair.red_edges),
        Objective::MinMax => edge_sum(inst, &pair.blue_edges).max(edge_sum(inst, &pair.red_edges)),
        Objective::Bottleneck => edge_max(inst, &pair.blue_edges).max(edge_max(inst, &pair.red_edges)),
    }
}

/// A broken rule in a candidate solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionViolation {
    ColoringLength {
        expected: usize,
        got: usize,
    },
    EdgeOutOfRange {
        edge: Edge,
    },
    SelfLoop {
        edge: Edge,
    },
    /// An edge of the `color` structure touches a node of the other color.
    WrongColor {
        color: Color,
        edge: Edge,
    },
    /// Tree: wrong number of edges for the class size.
    EdgeCount {
        color: Color,
        expected: usize,
        got: usize,
    },
    /// Tree: an edge closes a cycle.
    Acyclic {
        color: Color,
        edge: Edge,
    },
    /// Tree or tour: the class is split into several components.
    Connected {
        color: Color,
        components: usize,
    },
    /// Tour: node degree differs from 2.
    Degree {
        color: Color,
        node: usize,
        degree: usize,
    },
    /// Tour: repeated edge in a class of 3+ nodes, or a 2-node class not
    /// represented as one doubled edge.
    TourShape {
        color: Color,
        detail: String,
    },
    /// Matching: nodes left unmatched or matched twice.
    Perfect {
        color: Color,
        nodes: Vec<usize>,
    },
    /// Matching: odd class size.
    OddClass {
        color: Color,
        size: usize,
    },
}

impl SolutionViolation {
    pub fn rule(&self) -> &'static str {
        match self {
            SolutionViolation::ColoringLength { .. } => "coloring",
            SolutionViolation::EdgeOutOfRange { .. } => "range",
            SolutionViolation::SelfLoop { .. } => "self-loop",
            SolutionViolation::WrongColor { .. } => "color-purity",
            SolutionViolation::EdgeCount { .. } => "edge-count",
            SolutionViolation::Acyclic { .. } => "acyclic",
            SolutionViolation::Connected { .. } => "connected",
            SolutionViolation::Degree { .. } => "degree",
            SolutionViolation::TourShape { .. } => "tour-shape",
            SolutionViolation::Perfect { .. } => "perfect",
            SolutionViolation::OddClass { .. } => "odd-class",
        }
    }
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.rule(), self)
    }
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

/// Checks coloring validity, color purity and the kind-specific covering
/// property of both structures.
pub fn validate_solution(inst: &MetricInstance, pair: &StructurePair) -> Result<(), Vec<SolutionViolation>> {
    let mut out = Vec::new();
    if pair.coloring.n_pairs() != inst.n_pairs() {
        out.push(SolutionViolation::ColoringLength { expected: inst.n_pairs(), got: pair.coloring.n_pairs() });
        return Err(out);
    }
    let n = inst.n_nodes();
    for color in [Color::Blue, Color::Red] {
        let class = pair.coloring.class(color);
        let edges = pair.edges(color);
        let mut clean = true;
        for &(u, v) in edges {
            if u >= n || v >= n {
                out.push(SolutionViolation::EdgeOutOfRange { edge: (u, v) });
                clean = false;
            } else if u == v {
                out.push(SolutionViolation::SelfLoop { edge: (u, v) });
                clean = false;
            } else if pair.coloring.node_color(u) != color || pair.coloring.node_color(v) != color {
                out.push(SolutionViolation::WrongColor { color, edge: (u, v) });
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        match pair.kind {
            StructureKind::SpanningTree => check_tree(color, &class, edges, n, &mut out),
            StructureKind::Tour => check_tour(color, &class, edges, n, &mut out),
            StructureKind::PerfectMatching => check_matching(color, &class, edges, n, &mut out),
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn components(class: &[usize], edges: &[Edge], n: usize) -> usize {
    let mut dsu = Dsu::new(n);
    for &(u, v) in edges {
        dsu.union(u, v);
    }
    let mut roots: Vec<usize> = class.iter().map(|&v| dsu.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

fn check_tree(color: Color, class: &[usize], edges: &[Edge], n: usize, out: &mut Vec<SolutionViolation>) {
    let mut dsu = Dsu::new(n);
    for &(u, v) in edges {
        if !dsu.union(u, v) {
            out.push(SolutionViolation::Acyclic { color, edge: (u, v) });
        }
    }
    let comps = components(class, edges, n);
    if comps > 1 {
        out.push(SolutionViolation::Connected { color, components: comps });
    }
    let expected = class.len().saturating_sub(1);
    if edges.len() != expected {
        out.push(SolutionViolation::EdgeCount { color, expected, got: edges.len() });
    }
}

fn check_tour(color: Color, class: &[usize], edges: &[Edge], n: usize, out: &mut Vec<SolutionViolation>) {
    match class.len() {
        0 | 1 => {
            if !edges.is_empty() {
                out.push(SolutionViolation::TourShape {
                    color,
                    detail: format!("{}-node class must have an empty tour", class.len()),
                });
            }
        }
        2 => {
            let (a, b) = (class[0], class[1]);
            let ok = edges.len() == 2 && edges.iter().all(|&(u, v)| (u.min(v), u.max(v)) == (a, b));
            if !ok {
                out.push(SolutionViolation::TourShape {
                    color,
                    detail: "2-node class must be one doubled edge".to_string(),
                });
            }
        }
        k => {
            let mut degree = vec![0usize; n];
            let mut seen = std::collections::BTreeSet::new();
            for &(u, v) in edges {
                degree[u] += 1;
                degree[v] += 1;
                if !seen.insert((u.min(v), u.max(v))) {
                    out.push(SolutionViolation::TourShape { color, detail: format!("repeated edge ({u},{v})") });
                }
            }
            for &v in class {
                if degree[v] != 2 {
                    out.push(SolutionViolation::Degree { color, node: v, degree: degree[v] });
                }
            }
            if edges.len() != k {
                out.push(SolutionViolation::EdgeCount { color, expected: k, got: edges.len() });
            }
            let comps = components(class, edges, n);
            if comps > 1 {
                out.push(SolutionViolation::Connected { color, components: comps });
            }
        }
    }
}

fn check_matching(color: Color, class: &[usize], edges: &[Edge], n: usize, out: &mut Vec<SolutionViolation>) {
    if class.len() % 2 == 1 {
        out.push(SolutionViolation::OddClass { color, size: class.len() });
    }
    let mut degree = vec![0usize; n];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let bad: Vec<usize> = class.iter().copied().filter(|&v| degree[v] != 1).collect();
    if !bad.is_empty() {
        out.push(SolutionViolation::Perfect { color, nodes: bad });
    }
}

/// Free-form per-node annotations carried alongside generated instances.
pub type Annotations = BTreeMap<usize, String>;
