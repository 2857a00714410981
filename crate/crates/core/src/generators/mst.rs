use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CnfFormula, Flavor, GenError, ReductionMode};
use crate::instance::{
    validate_solution, Annotations, Color, Coloring, Edge, MetricInstance, StructureKind, StructurePair,
};
use crate::matrix::Matrix;
use crate::weight::Weight;

/// Node counts of the clause paths (`p` each), the `b` path and the `r` path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathLengths {
    pub p: usize,
    pub p_b: usize,
    pub p_r: usize,
}

impl PathLengths {
    pub fn for_formula(n_vars: usize, n_clauses: usize, mode: ReductionMode) -> Self {
        let (p, p_b) = match mode {
            ReductionMode::Compact => (n_clauses + 1, n_clauses + 2),
            ReductionMode::Paper => {
                let n3 = n_vars.pow(3);
                (n3 + 1, n3 + n_vars + 1)
            }
        };
        PathLengths { p, p_b, p_r: p_b + n_clauses * p }
    }
}

/// The 2-MST reduction instance with its node layout.
///
/// Pair `i < n_vars` is `(x_i, !x_i)`; pair `n_vars + k` is `r[k]` with the
/// `k`-th node of `b` followed by the clause paths. Paths end at their final
/// node, the one adjacent to literals.
#[derive(Debug, Clone)]
pub struct MstReduction {
    pub cnf: CnfFormula,
    pub mode: ReductionMode,
    pub lengths: PathLengths,
    pub instance: MetricInstance,
    pub annotations: Annotations,
    pub r_path: Vec<usize>,
    pub b_path: Vec<usize>,
    pub clause_paths: Vec<Vec<usize>>,
    pub unit_edges: BTreeSet<Edge>,
}

impl MstReduction {
    pub fn positive_literal(&self, var: usize) -> usize {
        2 * var
    }

    pub fn negative_literal(&self, var: usize) -> usize {
        2 * var + 1
    }
}

fn literal_node(lit: i32) -> usize {
    let v = lit.unsigned_abs() as usize - 1;
    if lit > 0 {
        2 * v
    } else {
        2 * v + 1
    }
}

fn edge(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

pub fn reduce_3sat_to_2mst(cnf: &CnfFormula, mode: ReductionMode) -> Result<MstReduction, GenError> {
    if cnf.flavor() != Flavor::ThreeSat {
        return Err(GenError::WrongFlavor { got: cnf.flavor(), want: Flavor::ThreeSat });
    }
    let (n, m) = (cnf.n_vars(), cnf.clauses().len());
    let lengths = PathLengths::for_formula(n, m, mode);
    let mut annotations = Annotations::new();
    for i in 0..n {
        annotations.insert(2 * i, format!("x{}", i + 1));
        annotations.insert(2 * i + 1, format!("~x{}", i + 1));
    }
    let base = 2 * n;
    let r_path: Vec<usize> = (0..lengths.p_r).map(|k| base + 2 * k).collect();
    let partners: Vec<usize> = (0..lengths.p_r).map(|k| base + 2 * k + 1).collect();
    let b_path = partners[..lengths.p_b].to_vec();
    let clause_paths: Vec<Vec<usize>> =
        (0..m).map(|j| partners[lengths.p_b + j * lengths.p..lengths.p_b + (j + 1) * lengths.p].to_vec()).collect();
    for (k, &v) in r_path.iter().enumerate() {
        annotations.insert(v, format!("r[{k}]"));
    }
    for (k, &v) in b_path.iter().enumerate() {
        annotations.insert(v, format!("b[{k}]"));
    }
    for (j, path) in clause_paths.iter().enumerate() {
        for (k, &v) in path.iter().enumerate() {
            annotations.insert(v, format!("C{}[{k}]", j + 1));
        }
    }

    let mut unit = BTreeSet::new();
    for path in std::iter::once(&r_path).chain(std::iter::once(&b_path)).chain(&clause_paths) {
        for w in path.windows(2) {
            unit.insert(edge(w[0], w[1]));
        }
    }
    let r_final = *r_path.last().expect("nonempty");
    let b_final = *b_path.last().expect("nonempty");
    for lit in 0..2 * n {
        unit.insert(edge(lit, r_final));
        unit.insert(edge(lit, b_final));
    }
    for (clause, path) in cnf.clauses().iter().zip(&clause_paths) {
        let fin = *path.last().expect("nonempty");
        for &lit in clause {
            unit.insert(edge(literal_node(lit), fin));
        }
    }
    let size = 2 * (n + lengths.p_r);
    let two = Weight::from_int(2);
    let w = Matrix::from_fn(size, |u, v| {
        if u == v {
            Weight::zero()
        } else if unit.contains(&edge(u, v)) {
            Weight::one()
        } else {
            two.clone()
        }
    });
    let instance = MetricInstance::new(size / 2, w)?.with_meta(serde_json::json!({
        "family": "reduce-3sat",
        "mode": mode,
        "p": lengths.p,
        "p_b": lengths.p_b,
        "p_r": lengths.p_r,
    }));
    Ok(MstReduction {
        cnf: cnf.clone(),
        mode,
        lengths,
        instance,
        annotations,
        r_path,
        b_path,
        clause_paths,
        unit_edges: unit,
    })
}

/// The coloring and trees of the forward direction: path `r` and every false
/// literal red, everything else blue; drop `(x_i, r)` and `(!x_i, b)` for
/// true `x_i` and `(x_i, b)`, `(!x_i, r)` for false `x_i`, then keep a
/// breadth-first spanning tree of each class over the remaining unit edges.
/// Returns `None` when a class is disconnected.
pub fn forward_2mst_solution(red: &MstReduction, assignment: &[bool]) -> Result<Option<StructurePair>, GenError> {
    let n = red.cnf.n_vars();
    if assignment.len() != n {
        return Err(GenError::AssignmentLength { got: assignment.len(), want: n });
    }
    if !red.cnf.satisfied_by(assignment) {
        return Err(GenError::AssignmentDoesNotSatisfy);
    }
    let bits: Vec<bool> = (0..n).map(|i| !assignment[i]).chain(std::iter::repeat_n(true, red.lengths.p_r)).collect();
    let coloring = Coloring::new(bits);
    let r_final = *red.r_path.last().expect("nonempty");
    let b_final = *red.b_path.last().expect("nonempty");
    let mut deleted = BTreeSet::new();
    for (i, &t) in assignment.iter().enumerate() {
        let (x, nx) = (red.positive_literal(i), red.negative_literal(i));
        if t {
            deleted.insert(edge(x, r_final));
            deleted.insert(edge(nx, b_final));
        } else {
            deleted.insert(edge(x, b_final));
            deleted.insert(edge(nx, r_final));
        }
    }
    let colors = coloring.node_colors();
    let mut trees = Vec::new();
    for color in [Color::Blue, Color::Red] {
        let class = coloring.class(color);
        let kept: Vec<Edge> = red
            .unit_edges
            .iter()
            .copied()
            .filter(|e| colors[e.0] == color && colors[e.1] == color && !deleted.contains(e))
            .collect();
        match bfs_tree(&class, &kept) {
            Some(t) => trees.push(t),
            None => return Ok(None),
        }
    }
    let red_edges = trees.pop().expect("two classes");
    let blue_edges = trees.pop().expect("two classes");
    Ok(Some(StructurePair { coloring, blue_edges, red_edges, kind: StructureKind::SpanningTree }))
}

fn bfs_tree(nodes: &[usize], edges: &[Edge]) -> Option<Vec<Edge>> {
    let Some(&root) = nodes.first() else { return Some(Vec::new()) };
    let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(x) = queue.pop_front() {
        for &y in adj.get(&x).map(Vec::as_slice).unwrap_or_default() {
            if seen.insert(y) {
                tree.push(edge(x, y));
                queue.push_back(y);
            }
        }
    }
    (seen.len() == nodes.len()).then_some(tree)
}

/// True iff the forward construction yields two valid spanning trees made of
/// weight-1 edges only.
pub fn verify_forward_2mst(red: &MstReduction, assignment: &[bool]) -> Result<bool, GenError> {
    let Some(pair) = forward_2mst_solution(red, assignment)? else { return Ok(false) };
    let unit_only = pair.blue_edges.iter().chain(&pair.red_edges).all(|&(u, v)| red.instance.w(u, v) == &Weight::one());
    Ok(unit_only && validate_solution(&red.instance, &pair).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_metric;

    fn sat() -> CnfFormula {
        CnfFormula::new(2, vec![[1, -2, 2]], Flavor::ThreeSat).unwrap()
    }

    #[test]
    fn compact_layout() {
        let red = reduce_3sat_to_2mst(&sat(), ReductionMode::Compact).unwrap();
        assert_eq!(red.lengths, PathLengths { p: 2, p_b: 3, p_r: 5 });
        assert_eq!(red.instance.n_nodes(), 14);
        assert_eq!(red.annotations.len(), 14);
        assert!(validate_metric(&red.instance).is_empty());
        assert_eq!(red.annotations[&4], "r[0]");
        assert_eq!(red.annotations[&5], "b[0]");
        assert_eq!(red.annotations[&13], "C1[1]");
    }

    #[test]
    fn paper_mode_lengths() {
        let l = PathLengths::for_formula(2, 3, ReductionMode::Paper);
        assert_eq!(l, PathLengths { p: 9, p_b: 11, p_r: 38 });
    }

    #[test]
    fn forward_direction() {
        for mode in [ReductionMode::Compact, ReductionMode::Paper] {
            let red = reduce_3sat_to_2mst(&sat(), mode).unwrap();
            assert!(verify_forward_2mst(&red, &[true, false]).unwrap());
            assert!(verify_forward_2mst(&red, &[false, true]).unwrap());
        }
    }

    #[test]
    fn forward_rejects_bad_assignment() {
        let f = CnfFormula::new(2, vec![[1, 2, 2]], Flavor::ThreeSat).unwrap();
        let red = reduce_3sat_to_2mst(&f, ReductionMode::Compact).unwrap();
        assert_eq!(verify_forward_2mst(&red, &[false, false]), Err(GenError::AssignmentDoesNotSatisfy));
        let mono = CnfFormula::new(2, vec![[1, 2, 2]], Flavor::MonotoneOneInThree).unwrap();
        assert!(matches!(reduce_3sat_to_2mst(&mono, ReductionMode::Compact), Err(GenError::WrongFlavor { .. })));
    }
}
