use serde::{Deserialize, Serialize};

use super::{CnfFormula, Flavor, GenError};
use crate::cyclecover::{
    cover_from_choices, decode_cover, validate_cover, BuiltGraph, CoverError, CycleCover, GadgetBuilder, GadgetSink,
    OpenGadget,
};
use crate::instance::{validate_solution, Annotations, MetricInstance};
use crate::weight::Weight;

/// Per-gadget cover edge counts claimed for a satisfying assignment:
/// clause, variable, connection.
pub const STATED_COUNTS: (usize, usize, usize) = (16, 6, 12);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Owner {
    Variable(usize),
    Clause(usize),
    Connection(usize),
}

struct VarWires {
    p: usize,
    q: usize,
    p2: usize,
    q2: usize,
    mid: usize,
    e_t: usize,
}

/// Path `p - d - q`, `p' - d' - q'`, edge `q p'` and `e_T = p q'`. The
/// pseudoedge `e_F` from `p` to `q'` is added by the caller.
fn wire_variable<S: GadgetSink>(s: &mut S, tag: &str) -> VarWires {
    let p = s.real(&format!("{tag}.p"));
    let q = s.real(&format!("{tag}.q"));
    let p2 = s.real(&format!("{tag}.p'"));
    let q2 = s.real(&format!("{tag}.q'"));
    s.dummy_path(p, q, &format!("{tag}.d"));
    s.dummy_path(p2, q2, &format!("{tag}.d'"));
    let mid = s.edge(q, p2, None);
    let e_t = s.edge(p, q2, Some(&format!("{tag}.eT")));
    VarWires { p, q, p2, q2, mid, e_t }
}

struct ClauseWires {
    u: [usize; 4],
    v: [usize; 4],
    u_edges: Vec<((usize, usize), usize)>,
    v_edges: Vec<((usize, usize), usize)>,
}

/// Two K4s `u0..u3`, `v0..v3` with dummy paths `u_l - v_l`. The pseudoedges
/// `f_k = u0 u_k` are added by the caller; every other K4 edge is unit.
fn wire_clause<S: GadgetSink>(s: &mut S, tag: &str) -> ClauseWires {
    let u = [0, 1, 2, 3].map(|l| s.real(&format!("{tag}.u{l}")));
    let v = [0, 1, 2, 3].map(|l| s.real(&format!("{tag}.v{l}")));
    for l in 0..4 {
        s.dummy_path(u[l], v[l], &format!("{tag}.d{l}"));
    }
    let mut u_edges = Vec::new();
    let mut v_edges = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            if a > 0 {
                u_edges.push(((a, b), s.edge(u[a], u[b], None)));
            }
            v_edges.push(((a, b), s.edge(v[a], v[b], None)));
        }
    }
    ClauseWires { u, v, u_edges, v_edges }
}

struct ConnWires {
    nodes: [usize; 8],
    eps1: usize,
    eps2: usize,
    eps3: usize,
    eps4b: usize,
    eps5: usize,
    eps5b: usize,
    eps6: usize,
    e45: usize,
}

/// Splits the `e_F` side starting at `x` into `x e1 e2 (e3) e4 e5 (e6) e7 e8`
/// (dummies in parentheses) and replaces `f = u v` by `u a`, `b v`, with `a`
/// tied to `e1` by a dummy path and to `e7` by an edge, and `b` tied to `e2`
/// by an edge and to `e8` by a dummy path. The closing edge `e8 y` (eps4) is
/// added by the caller. `nodes` is `[e1, e2, e4, e5, e7, e8, a, b]`.
fn wire_connection<S: GadgetSink>(s: &mut S, tag: &str, x: usize, u: usize, v: usize) -> ConnWires {
    let nodes = ["e1", "e2", "e4", "e5", "e7", "e8", "a", "b"].map(|n| s.real(&format!("{tag}.{n}")));
    let [e1, e2, e4, e5, e7, e8, a, b] = nodes;
    s.dummy_path(e2, e4, &format!("{tag}.e3"));
    s.dummy_path(e5, e7, &format!("{tag}.e6"));
    s.dummy_path(a, e1, &format!("{tag}.D1"));
    s.dummy_path(b, e8, &format!("{tag}.D2"));
    let mut e = |p: usize, q: usize, name: &str| s.edge(p, q, Some(&format!("{tag}.{name}")));
    ConnWires {
        nodes,
        eps6: e(x, e1, "eps6"),
        eps5b: e(e1, e2, "eps5b"),
        e45: e(e4, e5, "e4e5"),
        eps3: e(e7, e8, "eps3"),
        eps1: e(u, a, "eps1"),
        eps5: e(b, v, "eps5"),
        eps2: e(a, e7, "eps2"),
        eps4b: e(b, e2, "eps4b"),
    }
}

pub fn isolated_variable_gadget() -> OpenGadget {
    let mut g = OpenGadget::default();
    let w = wire_variable(&mut g, "x");
    g.add_edge(w.p, w.q2, Some("x.eF"));
    g
}

pub fn isolated_clause_gadget() -> OpenGadget {
    let mut g = OpenGadget::default();
    let w = wire_clause(&mut g, "C");
    for k in 1..4 {
        g.add_edge(w.u[0], w.u[k], Some(&format!("C.f{k}")));
    }
    g
}

/// Boundary nodes `X`, `Y` (ends of the split `e_F` edge) and `U`, `V` (ends
/// of the replaced `f` edge).
pub fn isolated_connection_gadget() -> OpenGadget {
    let mut g = OpenGadget::default();
    let x = g.add_node("X", true);
    let y = g.add_node("Y", true);
    let u = g.add_node("U", true);
    let v = g.add_node("V", true);
    let w = wire_connection(&mut g, "K", x, u, v);
    g.add_edge(w.nodes[5], y, Some("K.eps4"));
    g
}

/// G' node ids and edge indices of a variable gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGadget {
    pub p: usize,
    pub q: usize,
    pub p2: usize,
    pub q2: usize,
    pub mid: usize,
    pub e_t: usize,
    /// Last edge of the `e_F` chain (the plain `e_F` edge when the variable
    /// never occurs).
    pub e_f_tail: usize,
    pub connections: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    pub u: [usize; 4],
    pub v: [usize; 4],
    pub u_edges: Vec<((usize, usize), usize)>,
    pub v_edges: Vec<((usize, usize), usize)>,
    pub connections: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionGadget {
    pub var: usize,
    pub clause: usize,
    /// Literal position in the clause, 0-based.
    pub position: usize,
    /// `[e1, e2, e4, e5, e7, e8, a, b]` as G' nodes.
    pub nodes: [usize; 8],
    pub eps1: usize,
    pub eps2: usize,
    pub eps3: usize,
    pub eps4: usize,
    pub eps4b: usize,
    pub eps5: usize,
    pub eps5b: usize,
    pub eps6: usize,
    pub e45: usize,
}

/// The 2-matching reduction: the gadget graph G', its weight-{1,2} instance
/// and the gadget layout.
#[derive(Debug, Clone)]
pub struct MatchingReduction {
    pub cnf: CnfFormula,
    pub built: BuiltGraph,
    pub instance: MetricInstance,
    pub annotations: Annotations,
    /// Owning gadget of every G' node.
    pub owners: Vec<Owner>,
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub connections: Vec<ConnectionGadget>,
}

pub fn reduce_1in3_to_2matching(cnf: &CnfFormula) -> Result<MatchingReduction, GenError> {
    if cnf.flavor() != Flavor::MonotoneOneInThree {
        return Err(GenError::WrongFlavor { got: cnf.flavor(), want: Flavor::MonotoneOneInThree });
    }
    let mut b = GadgetBuilder::new();
    let mut real_owner = Vec::new();
    let mut path_owner = Vec::new();
    let mut claim = |b: &GadgetBuilder, owner: Owner| {
        real_owner.resize(b.n_real(), owner);
        path_owner.resize(b.n_paths(), owner);
    };
    let vars: Vec<VarWires> = (0..cnf.n_vars())
        .map(|i| {
            let w = wire_variable(&mut b, &format!("x{}", i + 1));
            claim(&b, Owner::Variable(i));
            w
        })
        .collect();
    let clauses: Vec<ClauseWires> = (0..cnf.clauses().len())
        .map(|j| {
            let w = wire_clause(&mut b, &format!("C{}", j + 1));
            claim(&b, Owner::Clause(j));
            w
        })
        .collect();
    let mut tail: Vec<usize> = vars.iter().map(|v| v.p).collect();
    let mut var_conns: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    let mut conns: Vec<(usize, usize, usize, ConnWires)> = Vec::new();
    for (j, clause) in cnf.clauses().iter().enumerate() {
        for (k, &lit) in clause.iter().enumerate() {
            let i = lit as usize - 1;
            let c = conns.len();
            let w = wire_connection(&mut b, &format!("K{}", c + 1), tail[i], clauses[j].u[0], clauses[j].u[k + 1]);
            claim(&b, Owner::Connection(c));
            tail[i] = w.nodes[5];
            var_conns[i].push(c);
            conns.push((i, j, k, w));
        }
    }
    let tails: Vec<usize> = (0..vars.len())
        .map(|i| {
            let label = match var_conns[i].last() {
                Some(c) => format!("K{}.eps4", c + 1),
                None => format!("x{}.eF", i + 1),
            };
            b.add_edge(tail[i], vars[i].q2, Some(label))
        })
        .collect();
    let built = b.build()?;
    let n_pairs = built.graph.n_pairs();
    let node = |r: usize| built.node_of[r];
    let mut owners = vec![Owner::Variable(0); 3 * n_pairs];
    for (r, &o) in real_owner.iter().enumerate() {
        owners[node(r)] = o;
    }
    for (i, &o) in path_owner.iter().enumerate() {
        owners[built.dummy_of_path[i]] = o;
    }
    let connections: Vec<ConnectionGadget> = conns
        .iter()
        .enumerate()
        .map(|(c, (i, j, k, w))| {
            let pos = var_conns[*i].iter().position(|&x| x == c).expect("registered");
            let eps4 = match var_conns[*i].get(pos + 1) {
                Some(&next) => conns[next].3.eps6,
                None => tails[*i],
            };
            ConnectionGadget {
                var: *i,
                clause: *j,
                position: *k,
                nodes: w.nodes.map(node),
                eps1: w.eps1,
                eps2: w.eps2,
                eps3: w.eps3,
                eps4,
                eps4b: w.eps4b,
                eps5: w.eps5,
                eps5b: w.eps5b,
                eps6: w.eps6,
                e45: w.e45,
            }
        })
        .collect();
    let variables = vars
        .iter()
        .enumerate()
        .map(|(i, w)| VariableGadget {
            p: node(w.p),
            q: node(w.q),
            p2: node(w.p2),
            q2: node(w.q2),
            mid: w.mid,
            e_t: w.e_t,
            e_f_tail: tails[i],
            connections: var_conns[i].clone(),
        })
        .collect();
    let clause_gadgets = clauses
        .iter()
        .enumerate()
        .map(|(j, w)| ClauseGadget {
            u: w.u.map(node),
            v: w.v.map(node),
            u_edges: w.u_edges.clone(),
            v_edges: w.v_edges.clone(),
            connections: [0, 1, 2].map(|k| 3 * j + k),
        })
        .collect();
    let annotations = built.names.iter().cloned().enumerate().collect();
    let instance = built.to_instance().with_meta(serde_json::json!({
        "family": "reduce-1in3",
        "vars": cnf.n_vars(),
        "clauses": cnf.clauses().len(),
    }));
    Ok(MatchingReduction {
        cnf: cnf.clone(),
        instance,
        annotations,
        owners,
        variables,
        clauses: clause_gadgets,
        connections,
        built,
    })
}

/// Outcome of the forward check, with cover edges counted per gadget. Each
/// cycle is walked in order and every edge is charged to the gadget owning
/// its tail node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetCounts {
    pub ok: bool,
    pub decoded: bool,
    pub edges_per_clause: Vec<usize>,
    pub edges_per_variable: Vec<usize>,
    pub edges_per_connection: Vec<usize>,
    #[serde(skip)]
    pub cover: CycleCover,
}

impl GadgetCounts {
    pub fn uniform(&self) -> Option<(usize, usize, usize)> {
        let same = |v: &[usize]| match v {
            [] => Some(None),
            [x, rest @ ..] => rest.iter().all(|y| y == x).then_some(Some(*x)),
        };
        let c = same(&self.edges_per_clause)?;
        let v = same(&self.edges_per_variable)?;
        let k = same(&self.edges_per_connection)?;
        Some((c.unwrap_or(0), v.unwrap_or(0), k.unwrap_or(0)))
    }
}

/// Builds the cover induced by a 1-in-3 assignment: `e_T` on for true
/// variables and the whole `e_F` chain on for false ones; connections of true
/// variables take their `f` state; each clause routes the pseudoedge of its
/// true literal and matches the remaining K4 nodes.
pub fn verify_forward_2matching(red: &MatchingReduction, assignment: &[bool]) -> Result<GadgetCounts, GenError> {
    let n = red.cnf.n_vars();
    if assignment.len() != n {
        return Err(GenError::AssignmentLength { got: assignment.len(), want: n });
    }
    if !red.cnf.one_in_three_by(assignment) {
        return Err(GenError::AssignmentNotOneInThree);
    }
    let mut on = Vec::new();
    for (i, g) in red.variables.iter().enumerate() {
        on.push(g.mid);
        if assignment[i] {
            on.push(g.e_t);
        } else if g.connections.is_empty() {
            on.push(g.e_f_tail);
        } else {
            for &c in &g.connections {
                let k = &red.connections[c];
                on.extend([k.eps6, k.eps2, k.eps4b, k.e45, k.eps4]);
            }
        }
    }
    for k in &red.connections {
        if assignment[k.var] {
            on.extend([k.eps1, k.eps5b, k.e45, k.eps3, k.eps5]);
        }
    }
    for (j, clause) in red.cnf.clauses().iter().enumerate() {
        let g = &red.clauses[j];
        let t = clause.iter().position(|&l| assignment[l as usize - 1]).expect("one true literal");
        let rest: Vec<usize> = (1..4).filter(|&l| l != t + 1).collect();
        let pick = |edges: &[((usize, usize), usize)], a: usize, b: usize| {
            edges.iter().find(|(e, _)| *e == (a, b)).map(|(_, i)| *i).expect("K4 edge")
        };
        on.push(pick(&g.u_edges, rest[0], rest[1]));
        on.push(pick(&g.v_edges, 0, t + 1));
        on.push(pick(&g.v_edges, rest[0], rest[1]));
    }
    on.sort_unstable();
    on.dedup();
    let graph = &red.built.graph;
    let mut choice = vec![usize::MAX; graph.n_real()];
    for &e in &on {
        let edge = &graph.edges()[e];
        for x in [edge.u, edge.v] {
            if choice[x] != usize::MAX {
                return Err(CoverError::BadCover(format!("node {} covered twice", red.annotations[&x])).into());
            }
            choice[x] = e;
        }
    }
    if let Some(x) = choice.iter().position(|&c| c == usize::MAX) {
        return Err(CoverError::BadCover(format!("node {} uncovered", red.annotations[&x])).into());
    }
    let cover = cover_from_choices(graph, &choice)?;
    validate_cover(graph, &cover)?;
    let decoded = match decode_cover(graph, &cover) {
        Ok((_, pair)) => {
            validate_solution(&red.instance, &pair).is_ok()
                && pair.blue_edges.iter().chain(&pair.red_edges).all(|&(u, v)| red.instance.w(u, v) == &Weight::one())
        }
        Err(_) => false,
    };
    let mut per_clause = vec![0; red.clauses.len()];
    let mut per_variable = vec![0; red.variables.len()];
    let mut per_connection = vec![0; red.connections.len()];
    for cycle in &cover.cycles {
        for &v in cycle {
            match red.owners[v] {
                Owner::Clause(j) => per_clause[j] += 1,
                Owner::Variable(i) => per_variable[i] += 1,
                Owner::Connection(c) => per_connection[c] += 1,
            }
        }
    }
    let (pc, pv, pk) = STATED_COUNTS;
    let ok = decoded
        && per_clause.iter().all(|&x| x == pc)
        && per_variable.iter().all(|&x| x == pv)
        && per_connection.iter().all(|&x| x == pk);
    Ok(GadgetCounts {
        ok,
        decoded,
        edges_per_clause: per_clause,
        edges_per_variable: per_variable,
        edges_per_connection: per_connection,
        cover,
    })
}

/// Min-sum and min-max cover cost per `m` on a formula with `15m` clauses and
/// `8.4m` variables, given per-gadget edge counts (three connections per
/// clause).
pub fn symbolic_cost(counts: (usize, usize, usize)) -> (Weight, Weight) {
    let (c, v, k) = counts;
    let fifths = (75 * c + 42 * v + 225 * k) as u64;
    (Weight::ratio(fifths, 5), Weight::ratio(fifths, 10))
}
